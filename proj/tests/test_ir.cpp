#include "doctest.h"

#include <algorithm>
#include <bit>
#include <random>

#include "test_util.hpp"
#include "wlmc/ir.hpp"

using namespace wlmc;

TEST_CASE("arithmetic wraps to the declared width") {
  Netlist n;
  SigId a = n.add_input("a", 4);
  SigId b = n.add_input("b", 4);
  ExprId sum = n.Add(n.R(a), n.R(b));
  ExprId dif = n.Sub(n.R(a), n.R(b));

  Valuation in(n.sigs.size(), 0);
  in[a] = 13;
  in[b] = 7;
  SimState st = initial_state(n);
  Evaluator ev(n);
  Valuation v = ev.run(st, in);
  CHECK(eval_expr(n, v, sum) == ((13 + 7) & 0xf));
  CHECK(eval_expr(n, v, dif) == ((13 - 7) & 0xf));
  in[b] = 15;
  v = ev.run(st, in);
  CHECK(eval_expr(n, v, dif) == ((13 - 15) & 0xf));
}

TEST_CASE("comparison, mux, concat, slice, countones semantics") {
  Netlist n;
  SigId a = n.add_input("a", 3);
  SigId b = n.add_input("b", 3);
  ExprId lt = n.Lt(n.R(a), n.R(b));
  ExprId ge = n.Geq(n.R(a), n.R(b));
  ExprId eq = n.Eq(n.R(a), n.R(b));
  ExprId ne = n.Neq(n.R(a), n.R(b));
  ExprId mx = n.Mux(lt, n.R(a), n.R(b));
  ExprId cc = n.ConcatE(n.R(a), n.R(b));
  ExprId sl = n.SliceE(cc, 4, 2);
  ExprId co = n.CountOnes(cc);
  ExprId ro = n.ReduceOrE(n.R(a));

  CHECK(n.width_of(cc) == 6);
  CHECK(n.width_of(sl) == 3);

  Evaluator ev(n);
  SimState st = initial_state(n);
  Valuation in(n.sigs.size(), 0);
  for (std::uint64_t av = 0; av < 8; ++av)
    for (std::uint64_t bv = 0; bv < 8; ++bv) {
      in[a] = av;
      in[b] = bv;
      Valuation v = ev.run(st, in);
      CHECK(eval_expr(n, v, lt) == (av < bv ? 1u : 0u));
      CHECK(eval_expr(n, v, ge) == (av >= bv ? 1u : 0u));
      CHECK(eval_expr(n, v, eq) == (av == bv ? 1u : 0u));
      CHECK(eval_expr(n, v, ne) == (av != bv ? 1u : 0u));
      CHECK(eval_expr(n, v, mx) == (av < bv ? av : bv));
      CHECK(eval_expr(n, v, cc) == ((av << 3) | bv));
      CHECK(eval_expr(n, v, sl) == (((av << 3) | bv) >> 2 & 7));
      CHECK(eval_expr(n, v, co) ==
            std::uint64_t(std::popcount((av << 3) | bv)));
      CHECK(eval_expr(n, v, ro) == (av != 0 ? 1u : 0u));
    }
}

TEST_CASE("select builds an LSB-first mux tree with clamped tail") {
  Netlist n;
  SigId idx = n.add_input("idx", 2);
  std::vector<ExprId> elems{n.C(8, 10), n.C(8, 20), n.C(8, 30)};
  ExprId sel = n.Select(n.R(idx), elems);
  Evaluator ev(n);
  SimState st = initial_state(n);
  Valuation in(n.sigs.size(), 0);
  std::uint64_t expect[4] = {10, 20, 30, 30}; // out-of-range picks the last
  for (std::uint64_t i = 0; i < 4; ++i) {
    in[idx] = i;
    Valuation v = ev.run(st, in);
    CHECK(eval_expr(n, v, sel) == expect[i]);
  }
}

TEST_CASE("registers advance with step and gated domains hold") {
  Netlist n;
  DomainId d = n.add_domain("slow");
  SigId tick = n.add_input("tick_slow", 1);
  n.domains[d].tick = tick;
  SigId fast = n.add_register("fast", 4, 0);
  SigId slow = n.add_register("slow_r", 4, 0, d);
  n.set_next(fast, n.Add(n.R(fast), n.C(4, 1)));
  n.set_next(slow, n.Add(n.R(slow), n.C(4, 1)));
  REQUIRE(n.validate().ok());

  SimState st = initial_state(n);
  Evaluator ev(n);
  Valuation in(n.sigs.size(), 0);
  for (int c = 0; c < 6; ++c) {
    in[tick] = (c % 2);
    ev.run(st, in);
    SimState nx;
    ev.step_into(st, nx);
    st = nx;
  }
  CHECK(st.regs[fast] == 6);
  CHECK(st.regs[slow] == 3);
}

TEST_CASE("frozen signals keep their initial value") {
  Netlist n;
  SigId f = n.add_frozen("sym", 5);
  SigId r = n.add_register("r", 5, 0);
  n.set_next(r, n.R(f));
  SimState st = initial_state(n, {{f, 21}});
  Evaluator ev(n);
  Valuation in(n.sigs.size(), 0);
  for (int c = 0; c < 3; ++c) {
    ev.run(st, in);
    SimState nx;
    ev.step_into(st, nx);
    st = nx;
    CHECK(st.regs[f] == 21);
  }
  CHECK(st.regs[r] == 21);
}

TEST_CASE("validate rejects malformed nets") {
  SUBCASE("register without next") {
    Netlist n;
    n.add_register("r", 2, 0);
    CHECK_FALSE(n.validate().ok());
  }
  SUBCASE("width mismatch in next is rejected at wiring time") {
    Netlist n;
    SigId r = n.add_register("r", 2, 0);
    CHECK_THROWS(n.set_next(r, n.C(3, 0)));
  }
  SUBCASE("combinational cycle") {
    Netlist n;
    SigId a = n.add_input("a", 1);
    SigId c1 = n.add_comb("c1", n.R(a));
    SigId c2 = n.add_comb("c2", n.R(c1));
    // Rewire c1's definition to close a cycle c1 -> c2 -> c1.
    n.sigs[c1].def = n.R(c2);
    CHECK_FALSE(n.validate().ok());
  }
  SUBCASE("well-formed net passes") {
    Netlist n;
    SigId r = n.add_register("r", 2, 0);
    n.set_next(r, n.Add(n.R(r), n.C(2, 1)));
    CHECK(n.validate().ok());
  }
}

TEST_CASE("evaluator matches eval_all on random nets") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 20; ++iter) {
    testutil::RandomNetOptions opt;
    opt.gated_domain = (iter % 2 == 1);
    Netlist n = testutil::random_netlist(rng, opt);
    REQUIRE(n.validate().ok());
    SimState st = initial_state(n);
    Evaluator ev(n);
    for (int c = 0; c < 4; ++c) {
      Valuation in = testutil::random_inputs(rng, n);
      Valuation v = ev.run(st, in);
      std::vector<std::pair<SigId, std::uint64_t>> pairs;
      for (SigId s = 0; s < n.sigs.size(); ++s)
        if (n.sigs[s].kind == SigKind::Input) pairs.emplace_back(s, in[s]);
      Valuation v2 = eval_all(n, st, pairs);
      CHECK(v == v2);
      SimState by_step = step(n, st, v);
      SimState nx;
      ev.step_into(st, nx);
      CHECK(by_step.regs == nx.regs);
      st = nx;
    }
  }
}

TEST_CASE("subst_expr rewrites references and shares untouched nodes") {
  Netlist n;
  SigId a = n.add_register("a", 4, 0);
  SigId b = n.add_register("b", 4, 0);
  n.set_next(a, n.Add(n.R(a), n.C(4, 1)));
  n.set_next(b, n.R(b));
  ExprId e = n.Add(n.R(a), n.R(b));

  SimState st = initial_state(n);
  st.regs[a] = 3;
  st.regs[b] = 5;

  SUBCASE("substituting one signal leaves the original intact") {
    ExprId na = n.R(b);
    ExprId out = subst_expr(n, e, [&](SigId s) -> std::optional<ExprId> {
      if (s == a) return na;
      return std::nullopt;
    });
    Valuation v = eval_all(n, st, {});
    CHECK(eval_expr(n, v, out) == 10); // b + b
    CHECK(eval_expr(n, v, e) == 8);    // original untouched
  }

  SUBCASE("no hit returns the same node") {
    ExprId out = subst_expr(n, e, [](SigId) -> std::optional<ExprId> {
      return std::nullopt;
    });
    CHECK(out == e);
  }

  SUBCASE("comb references are inlined before substitution") {
    SigId c = n.add_comb("c", n.Add(n.R(a), n.C(4, 2)));
    ExprId use = n.Add(n.R(c), n.R(b));
    ExprId out = subst_expr(n, use, [&](SigId s) -> std::optional<ExprId> {
      if (s == a) return n.C(4, 7);
      return std::nullopt;
    });
    st.regs[b] = 1;
    Valuation v = eval_all(n, st, {});
    CHECK(eval_expr(n, v, out) == 10); // (7 + 2) + 1
  }
}

TEST_CASE("comb_order is a topological order of comb definitions") {
  Netlist n;
  SigId a = n.add_input("a", 2);
  SigId c1 = n.add_comb("c1", n.Add(n.R(a), n.C(2, 1)));
  SigId c2 = n.add_comb("c2", n.Add(n.R(c1), n.C(2, 1)));
  SigId c3 = n.add_comb("c3", n.Add(n.R(c2), n.R(c1)));
  std::vector<SigId> order = n.comb_order();
  auto pos = [&](SigId s) {
    return std::find(order.begin(), order.end(), s) - order.begin();
  };
  CHECK(pos(c1) < pos(c2));
  CHECK(pos(c2) < pos(c3));
}
