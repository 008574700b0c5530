#include "doctest.h"

#include <random>

#include "wlmc/monitor.hpp"
#include "wlmc/trace.hpp"

using namespace wlmc;

namespace {

PropId add_prop(Netlist& n, const std::string& name, PropRole role,
                PropShape shape, ExprId a, ExprId b = kNoExpr,
                DomainId dom = kDomainFree) {
  Property p;
  p.name = name;
  p.role = role;
  p.shape = shape;
  p.domain = dom;
  p.a = a;
  p.b = b;
  return n.add_property(std::move(p));
}

} // namespace

TEST_CASE("bool assert monitors flag exactly the violating cycles") {
  Netlist n;
  SigId x = n.add_input("x", 4);
  add_prop(n, "x_low", PropRole::Assert, PropShape::Bool, n.Lt(n.R(x), n.C(4, 9)));
  Monitored m = compile_monitors(n);
  REQUIRE(m.mons.size() == 1);
  REQUIRE(m.mons[0].kind == MonitorKind::Bad);
  SigId bad = m.mons[0].sig;
  REQUIRE(bad != kNoSig);

  std::mt19937_64 rng(3);
  std::vector<Valuation> inputs(20, Valuation(m.net.sigs.size(), 0));
  for (auto& v : inputs) v[x] = rng() & 0xf;
  Trace t = simulate(m.net, initial_state(m.net), inputs);
  for (std::size_t c = 0; c < t.length(); ++c)
    CHECK(trace_bit(m.net, t, bad, c) == (t.cycles[c][x] >= 9));
}

TEST_CASE("same-cycle implication monitors") {
  Netlist n;
  SigId req = n.add_input("req", 1);
  SigId gnt = n.add_input("gnt", 1);
  add_prop(n, "req_gnt", PropRole::Assert, PropShape::ImplSame, n.R(req), n.R(gnt));
  Monitored m = compile_monitors(n);
  SigId bad = m.mons[0].sig;

  std::vector<Valuation> inputs(4, Valuation(m.net.sigs.size(), 0));
  inputs[1][req] = 1;             // req without gnt: violation
  inputs[2][req] = 1;
  inputs[2][gnt] = 1;             // satisfied
  inputs[3][gnt] = 1;             // vacuous
  Trace t = simulate(m.net, initial_state(m.net), inputs);
  CHECK_FALSE(trace_bit(m.net, t, bad, 0));
  CHECK(trace_bit(m.net, t, bad, 1));
  CHECK_FALSE(trace_bit(m.net, t, bad, 2));
  CHECK_FALSE(trace_bit(m.net, t, bad, 3));
}

TEST_CASE("next-cycle implication delays the antecedent by one tick") {
  Netlist n;
  SigId a = n.add_input("a", 1);
  SigId b = n.add_input("b", 1);
  add_prop(n, "a_then_b", PropRole::Assert, PropShape::ImplNext, n.R(a), n.R(b));
  Monitored m = compile_monitors(n);
  SigId bad = m.mons[0].sig;

  std::mt19937_64 rng(11);
  std::vector<Valuation> inputs(30, Valuation(m.net.sigs.size(), 0));
  for (auto& v : inputs) {
    v[a] = rng() & 1;
    v[b] = rng() & 1;
  }
  Trace t = simulate(m.net, initial_state(m.net), inputs);
  CHECK_FALSE(trace_bit(m.net, t, bad, 0)); // nothing delayed into cycle 0
  for (std::size_t c = 1; c < t.length(); ++c) {
    bool expect = t.cycles[c - 1][a] == 1 && t.cycles[c][b] == 0;
    CHECK(trace_bit(m.net, t, bad, c) == expect);
  }
}

TEST_CASE("gated-domain monitors only fire on ticks") {
  Netlist n;
  DomainId d = n.add_domain("slow");
  SigId tick = n.add_input("tick_slow", 1);
  n.domains[d].tick = tick;
  SigId a = n.add_input("a", 1);
  SigId b = n.add_input("b", 1);
  add_prop(n, "slow_impl", PropRole::Assert, PropShape::ImplNext, n.R(a), n.R(b), d);
  Monitored m = compile_monitors(n);
  SigId bad = m.mons[0].sig;

  std::mt19937_64 rng(17);
  std::vector<Valuation> inputs(40, Valuation(m.net.sigs.size(), 0));
  for (auto& v : inputs) {
    v[tick] = rng() & 1;
    v[a] = rng() & 1;
    v[b] = rng() & 1;
  }
  Trace t = simulate(m.net, initial_state(m.net), inputs);

  // Reference: fail when the previous ticked cycle had a, this tick lacks b.
  bool delayed = false;
  for (std::size_t c = 0; c < t.length(); ++c) {
    bool tk = t.cycles[c][tick] == 1;
    bool expect = tk && delayed && t.cycles[c][b] == 0;
    CHECK(trace_bit(m.net, t, bad, c) == expect);
    if (tk) delayed = t.cycles[c][a] == 1;
  }
}

TEST_CASE("assume monitors hold vacuously on skipped ticks") {
  Netlist n;
  DomainId d = n.add_domain("slow");
  SigId tick = n.add_input("tick_slow", 1);
  n.domains[d].tick = tick;
  SigId a = n.add_input("a", 1);
  add_prop(n, "a_high", PropRole::Assume, PropShape::Bool, n.R(a), kNoExpr, d);
  Monitored m = compile_monitors(n);
  REQUIRE(m.mons[0].kind == MonitorKind::Constraint);
  SigId con = m.mons[0].sig;

  std::vector<Valuation> inputs(4, Valuation(m.net.sigs.size(), 0));
  inputs[0][tick] = 0; inputs[0][a] = 0; // no tick: constraint holds
  inputs[1][tick] = 1; inputs[1][a] = 0; // violated
  inputs[2][tick] = 1; inputs[2][a] = 1; // satisfied
  inputs[3][tick] = 0; inputs[3][a] = 1;
  Trace t = simulate(m.net, initial_state(m.net), inputs);
  CHECK(trace_bit(m.net, t, con, 0));
  CHECK_FALSE(trace_bit(m.net, t, con, 1));
  CHECK(trace_bit(m.net, t, con, 2));
  CHECK(trace_bit(m.net, t, con, 3));
}

TEST_CASE("cover monitors fire on the witnessing cycle") {
  Netlist n;
  SigId x = n.add_input("x", 3);
  add_prop(n, "saw_five", PropRole::Cover, PropShape::Bool, n.EqC(n.R(x), 5));
  Monitored m = compile_monitors(n);
  REQUIRE(m.mons[0].kind == MonitorKind::Goal);
  SigId goal = m.mons[0].sig;

  std::vector<Valuation> inputs(3, Valuation(m.net.sigs.size(), 0));
  inputs[1][x] = 5;
  Trace t = simulate(m.net, initial_state(m.net), inputs);
  CHECK_FALSE(trace_bit(m.net, t, goal, 0));
  CHECK(trace_bit(m.net, t, goal, 1));
  CHECK_FALSE(trace_bit(m.net, t, goal, 2));
}

TEST_CASE("eventually properties become liveness monitors, not nets") {
  Netlist n;
  SigId t = n.add_input("t", 1);
  SigId g = n.add_input("g", 1);
  Property p;
  p.name = "t_leads_to_g";
  p.role = PropRole::Assert;
  p.shape = PropShape::Eventually;
  p.a = n.R(t);
  p.b = n.R(g);
  p.fairness.push_back(n.R(g));
  n.add_property(std::move(p));
  Monitored m = compile_monitors(n);
  REQUIRE(m.mons[0].kind == MonitorKind::Liveness);
  CHECK(m.mons[0].sig == kNoSig);
  CHECK(m.mons[0].trigger != kNoExpr);
  CHECK(m.mons[0].goal != kNoExpr);
  REQUIRE(m.mons[0].fairness.size() == 1);

  // In the free domain the gated expressions are the originals' values.
  SimState st = initial_state(m.net);
  Valuation v = eval_all(m.net, st, {{t, 1}});
  CHECK(eval_expr(m.net, v, m.mons[0].trigger) == 1);
  CHECK(eval_expr(m.net, v, m.mons[0].goal) == 0);
}

TEST_CASE("cover with next-cycle shape witnesses the pair of cycles") {
  Netlist n;
  SigId a = n.add_input("a", 1);
  SigId b = n.add_input("b", 1);
  add_prop(n, "ab_pair", PropRole::Cover, PropShape::ImplNext, n.R(a), n.R(b));
  Monitored m = compile_monitors(n);
  SigId goal = m.mons[0].sig;

  std::vector<Valuation> inputs(4, Valuation(m.net.sigs.size(), 0));
  inputs[0][a] = 1; // a then b: witness at cycle 1
  inputs[1][b] = 1;
  inputs[2][a] = 1; // a then no b
  Trace t = simulate(m.net, initial_state(m.net), inputs);
  CHECK_FALSE(trace_bit(m.net, t, goal, 0));
  CHECK(trace_bit(m.net, t, goal, 1));
  CHECK_FALSE(trace_bit(m.net, t, goal, 2));
  CHECK_FALSE(trace_bit(m.net, t, goal, 3));
}

TEST_CASE("compiling all properties aligns monitors with property ids") {
  Netlist n;
  SigId x = n.add_input("x", 2);
  add_prop(n, "p0", PropRole::Assert, PropShape::Bool, n.EqC(n.R(x), 0));
  add_prop(n, "p1", PropRole::Assume, PropShape::Bool, n.Lt(n.R(x), n.C(2, 3)));
  add_prop(n, "p2", PropRole::Cover, PropShape::Bool, n.EqC(n.R(x), 2));
  Monitored m = compile_monitors(n);
  REQUIRE(m.mons.size() == 3);
  CHECK(m.mons[0].kind == MonitorKind::Bad);
  CHECK(m.mons[1].kind == MonitorKind::Constraint);
  CHECK(m.mons[2].kind == MonitorKind::Goal);
  CHECK(m.mons[0].prop == 0);
  CHECK(m.mons[1].prop == 1);
  CHECK(m.mons[2].prop == 2);
}
