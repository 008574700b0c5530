#include "doctest.h"

#include <stdexcept>

#include "wlmc/engine.hpp"

using namespace wlmc;

namespace {

Property mk(const std::string& name, PropRole role, PropShape shape, ExprId a,
            ExprId b = kNoExpr) {
  Property p;
  p.name = name;
  p.role = role;
  p.shape = shape;
  p.a = a;
  p.b = b;
  return p;
}

// Free-running 3-bit counter with an equality assertion.
Monitored counter_net(std::uint64_t bad_value) {
  Netlist n;
  SigId c = n.add_register("c", 3, 0);
  n.set_next(c, n.Add(n.R(c), n.C(3, 1)));
  n.add_property(mk("avoid", PropRole::Assert, PropShape::Bool,
                    n.Neq(n.R(c), n.C(3, bad_value))));
  return compile_monitors(n);
}

// Counter that only increments when inc is high, with an optional pin on inc.
Monitored gated_counter(int pin_inc /* -1 = free */) {
  Netlist n;
  SigId inc = n.add_input("inc", 1);
  SigId c = n.add_register("c", 3, 0);
  n.set_next(c, n.Mux(n.R(inc), n.Add(n.R(c), n.C(3, 1)), n.R(c)));
  if (pin_inc == 0)
    n.add_property(mk("inc_low", PropRole::Assume, PropShape::Bool, n.Not(n.R(inc))));
  else if (pin_inc == 1)
    n.add_property(mk("inc_high", PropRole::Assume, PropShape::Bool, n.R(inc)));
  n.add_property(mk("avoid2", PropRole::Assert, PropShape::Bool,
                    n.Neq(n.R(c), n.C(3, 2))));
  n.add_property(mk("reach2", PropRole::Cover, PropShape::Bool,
                    n.EqC(n.R(c), 2)));
  return compile_monitors(n);
}

} // namespace

TEST_CASE("bmc finds the shortest counterexample frame") {
  Monitored m = counter_net(5);
  CheckResult r = bmc(m, 0, 10);
  CHECK(r.verdict == Verdict::Falsified);
  CHECK(r.frame == 5);
  CHECK(r.method == "bmc");
  REQUIRE(r.trace.has_value());
  CHECK(r.trace->length() == 6);
  CHECK_FALSE(r.cti);
}

TEST_CASE("bmc is inconclusive when the bound is too small") {
  Monitored m = counter_net(5);
  CheckResult r = bmc(m, 0, 4);
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.k == 4);
}

TEST_CASE("constraints steer bounded search") {
  Monitored pinned_high = gated_counter(1);
  PropId avoid = 1, cover = 2;
  CheckResult r1 = bmc(pinned_high, avoid, 10);
  CHECK(r1.verdict == Verdict::Falsified);
  CHECK(r1.frame == 2);

  Monitored pinned_low = gated_counter(0);
  CheckResult r2 = bmc(pinned_low, avoid, 10);
  CHECK(r2.verdict == Verdict::Unknown);

  CheckResult c1 = check_cover(pinned_high, cover, 10);
  CHECK(c1.verdict == Verdict::Proved);
  CHECK(c1.frame == 2);
  REQUIRE(c1.trace.has_value());
  CHECK(c1.trace->length() == 3);

  CheckResult c2 = check_cover(pinned_low, cover, 10);
  CHECK(c2.verdict == Verdict::Unknown);
}

TEST_CASE("induction proves a held counter at depth one") {
  Monitored m = gated_counter(0);
  CheckResult r = k_induction(m, 1, {}, 1);
  CHECK(r.verdict == Verdict::Proved);
  CHECK(r.k == 1);
  CHECK(r.method == "kind");
}

TEST_CASE("non-inductive invariants need a deeper induction") {
  // States 0 -> 1 -> 0 with unreachable 2 -> 3; 3 is bad and has the only
  // inbound edge from 2, so depth two rules the path out.
  Netlist n;
  SigId c = n.add_register("c", 2, 0);
  n.set_next(c, n.Mux(n.EqC(n.R(c), 0), n.C(2, 1),
                      n.Mux(n.EqC(n.R(c), 1), n.C(2, 0),
                            n.Add(n.R(c), n.C(2, 1)))));
  n.add_property(mk("no3", PropRole::Assert, PropShape::Bool,
                    n.Neq(n.R(c), n.C(2, 3))));
  Monitored m = compile_monitors(n);

  CheckResult shallow = k_induction(m, 0, {}, 1);
  CHECK(shallow.verdict == Verdict::Unknown);
  CHECK(shallow.cti);
  CHECK(shallow.trace.has_value());

  CheckResult swept = k_induction_sweep(m, 0, {}, 3);
  CHECK(swept.verdict == Verdict::Proved);
  CHECK(swept.k == 2);
}

TEST_CASE("state uniqueness breaks unreachable loops") {
  // Reachable cycle {0,1,2}; unreachable cycle {4,5,6} that can exit to the
  // bad state 7. Plain induction pumps the loop forever; distinct-state
  // side conditions cap the pumping.
  Netlist n;
  SigId in = n.add_input("in", 1);
  SigId c = n.add_register("c", 3, 0);
  ExprId mod3 = n.Mux(n.EqC(n.R(c), 2), n.C(3, 0), n.Add(n.R(c), n.C(3, 1)));
  ExprId high = n.Mux(n.EqC(n.R(c), 6), n.Mux(n.R(in), n.C(3, 4), n.C(3, 7)),
                      n.Add(n.R(c), n.C(3, 1)));
  n.set_next(c, n.Mux(n.Lt(n.R(c), n.C(3, 3)), mod3, high));
  n.add_property(mk("no7", PropRole::Assert, PropShape::Bool,
                    n.Neq(n.R(c), n.C(3, 7))));
  Monitored m = compile_monitors(n);

  CheckResult plain = k_induction_sweep(m, 0, {}, 8, false);
  CHECK(plain.verdict == Verdict::Unknown);
  CHECK(plain.cti);

  CheckResult unique = k_induction_sweep(m, 0, {}, 8, true);
  CHECK(unique.verdict == Verdict::Proved);
  CHECK(unique.k == 5);
}

TEST_CASE("lemmas carry one proof into another") {
  Netlist n;
  SigId a = n.add_register("a", 1, 1);
  SigId b = n.add_register("b", 1, 1);
  n.set_next(a, n.R(a));
  n.set_next(b, n.R(a));
  PropId pa = n.add_property(mk("a_high", PropRole::Assert, PropShape::Bool, n.R(a)));
  PropId pb = n.add_property(mk("b_high", PropRole::Assert, PropShape::Bool, n.R(b)));
  Monitored m = compile_monitors(n);

  CheckResult alone = k_induction(m, pb, {}, 1);
  CHECK(alone.verdict == Verdict::Unknown);

  CheckResult pre = k_induction(m, pa, {}, 1);
  REQUIRE(pre.verdict == Verdict::Proved);
  CheckResult with = k_induction(m, pb, {pa}, 1);
  CHECK(with.verdict == Verdict::Proved);
}

TEST_CASE("induction base case still catches real counterexamples") {
  Monitored m = counter_net(3);
  CheckResult r = k_induction_sweep(m, 0, {}, 6);
  CHECK(r.verdict == Verdict::Falsified);
  CHECK(r.frame == 3);
  REQUIRE(r.trace.has_value());
  CHECK_FALSE(r.cti);
}

TEST_CASE("time budgets mark results instead of hanging") {
  Netlist n;
  SigId c = n.add_register("c", 8, 0);
  n.set_next(c, n.Add(n.R(c), n.C(8, 1)));
  n.add_property(mk("far", PropRole::Assert, PropShape::Bool,
                    n.Neq(n.R(c), n.C(8, 200))));
  Monitored m = compile_monitors(n);
  Budget tiny;
  tiny.max_seconds = 1e-9;
  CheckResult r = bmc(m, 0, 150, {}, tiny);
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.budget_hit);
}

TEST_CASE("cover and non-assert lemmas are rejected loudly") {
  Monitored m = gated_counter(0); // props: 0 assume, 1 assert, 2 cover
  CHECK_THROWS_AS(bmc(m, 2, 3), std::logic_error);          // cover as assert
  CHECK_THROWS_AS(check_cover(m, 1, 3), std::logic_error);  // assert as cover
  CHECK_THROWS_AS(bmc(m, 1, 3, {2}), std::logic_error);     // cover as lemma
}

namespace {

// Latch that never clears: once flag is set the goal (the flag itself) holds
// forever, so "flag leads to flag" is provable with a trivial rank.
Monitored latch_liveness(bool with_hint) {
  Netlist n;
  SigId set = n.add_input("set", 1);
  SigId flag = n.add_register("flag", 1, 0);
  n.set_next(flag, n.Or(n.R(flag), n.R(set)));
  Property p;
  p.name = "flag_sticks";
  p.role = PropRole::Assert;
  p.shape = PropShape::Eventually;
  p.a = n.R(flag);
  p.b = n.R(flag);
  p.fairness.push_back(n.C(1, 1));
  if (with_hint) {
    RankHint h;
    h.rank = n.C(1, 0);
    h.trigger_reg = flag;
    h.goal_reg = flag;
    p.hint = h;
  }
  n.add_property(std::move(p));
  return compile_monitors(n);
}

} // namespace

TEST_CASE("liveness with a rank hint is proved through the translation") {
  Monitored m = latch_liveness(true);
  LivenessSafety ls = liveness_to_safety(m, 0);
  CHECK(ls.aux_props.size() >= 5);
  CheckResult r = check_liveness(m, 0, {}, 10);
  CHECK(r.verdict == Verdict::Proved);
  CHECK(r.method == "live2safe");
}

TEST_CASE("liveness without a hint on the same net stays inconclusive") {
  Monitored m = latch_liveness(false);
  CheckResult r = check_liveness(m, 0, {}, 6);
  CHECK(r.verdict == Verdict::Unknown);
}

TEST_CASE("a trigger that never completes yields a fair lasso") {
  Netlist n;
  SigId t = n.add_input("t", 1);
  SigId g = n.add_input("g", 1);
  Property p;
  p.name = "t_leads_g";
  p.role = PropRole::Assert;
  p.shape = PropShape::Eventually;
  p.a = n.R(t);
  p.b = n.R(g);
  p.fairness.push_back(n.C(1, 1));
  n.add_property(std::move(p));
  Monitored m = compile_monitors(n);

  CheckResult r = check_liveness(m, 0, {}, 10);
  CHECK(r.verdict == Verdict::Falsified);
  CHECK(r.trace.has_value());
}

TEST_CASE("liveness requires fairness") {
  Netlist n;
  SigId t = n.add_input("t", 1);
  Property p;
  p.name = "bare";
  p.role = PropRole::Assert;
  p.shape = PropShape::Eventually;
  p.a = n.R(t);
  p.b = n.R(t);
  n.add_property(std::move(p));
  Monitored m = compile_monitors(n);
  CHECK_THROWS_AS(liveness_to_safety(m, 0), std::invalid_argument);
}

TEST_CASE("plans order steps by lemma dependencies") {
  Netlist n;
  SigId a = n.add_register("a", 1, 1);
  SigId b = n.add_register("b", 1, 1);
  n.set_next(a, n.R(a));
  n.set_next(b, n.R(a));
  PropId pa = n.add_property(mk("a_high", PropRole::Assert, PropShape::Bool, n.R(a)));
  PropId pb = n.add_property(mk("b_high", PropRole::Assert, PropShape::Bool, n.R(b)));
  Monitored m = compile_monitors(n);

  // Dependent step listed first: the runner must still prove both.
  std::vector<PlanStep> steps(2);
  steps[0].name = "b_high";
  steps[0].prop = pb;
  steps[0].lemmas = {pa};
  steps[0].k = 1;
  steps[1].name = "a_high";
  steps[1].prop = pa;
  steps[1].k = 1;
  PlanReport rep = run_plan(m, steps);
  CHECK(rep.all_conclusive());
  CHECK(rep.steps.size() == 2);
  for (const PlanStepResult& s : rep.steps)
    CHECK(s.result.verdict == Verdict::Proved);

  PlanReport rep2 = run_plan(m, steps, 2);
  CHECK(rep2.all_conclusive());
}

TEST_CASE("a failed lemma skips its dependents") {
  Netlist n;
  SigId a = n.add_register("a", 1, 0); // starts low: a_high is false
  SigId b = n.add_register("b", 1, 1);
  n.set_next(a, n.R(a));
  n.set_next(b, n.R(b));
  PropId pa = n.add_property(mk("a_high", PropRole::Assert, PropShape::Bool, n.R(a)));
  PropId pb = n.add_property(mk("b_high", PropRole::Assert, PropShape::Bool, n.R(b)));
  Monitored m = compile_monitors(n);

  std::vector<PlanStep> steps(2);
  steps[0].name = "a_high";
  steps[0].prop = pa;
  steps[0].method = Method::Bmc;
  steps[0].k = 3;
  steps[1].name = "b_high";
  steps[1].prop = pb;
  steps[1].lemmas = {pa};
  steps[1].k = 1;
  PlanReport rep = run_plan(m, steps);
  CHECK(rep.steps[0].result.verdict == Verdict::Falsified);
  CHECK(rep.steps[1].result.verdict == Verdict::Skipped);
  CHECK_FALSE(rep.all_conclusive());
}

TEST_CASE("plan csv carries the fixed schema") {
  Monitored m = counter_net(5);
  std::vector<PlanStep> steps(1);
  steps[0].name = "avoid";
  steps[0].prop = 0;
  steps[0].method = Method::Bmc;
  steps[0].k = 10;
  PlanReport rep = run_plan(m, steps);
  std::string csv = plan_csv(rep, "counter", "w=3");
  CHECK(csv.find("design,params,property,method,k,verdict,frames,time_ms,conflicts\n") == 0);
  CHECK(csv.find("counter,w=3,avoid,bmc,") != std::string::npos);
  CHECK(csv.find("Falsified") != std::string::npos);
  // The frames column for a falsified bound is the failing frame.
  CHECK(csv.find(",5,") != std::string::npos);
}
