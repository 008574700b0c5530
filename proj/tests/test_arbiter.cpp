#include <vector>

#include "doctest.h"
#include "wlmc/designs.hpp"
#include "wlmc/engine.hpp"
#include "wlmc/monitor.hpp"
#include "wlmc/oracle.hpp"
#include "wlmc/scoreboards.hpp"

using namespace wlmc;

namespace {

const ArbiterPolicy kPolicies[] = {ArbiterPolicy::PriorityFcfs,
                                   ArbiterPolicy::RoundRobin,
                                   ArbiterPolicy::PlainPriority};

} // namespace

TEST_CASE("arbiter tracker plans prove at n=4 for every policy") {
  for (ArbiterPolicy pol : kPolicies) {
    CAPTURE(policy_name(pol));
    ArbiterDesign d = build_arbiter(4, pol);
    ArbiterTracker t = attach_arbiter_tracker(d);
    REQUIRE(d.net.validate().ok());
    Monitored m = compile_monitors(d.net);
    PlanReport rep = run_plan(m, arbiter_tracker_plan(d, t));
    for (const auto& r : rep.steps) {
      CAPTURE(r.step.name);
      CHECK(r.result.verdict == Verdict::Proved);
    }
    // The power of two index space needs no range assumption.
    CHECK(t.assume_watched == kNoProp);
  }
}

TEST_CASE("arbiter tracker agrees with enumeration at n=3") {
  for (ArbiterPolicy pol : kPolicies) {
    CAPTURE(policy_name(pol));
    ArbiterDesign d = build_arbiter(3, pol);
    ArbiterTracker t = attach_arbiter_tracker(d);
    CHECK(t.assume_watched != kNoProp);
    Monitored m = compile_monitors(d.net);
    ExplicitOracle orc(m);
    REQUIRE(orc.enumerate());

    for (PropId p = 0; p < static_cast<PropId>(d.net.props.size()); ++p) {
      const Property& pr = d.net.props[p];
      CAPTURE(pr.name);
      if (pr.role == PropRole::Assert && pr.shape != PropShape::Eventually) {
        auto ref = orc.check_safety(p);
        CHECK(ref.holds);
        CHECK(bmc(m, p, 8).verdict == Verdict::Unknown);
      } else if (pr.role == PropRole::Cover) {
        auto ref = orc.check_cover(p);
        REQUIRE(ref.reachable);
        CheckResult got = check_cover(m, p, 8);
        CHECK(got.verdict == Verdict::Proved);
        CHECK(got.frame == ref.frame);
      }
    }

    auto live_ref = orc.check_liveness(t.live);
    Budget b;
    CheckResult live = check_liveness(
        m, t.live, {t.inv_pending, t.inv_count}, 16, b);
    if (pol == ArbiterPolicy::PlainPriority) {
      CHECK_FALSE(live_ref.holds);
      CHECK(live.verdict == Verdict::Falsified);
      REQUIRE(live.trace.has_value());
    } else {
      CHECK(live_ref.holds);
      CHECK(live.verdict == Verdict::Proved);
    }
  }
}

TEST_CASE("tie refresh keeps the age matrix honest after regrants") {
  // A requestor that re-arrives after being serviced must requeue behind
  // everyone already waiting; stale age bits from its first visit would
  // otherwise let it jump the line.
  ArbiterDesign d = build_arbiter(4, ArbiterPolicy::PriorityFcfs);
  ArbiterTracker t = attach_arbiter_tracker(d);
  Monitored m = compile_monitors(d.net);
  ExplicitOracle orc(m);
  REQUIRE(orc.enumerate());
  auto r = orc.check_safety(t.master);
  CHECK(r.holds);
}

TEST_CASE("arbiter master without lemmas stays inconclusive") {
  ArbiterDesign d = build_arbiter(4, ArbiterPolicy::PriorityFcfs);
  ArbiterTracker t = attach_arbiter_tracker(d);
  Monitored m = compile_monitors(d.net);
  Budget b;
  b.max_seconds = 20;
  CheckResult r = k_induction_sweep(m, t.master, {}, 4, false, b);
  CHECK(r.verdict == Verdict::Unknown);
}
