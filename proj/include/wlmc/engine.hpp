#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wlmc/encode.hpp"
#include "wlmc/monitor.hpp"
#include "wlmc/trace.hpp"

// Proof engines over a monitored netlist. Constraint monitors are asserted
// at every frame of every query. Assert monitors are checked one at a time;
// already-proved assert properties can be assumed as lemmas at every frame.

namespace wlmc {

enum class Verdict : std::uint8_t { Proved, Falsified, Unknown, Skipped };

const char* verdict_name(Verdict v);

struct Budget {
  std::uint64_t max_conflicts = 0; // per solver call; 0 = unlimited
  double max_seconds = 0;          // per obligation; 0 = unlimited
};

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  std::string method;
  int k = 0;      // bound reached or induction depth proved
  int frame = -1; // failing frame (Falsified) or witness frame (cover)
  std::optional<Trace> trace;
  bool cti = false; // trace is a step counterexample, not a reachable run
  bool budget_hit = false;
  std::uint64_t conflicts = 0;
  double time_ms = 0;
};

// Bounded check of one assert monitor: Falsified with the first failing
// frame and a replayed trace, else Unknown(k).
CheckResult bmc(const Monitored& mon, PropId prop, int k,
                const std::vector<PropId>& lemmas = {}, Budget budget = {});

// Base case (BMC to k) plus inductive step at depth k. Step-SAT retains the
// counterexample-to-induction as a labeled non-reachable trace. cuts name
// comb signals replaced by free variables in both instances; this widens the
// transition relation, so a base-case hit under cuts is re-checked without
// them before being reported Falsified.
CheckResult k_induction(const Monitored& mon, PropId prop,
                        const std::vector<PropId>& lemmas, int k,
                        bool unique_states = false, Budget budget = {},
                        const std::vector<SigId>& cuts = {});

// k_induction sweep over k = 1..k_max, returning the first conclusive
// verdict (Falsified from the base, or Proved).
CheckResult k_induction_sweep(const Monitored& mon, PropId prop,
                              const std::vector<PropId>& lemmas, int k_max,
                              bool unique_states = false, Budget budget = {},
                              const std::vector<SigId>& cuts = {});

// Witness search for a cover monitor.
CheckResult check_cover(const Monitored& mon, PropId prop, int k,
                        Budget budget = {});

// Loop-closing translation of one liveness monitor. The result is a new
// monitored netlist whose property 0 is the safety obligation ("bad" means a
// fair loop with the goal never reached); when the liveness property carries
// a rank hint, aux_props lists helper invariants that make the obligation
// inductive, in proof order. Original properties keep their ids shifted by
// prop_offset and may be used as lemmas.
struct LivenessSafety {
  Monitored ts;
  PropId main = 0;
  std::vector<PropId> aux_props;
  PropId prop_offset = 0; // original prop p is now prop_offset + p
};
LivenessSafety liveness_to_safety(const Monitored& mon, PropId liveness_prop);

// Full liveness check: BMC for a fair-lasso counterexample, then (with a
// hint) staged aux-invariant proofs, ending with the main obligation.
// lemmas name already-proved assert properties of `mon`.
CheckResult check_liveness(const Monitored& mon, PropId prop,
                           const std::vector<PropId>& lemmas, int k_max,
                           Budget budget = {});

// -- proof plans ------------------------------------------------------------

enum class Method : std::uint8_t { Bmc, KInduction, Cover, Liveness };

struct PlanStep {
  std::string name;
  PropId prop = 0;
  Method method = Method::KInduction;
  std::vector<PropId> lemmas; // assert props that must be Proved first
  std::vector<SigId> cuts;    // comb cut points (KInduction only)
  int k = 5;                  // bound / max induction depth
  bool unique_states = false;
  Budget budget;
};

struct PlanStepResult {
  PlanStep step;
  CheckResult result;
};

struct PlanReport {
  std::vector<PlanStepResult> steps;
  bool all_conclusive() const; // every step Proved (or witness found)
};

// Executes steps in order; a step whose lemma is not yet Proved is reported
// Skipped. jobs > 1 runs independent steps concurrently.
PlanReport run_plan(const Monitored& mon, const std::vector<PlanStep>& steps,
                    unsigned jobs = 1);

// CSV per the report schema; header included.
std::string plan_csv(const PlanReport& rep, const std::string& design,
                     const std::string& params);
const char* csv_header();

} // namespace wlmc
