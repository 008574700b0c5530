#include "wlmc/engine.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wlmc {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Falsified: return "Falsified";
    case Verdict::Unknown: return "Unknown";
    case Verdict::Skipped: return "Skipped";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool over_time(const Budget& b, Clock::time_point t0) {
  return b.max_seconds > 0 && ms_since(t0) >= b.max_seconds * 1000.0;
}

// Reconstructs a full trace from the model by replaying extracted initial
// state and inputs through the simulator; unconstrained values default to 0.
Trace trace_from_model(const Unroller& u, const SatResult& r, int cycles) {
  const Netlist& n = u.net();
  SimState st;
  st.regs.assign(n.sigs.size(), 0);
  for (SigId s = 0; s < n.sigs.size(); ++s) {
    if (n.sigs[s].kind == SigKind::Register)
      st.regs[s] = u.read_word(s, 0, r).value_or(n.sigs[s].reset);
    else if (n.sigs[s].kind == SigKind::Frozen)
      st.regs[s] = u.read_word(s, 0, r).value_or(0);
  }
  std::vector<Valuation> inputs(cycles, Valuation(n.sigs.size(), 0));
  for (int f = 0; f < cycles; ++f)
    for (SigId s = 0; s < n.sigs.size(); ++s)
      if (n.sigs[s].kind == SigKind::Input)
        inputs[f][s] = u.read_word(s, f, r).value_or(0);
  return simulate(n, st, inputs);
}

// Asserts constraint monitors and lemma properties at one frame.
void pin_frame(Unroller& u, Solver& solver, const Monitored& mon,
               const std::vector<PropId>& lemmas, int f) {
  for (const Monitor& m : mon.mons)
    if (m.kind == MonitorKind::Constraint) solver.add_clause({u.lit(m.sig, f)});
  for (PropId l : lemmas) {
    const Monitor& m = mon.mons[l];
    if (m.kind != MonitorKind::Bad)
      throw std::logic_error("lemma is not an assert property: " +
                             mon.net.props[l].name);
    solver.add_clause({-u.lit(m.sig, f)});
  }
}

SigId monitor_sig(const Monitored& mon, PropId prop, MonitorKind want,
                  const char* what) {
  const Monitor& m = mon.mons[prop];
  if (m.kind != want)
    throw std::logic_error(std::string(what) + ": wrong property kind for " +
                           mon.net.props[prop].name);
  return m.sig;
}

// Incremental frame-by-frame reachability query shared by bmc and cover.
// negate=false searches for target=1 (bad), negate=true the same but reports
// the hit as Proved (cover witness).
CheckResult bounded_search(const Monitored& mon, SigId target, bool witness,
                           int k, const std::vector<PropId>& lemmas,
                           Budget budget, const char* method) {
  auto t0 = Clock::now();
  CheckResult res;
  res.method = method;
  Solver solver;
  Unroller u(mon.net, solver, true);
  for (int f = 0; f <= k; ++f) {
    pin_frame(u, solver, mon, lemmas, f);
    int q = u.lit(target, f);
    SatResult sr;
    if (q == Unroller::kFalse) {
      sr.verdict = SatVerdict::Unsat; // folded away: cannot hold this frame
    } else {
      int assump[1] = {q};
      sr = solver.solve(assump, budget.max_conflicts);
    }
    res.conflicts = solver.stats().conflicts;
    res.k = f;
    if (sr.verdict == SatVerdict::Budget) {
      res.budget_hit = true;
      res.time_ms = ms_since(t0);
      return res;
    }
    if (sr.verdict == SatVerdict::Sat) {
      Trace t = trace_from_model(u, sr, f + 1);
      if (!trace_bit(mon.net, t, target, f))
        throw std::logic_error("trace replay does not confirm the model");
      res.verdict = witness ? Verdict::Proved : Verdict::Falsified;
      res.frame = f;
      res.trace = std::move(t);
      res.time_ms = ms_since(t0);
      return res;
    }
    if (over_time(budget, t0)) {
      res.budget_hit = true;
      res.time_ms = ms_since(t0);
      return res;
    }
  }
  res.k = k;
  res.time_ms = ms_since(t0);
  return res;
}

// Pairwise distinctness of register state between frames i and j.
void add_distinct(Unroller& u, Solver& solver, const Netlist& n, int i, int j) {
  std::vector<int> diff;
  for (SigId s = 0; s < n.sigs.size(); ++s) {
    if (n.sigs[s].kind != SigKind::Register) continue;
    std::vector<int> a = u.word(s, i);
    std::vector<int> b = u.word(s, j);
    for (std::size_t bit = 0; bit < a.size(); ++bit) {
      if (a[bit] == b[bit]) continue;
      if (a[bit] == -b[bit]) return; // frames always distinct, nothing to add
      int x = solver.new_var();
      solver.add_clause({-x, a[bit], b[bit]});
      solver.add_clause({-x, -a[bit], -b[bit]});
      solver.add_clause({x, -a[bit], b[bit]});
      solver.add_clause({x, a[bit], -b[bit]});
      diff.push_back(x);
    }
  }
  solver.add_clause(diff);
}

CheckResult induction_core(const Monitored& mon, PropId prop,
                           const std::vector<PropId>& lemmas, int k_min,
                           int k_max, bool unique_states, Budget budget,
                           const std::vector<SigId>& cuts) {
  auto t0 = Clock::now();
  SigId bad = monitor_sig(mon, prop, MonitorKind::Bad, "k_induction");
  CheckResult res;
  res.method = "kind";

  // Base instance (from init) and step instance (free init) grow together
  // across the sweep; clauses persist between bounds.
  Solver base_solver, step_solver;
  Unroller base(mon.net, base_solver, true);
  Unroller step(mon.net, step_solver, false);
  for (SigId c : cuts) {
    base.add_cut(c);
    step.add_cut(c);
  }

  std::uint64_t extra_conflicts = 0;
  int base_done = -1;  // highest frame proved bad-free from init
  int step_pinned = 0; // frames [0, step_pinned) constrained in the step
  int good_done = 0;   // frames [0, good_done) asserted bad-free in the step
  int uniq_done = 0;   // pairs (i, j) with j <= uniq_done are distinct
  for (int k = k_min; k <= k_max; ++k) {
    // Base: no bad at frames [0, k).
    while (base_done < k - 1) {
      int f = base_done + 1;
      pin_frame(base, base_solver, mon, lemmas, f);
      int q = base.lit(bad, f);
      SatResult sr;
      if (q == Unroller::kFalse) {
        sr.verdict = SatVerdict::Unsat;
      } else {
        int assump[1] = {q};
        sr = base_solver.solve(assump, budget.max_conflicts);
      }
      res.conflicts = extra_conflicts + base_solver.stats().conflicts +
                      step_solver.stats().conflicts;
      res.k = k;
      if (sr.verdict == SatVerdict::Budget || over_time(budget, t0)) {
        res.budget_hit = true;
        res.time_ms = ms_since(t0);
        return res;
      }
      if (sr.verdict == SatVerdict::Sat) {
        if (!cuts.empty()) {
          // The cut over-approximation reached bad; decide the real base
          // frames up to f with an uncut search before believing it.
          CheckResult real =
              bounded_search(mon, bad, false, f, lemmas, budget, "kind");
          extra_conflicts += real.conflicts;
          res.conflicts += real.conflicts;
          if (real.verdict == Verdict::Falsified || real.budget_hit) {
            real.method = "kind";
            real.k = k;
            real.conflicts = res.conflicts;
            real.time_ms = ms_since(t0);
            return real;
          }
          base_done = f; // spurious: the real netlist has no bad through f
          continue;
        }
        Trace t = trace_from_model(base, sr, f + 1);
        if (!trace_bit(mon.net, t, bad, f))
          throw std::logic_error("trace replay does not confirm the model");
        res.verdict = Verdict::Falsified;
        res.frame = f;
        res.trace = std::move(t);
        res.time_ms = ms_since(t0);
        return res;
      }
      base_done = f;
    }

    // Step: frames [0, k] with lemmas everywhere, no bad before k, bad at k.
    while (step_pinned <= k) pin_frame(step, step_solver, mon, lemmas, step_pinned++);
    while (good_done < k) {
      int good = step.lit(bad, good_done++);
      if (good != Unroller::kFalse) step_solver.add_clause({-good});
    }
    if (unique_states)
      while (uniq_done < k) {
        ++uniq_done;
        for (int i = 0; i < uniq_done; ++i)
          add_distinct(step, step_solver, mon.net, i, uniq_done);
      }
    int q = step.lit(bad, k);
    SatResult sr;
    if (q == Unroller::kFalse) {
      sr.verdict = SatVerdict::Unsat;
    } else {
      int assump[1] = {q};
      sr = step_solver.solve(assump, budget.max_conflicts);
    }
    res.conflicts = extra_conflicts + base_solver.stats().conflicts +
                    step_solver.stats().conflicts;
    res.k = k;
    if (sr.verdict == SatVerdict::Budget || over_time(budget, t0)) {
      res.budget_hit = true;
      res.time_ms = ms_since(t0);
      return res;
    }
    if (sr.verdict == SatVerdict::Unsat) {
      res.verdict = Verdict::Proved;
      res.time_ms = ms_since(t0);
      return res;
    }
    if (k == k_max) {
      // Counterexample to induction at the last depth, for diagnostics only.
      res.trace = trace_from_model(step, sr, k + 1);
      res.cti = true;
    }
  }
  res.time_ms = ms_since(t0);
  return res;
}

} // namespace

CheckResult bmc(const Monitored& mon, PropId prop, int k,
                const std::vector<PropId>& lemmas, Budget budget) {
  SigId bad = monitor_sig(mon, prop, MonitorKind::Bad, "bmc");
  return bounded_search(mon, bad, false, k, lemmas, budget, "bmc");
}

CheckResult check_cover(const Monitored& mon, PropId prop, int k, Budget budget) {
  SigId goal = monitor_sig(mon, prop, MonitorKind::Goal, "cover");
  return bounded_search(mon, goal, true, k, {}, budget, "cover");
}

CheckResult k_induction(const Monitored& mon, PropId prop,
                        const std::vector<PropId>& lemmas, int k,
                        bool unique_states, Budget budget,
                        const std::vector<SigId>& cuts) {
  return induction_core(mon, prop, lemmas, k, k, unique_states, budget, cuts);
}

CheckResult k_induction_sweep(const Monitored& mon, PropId prop,
                              const std::vector<PropId>& lemmas, int k_max,
                              bool unique_states, Budget budget,
                              const std::vector<SigId>& cuts) {
  return induction_core(mon, prop, lemmas, 1, k_max, unique_states, budget,
                        cuts);
}

// -- liveness ---------------------------------------------------------------

LivenessSafety liveness_to_safety(const Monitored& mon, PropId li) {
  const Monitor& lm = mon.mons[li];
  if (lm.kind != MonitorKind::Liveness)
    throw std::logic_error("liveness_to_safety: not an eventually property");
  if (lm.fairness.empty())
    throw std::invalid_argument("liveness requires a nonempty fairness set");

  LivenessSafety out;
  out.ts.net = mon.net;
  out.ts.mons = mon.mons;
  out.prop_offset = 0;
  Netlist& n = out.ts.net;
  const std::string base = mon.net.props[li].name;
  const SigId orig_sigs = static_cast<SigId>(mon.net.sigs.size());

  SigId save = n.add_input("l2s_save_" + base, 1);
  SigId saved = n.add_register("l2s_saved_" + base, 1, 0);
  n.set_next(saved, n.Or(n.R(saved), n.R(save)));
  ExprId save_now = n.And(n.R(save), n.Not(n.R(saved)));
  ExprId in_loop = n.Or(n.R(saved), n.R(save));

  // Shadow copy of every register, latched on the first save.
  std::unordered_map<SigId, SigId> shadow;
  for (SigId s = 0; s < orig_sigs; ++s) {
    if (n.sigs[s].kind != SigKind::Register) continue;
    SigId sh = n.add_register("l2s_shadow_" + n.sigs[s].name, n.sigs[s].width, 0);
    n.set_next(sh, n.Mux(save_now, n.R(s), n.R(sh)));
    shadow.emplace(s, sh);
  }

  SigId pending = n.add_register("l2s_pending_" + base, 1, 0);
  SigId pending_c = n.add_comb(
      "l2s_pending_c_" + base,
      n.And(n.Or(n.R(pending), lm.trigger), n.Not(lm.goal)));
  n.set_next(pending, n.R(pending_c));

  SigId gil = n.add_register("l2s_goal_in_loop_" + base, 1, 0);
  n.set_next(gil, n.And(in_loop, n.Or(n.R(gil), lm.goal)));

  std::vector<SigId> fair_seen;
  for (std::size_t i = 0; i < lm.fairness.size(); ++i) {
    SigId fs = n.add_register("l2s_fair_seen_" + base + "_" + std::to_string(i), 1, 0);
    n.set_next(fs, n.And(in_loop,
                         n.Or(n.R(fs), n.And(lm.fairness[i], n.R(pending_c)))));
    fair_seen.push_back(fs);
  }

  std::vector<ExprId> eq;
  for (SigId s = 0; s < orig_sigs; ++s)
    if (auto it = shadow.find(s); it != shadow.end())
      eq.push_back(n.Eq(n.R(s), n.R(it->second)));
  std::vector<ExprId> bad_terms{n.R(saved), n.AndN(eq), n.R(pending_c),
                                n.Not(n.R(gil))};
  for (SigId fs : fair_seen) bad_terms.push_back(n.R(fs));
  ExprId bad = n.AndN(bad_terms);

  auto add_assert = [&](const std::string& name, PropShape shape, ExprId a,
                        ExprId b) {
    Property p;
    p.name = name;
    p.role = PropRole::Assert;
    p.shape = shape;
    p.a = a;
    p.b = b;
    PropId id = n.add_property(std::move(p));
    out.ts.mons.push_back(compile_property(n, id));
    return id;
  };

  out.main = add_assert(base + "_l2s", PropShape::Bool, n.Not(bad), kNoExpr);

  // Rank-hint helper invariants, in proof order. Each is inductive at small
  // depth given its predecessors plus the caller's design lemmas, and the
  // last one refutes the main bad combinationally.
  const Property& lp = mon.net.props[li];
  if (lp.hint && lp.domain == kDomainFree) {
    const RankHint& h = *lp.hint;
    ExprId rank = h.rank;
    ExprId tr = n.R(h.trigger_reg), gr = n.R(h.goal_reg);
    ExprId sh_tr = n.R(shadow.at(h.trigger_reg));
    auto next_of = [&](ExprId e) {
      return subst_expr(n, e, [&](SigId s) -> std::optional<ExprId> {
        if (n.sigs[s].kind == SigKind::Register) return n.sigs[s].next;
        return std::nullopt;
      });
    };
    ExprId sh_rank = subst_expr(n, rank, [&](SigId s) -> std::optional<ExprId> {
      if (n.sigs[s].kind == SigKind::Register) return n.R(shadow.at(s));
      if (n.sigs[s].kind == SigKind::Input)
        throw std::logic_error("rank hint depends on an input");
      return std::nullopt;
    });
    ExprId rank_next = next_of(rank);

    auto aux = [&](const std::string& suffix, PropShape shape, ExprId a,
                   ExprId b) { out.aux_props.push_back(add_assert(base + suffix, shape, a, b)); };

    aux("_mono_trigger", PropShape::ImplSame, tr, next_of(tr));
    aux("_mono_goal", PropShape::ImplSame, gr, next_of(gr));
    aux("_rank_nonincrease", PropShape::ImplSame, n.And(tr, n.Not(gr)),
        n.Geq(rank, rank_next));
    for (std::size_t i = 0; i < lm.fairness.size(); ++i)
      aux("_rank_decrease_" + std::to_string(i), PropShape::ImplSame,
          n.And(lm.fairness[i], n.And(tr, n.Not(gr))), n.Lt(rank_next, rank));
    aux("_pending_trigger", PropShape::ImplSame, n.R(pending), tr);
    for (std::size_t i = 0; i < fair_seen.size(); ++i)
      aux("_fair_seen_saved_" + std::to_string(i), PropShape::ImplSame,
          n.R(fair_seen[i]), n.R(saved));
    aux("_saved_trigger", PropShape::ImplSame, n.And(n.R(saved), sh_tr), tr);
    aux("_rank_bounded", PropShape::ImplSame,
        n.AndN({n.R(saved), n.R(pending_c), sh_tr}), n.Geq(sh_rank, rank));
    std::vector<ExprId> strict{n.R(saved), n.R(pending_c), sh_tr};
    for (SigId fs : fair_seen) strict.push_back(n.R(fs));
    aux("_rank_strict", PropShape::ImplSame, n.AndN(strict), n.Lt(rank, sh_rank));
  }
  return out;
}

CheckResult check_liveness(const Monitored& mon, PropId prop,
                           const std::vector<PropId>& lemmas, int k_max,
                           Budget budget) {
  auto t0 = Clock::now();
  LivenessSafety ls = liveness_to_safety(mon, prop);
  CheckResult res;
  res.method = "live2safe";

  // Attempt the staged proof first; aux invariants make the main obligation
  // inductive when a rank hint is present.
  std::vector<PropId> assume = lemmas;
  bool aux_ok = !ls.aux_props.empty();
  std::uint64_t conflicts = 0;
  for (PropId a : ls.aux_props) {
    CheckResult r = k_induction_sweep(ls.ts, a, assume, 3, false, budget);
    conflicts += r.conflicts;
    if (r.verdict != Verdict::Proved) {
      aux_ok = false;
      break;
    }
    assume.push_back(a);
    if (over_time(budget, t0)) break;
  }
  if (aux_ok || ls.aux_props.empty()) {
    CheckResult r =
        k_induction_sweep(ls.ts, ls.main, assume, aux_ok ? 2 : 5, false, budget);
    conflicts += r.conflicts;
    if (r.verdict == Verdict::Proved) {
      res.verdict = Verdict::Proved;
      res.k = r.k;
      res.conflicts = conflicts;
      res.time_ms = ms_since(t0);
      return res;
    }
    if (r.verdict == Verdict::Falsified) {
      res.verdict = Verdict::Falsified;
      res.frame = r.frame;
      res.trace = std::move(r.trace);
      res.conflicts = conflicts;
      res.time_ms = ms_since(t0);
      return res;
    }
  }

  // Lasso search: any reachable bad of the derived system is a genuine
  // fairness-respecting counterexample. Lemmas are sound to assume here
  // because they were proved on the same transition system.
  CheckResult b = bmc(ls.ts, ls.main, k_max, lemmas, budget);
  conflicts += b.conflicts;
  if (b.verdict == Verdict::Falsified) {
    b.method = "live2safe";
    b.conflicts = conflicts;
    b.time_ms = ms_since(t0);
    return b;
  }
  res.k = k_max;
  res.budget_hit = b.budget_hit;
  res.conflicts = conflicts;
  res.time_ms = ms_since(t0);
  return res;
}

// -- plans ------------------------------------------------------------------

bool PlanReport::all_conclusive() const {
  return std::all_of(steps.begin(), steps.end(), [](const PlanStepResult& s) {
    return s.result.verdict == Verdict::Proved;
  });
}

namespace {

CheckResult run_step(const Monitored& mon, const PlanStep& st) {
  switch (st.method) {
    case Method::Bmc:
      return bmc(mon, st.prop, st.k, st.lemmas, st.budget);
    case Method::KInduction:
      return k_induction_sweep(mon, st.prop, st.lemmas, st.k, st.unique_states,
                               st.budget, st.cuts);
    case Method::Cover:
      return check_cover(mon, st.prop, st.k, st.budget);
    case Method::Liveness:
      return check_liveness(mon, st.prop, st.lemmas, st.k, st.budget);
  }
  throw std::logic_error("unreachable");
}

} // namespace

PlanReport run_plan(const Monitored& mon, const std::vector<PlanStep>& steps,
                    unsigned jobs) {
  PlanReport rep;
  rep.steps.resize(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) rep.steps[i].step = steps[i];

  // State per step: 0 pending, 1 running, 2 done.
  std::vector<int> state(steps.size(), 0);
  std::mutex mx;
  std::condition_variable cv;

  // A lemma is satisfied when some completed step proved it; it is doomed
  // when no pending/running step could still prove it.
  auto lemma_proved = [&](PropId l) {
    for (std::size_t j = 0; j < steps.size(); ++j)
      if (state[j] == 2 && steps[j].prop == l &&
          rep.steps[j].result.verdict == Verdict::Proved)
        return true;
    return false;
  };
  auto lemma_possible = [&](PropId l) {
    for (std::size_t j = 0; j < steps.size(); ++j)
      if (state[j] != 2 && steps[j].prop == l && steps[j].method != Method::Cover)
        return true;
    return false;
  };

  auto worker = [&] {
    std::unique_lock<std::mutex> lk(mx);
    for (;;) {
      bool any_pending = false, progressed = false;
      for (std::size_t i = 0; i < steps.size(); ++i) {
        if (state[i] != 0) continue;
        any_pending = true;
        bool ready = true, doomed = false;
        for (PropId l : steps[i].lemmas) {
          if (lemma_proved(l)) continue;
          if (lemma_possible(l)) {
            ready = false;
          } else {
            doomed = true;
            break;
          }
        }
        if (doomed) {
          state[i] = 2;
          rep.steps[i].result.verdict = Verdict::Skipped;
          rep.steps[i].result.method = "skipped";
          progressed = true;
          cv.notify_all();
          continue;
        }
        if (!ready) continue;
        state[i] = 1;
        lk.unlock();
        CheckResult r = run_step(mon, steps[i]);
        lk.lock();
        rep.steps[i].result = std::move(r);
        state[i] = 2;
        progressed = true;
        cv.notify_all();
      }
      if (!any_pending) return;
      if (!progressed) {
        bool running = std::any_of(state.begin(), state.end(),
                                   [](int s) { return s == 1; });
        if (!running) return; // only unsatisfiable dependencies remain
        cv.wait(lk);
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Anything never started (cyclic lemma sets) is reported Skipped.
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (state[i] != 2 && rep.steps[i].result.method.empty()) {
      rep.steps[i].result.verdict = Verdict::Skipped;
      rep.steps[i].result.method = "skipped";
    }
  return rep;
}

const char* csv_header() {
  return "design,params,property,method,k,verdict,frames,time_ms,conflicts";
}

std::string plan_csv(const PlanReport& rep, const std::string& design,
                     const std::string& params) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const PlanStepResult& s : rep.steps) {
    const CheckResult& r = s.result;
    os << design << ',' << params << ',' << s.step.name << ',' << r.method
       << ',' << r.k << ',' << verdict_name(r.verdict) << ','
       << (r.frame >= 0 ? r.frame : r.k) << ','
       << static_cast<long long>(r.time_ms + 0.5) << ',' << r.conflicts << '\n';
  }
  return os.str();
}

} // namespace wlmc
