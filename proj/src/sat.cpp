#include "wlmc/sat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace wlmc {

namespace {

using Lit = std::uint32_t; // 2*var + sign, var 0-based
constexpr Lit kLitUndef = 0xffffffffu;
inline Lit mk_lit(int var0, bool neg) { return (static_cast<Lit>(var0) << 1) | (neg ? 1 : 0); }
inline Lit neg(Lit l) { return l ^ 1; }
inline int var_of(Lit l) { return static_cast<int>(l >> 1); }
inline bool sign_of(Lit l) { return l & 1; }
inline Lit from_dimacs_lit(int dl) { return mk_lit(std::abs(dl) - 1, dl < 0); }
inline int to_dimacs_lit(Lit l) { return sign_of(l) ? -(var_of(l) + 1) : var_of(l) + 1; }

using CRef = std::uint32_t;
constexpr CRef kCRefUndef = 0xffffffffu;

// Clause pool word layout: [header][activity?][lit0][lit1]...
// header = size << 2 | learnt << 1 | deleted.
struct Watcher {
  CRef cref;
  Lit blocker;
};

enum : std::int8_t { kUndef = -1 };

} // namespace

struct Solver::Impl {
  std::vector<std::uint32_t> pool;
  std::vector<CRef> original, learnts;
  std::vector<std::vector<Watcher>> watches; // by lit
  std::vector<std::int8_t> assign;           // by var: -1/0/1
  std::vector<std::uint8_t> polarity;        // saved phase
  std::vector<double> activity;
  std::vector<CRef> reason;
  std::vector<int> level;
  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  std::size_t qhead = 0;
  double var_inc = 1.0, var_decay = 0.95;
  double cla_inc = 1.0, cla_decay = 0.999;
  std::vector<int> heap, heap_pos; // max-heap on activity
  bool ok = true;
  SatStats stats;
  double max_learnts = 0;
  // scratch
  std::vector<std::uint8_t> seen;
  std::vector<Lit> analyze_stack, analyze_clear;

  int nvars() const { return static_cast<int>(assign.size()); }

  // -- clause pool ----------------------------------------------------------

  std::uint32_t csize(CRef c) const { return pool[c] >> 2; }
  bool clearnt(CRef c) const { return (pool[c] >> 1) & 1; }
  bool cdeleted(CRef c) const { return pool[c] & 1; }
  void cdelete(CRef c) { pool[c] |= 1; }
  Lit* clits(CRef c) { return reinterpret_cast<Lit*>(&pool[c + 1 + (clearnt(c) ? 1 : 0)]); }
  const Lit* clits(CRef c) const {
    return reinterpret_cast<const Lit*>(&pool[c + 1 + (clearnt(c) ? 1 : 0)]);
  }
  float& cact(CRef c) { return reinterpret_cast<float&>(pool[c + 1]); }
  void cshrink(CRef c, std::uint32_t nsz) { pool[c] = (nsz << 2) | (pool[c] & 3); }

  CRef alloc_clause(std::span<const Lit> lits, bool learnt) {
    CRef c = static_cast<CRef>(pool.size());
    pool.push_back((static_cast<std::uint32_t>(lits.size()) << 2) | (learnt ? 2 : 0));
    if (learnt) pool.push_back(0); // activity
    for (Lit l : lits) pool.push_back(l);
    if (learnt) cact(c) = 0.0f;
    return c;
  }

  // -- assignment -----------------------------------------------------------

  std::int8_t value_lit(Lit l) const {
    std::int8_t a = assign[var_of(l)];
    return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ static_cast<std::int8_t>(sign_of(l)));
  }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void unchecked_enqueue(Lit l, CRef from) {
    int v = var_of(l);
    assign[v] = static_cast<std::int8_t>(!sign_of(l));
    reason[v] = from;
    level[v] = decision_level();
    trail.push_back(l);
  }

  void new_decision_level() { trail_lim.push_back(static_cast<int>(trail.size())); }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (int i = static_cast<int>(trail.size()) - 1; i >= trail_lim[lvl]; --i) {
      int v = var_of(trail[i]);
      polarity[v] = static_cast<std::uint8_t>(assign[v]);
      assign[v] = kUndef;
      heap_insert(v);
    }
    qhead = trail_lim[lvl];
    trail.resize(trail_lim[lvl]);
    trail_lim.resize(lvl);
  }

  // -- heap -----------------------------------------------------------------

  bool heap_lt(int a, int b) const { return activity[a] > activity[b]; }
  void heap_up(std::size_t i) {
    int v = heap[i];
    while (i > 0) {
      std::size_t p = (i - 1) >> 1;
      if (!heap_lt(v, heap[p])) break;
      heap[i] = heap[p];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = p;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    int v = heap[i];
    std::size_t n = heap.size();
    for (;;) {
      std::size_t c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n && heap_lt(heap[c + 1], heap[c])) ++c;
      if (!heap_lt(heap[c], v)) break;
      heap[i] = heap[c];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = c;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }
  void heap_insert(int v) {
    if (heap_pos[v] >= 0) return;
    heap_pos[v] = static_cast<int>(heap.size());
    heap.push_back(v);
    heap_up(heap.size() - 1);
  }
  int heap_pop() {
    int v = heap[0];
    heap_pos[v] = -1;
    heap[0] = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap_pos[heap[0]] = 0;
      heap_down(0);
    }
    return v;
  }
  void heap_bump(int v) {
    if (heap_pos[v] >= 0) heap_up(heap_pos[v]);
  }

  void bump_var(int v) {
    activity[v] += var_inc;
    if (activity[v] > 1e100) {
      for (double& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    heap_bump(v);
  }
  void bump_clause(CRef c) {
    float& a = cact(c);
    a += static_cast<float>(cla_inc);
    if (a > 1e20f) {
      for (CRef l : learnts)
        if (!cdeleted(l)) cact(l) *= 1e-20f;
      cla_inc *= 1e-20;
    }
  }

  // -- core -----------------------------------------------------------------

  void attach(CRef c) {
    const Lit* ls = clits(c);
    watches[neg(ls[0])].push_back({c, ls[1]});
    watches[neg(ls[1])].push_back({c, ls[0]});
  }

  CRef propagate() {
    CRef confl = kCRefUndef;
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];
      ++stats.propagations;
      auto& ws = watches[p];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value_lit(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        CRef c = w.cref;
        if (cdeleted(c)) {
          ++i;
          continue;
        }
        Lit* ls = clits(c);
        Lit false_lit = neg(p);
        if (ls[0] == false_lit) std::swap(ls[0], ls[1]);
        ++i;
        Lit first = ls[0];
        if (first != w.blocker && value_lit(first) == 1) {
          ws[j++] = {c, first};
          continue;
        }
        std::uint32_t sz = csize(c);
        bool found = false;
        for (std::uint32_t k = 2; k < sz; ++k) {
          if (value_lit(ls[k]) != 0) {
            std::swap(ls[1], ls[k]);
            watches[neg(ls[1])].push_back({c, first});
            found = true;
            break;
          }
        }
        if (found) continue;
        // unit or conflict
        ws[j++] = {c, first};
        if (value_lit(first) == 0) {
          confl = c;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          unchecked_enqueue(first, c);
        }
      }
      ws.resize(j);
      if (confl != kCRefUndef) break;
    }
    return confl;
  }

  std::uint32_t abstract_level(int v) const { return 1u << (level[v] & 31); }

  bool lit_redundant(Lit p, std::uint32_t ab_levels) {
    analyze_stack.clear();
    analyze_stack.push_back(p);
    std::size_t top = analyze_clear.size();
    while (!analyze_stack.empty()) {
      Lit q = analyze_stack.back();
      analyze_stack.pop_back();
      CRef r = reason[var_of(q)];
      if (r == kCRefUndef) return false;
      const Lit* ls = clits(r);
      std::uint32_t sz = csize(r);
      for (std::uint32_t k = 1; k < sz; ++k) {
        Lit l = ls[k];
        int v = var_of(l);
        if (seen[v] || level[v] == 0) continue;
        if (reason[v] == kCRefUndef || !(abstract_level(v) & ab_levels)) {
          for (std::size_t m = top; m < analyze_clear.size(); ++m)
            seen[var_of(analyze_clear[m])] = 0;
          analyze_clear.resize(top);
          return false;
        }
        seen[v] = 1;
        analyze_clear.push_back(l);
        analyze_stack.push_back(l);
      }
    }
    return true;
  }

  // First-UIP conflict analysis; returns learnt clause (lit 0 asserting) and
  // the backtrack level.
  void analyze(CRef confl, std::vector<Lit>& out, int& out_btlevel) {
    out.clear();
    out.push_back(kLitUndef); // placeholder for asserting literal
    int path_c = 0;
    Lit p = kLitUndef;
    std::size_t index = trail.size();
    do {
      Lit* ls = clits(confl);
      std::uint32_t sz = csize(confl);
      if (clearnt(confl)) bump_clause(confl);
      for (std::uint32_t k = (p == kLitUndef ? 0 : 1); k < sz; ++k) {
        Lit q = ls[k];
        int v = var_of(q);
        if (!seen[v] && level[v] > 0) {
          seen[v] = 1;
          bump_var(v);
          if (level[v] >= decision_level())
            ++path_c;
          else
            out.push_back(q);
        }
      }
      while (!seen[var_of(trail[--index])]) {
      }
      p = trail[index];
      confl = reason[var_of(p)];
      seen[var_of(p)] = 0;
      --path_c;
    } while (path_c > 0);
    out[0] = neg(p);

    // minimization
    analyze_clear.assign(out.begin() + 1, out.end());
    std::uint32_t ab = 0;
    for (std::size_t i = 1; i < out.size(); ++i) ab |= abstract_level(var_of(out[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      int v = var_of(out[i]);
      if (reason[v] == kCRefUndef || !lit_redundant(out[i], ab)) out[j++] = out[i];
    }
    out.resize(j);
    for (Lit l : analyze_clear) seen[var_of(l)] = 0;
    seen[var_of(p)] = 0;
    for (std::size_t i = 1; i < out.size(); ++i) seen[var_of(out[i])] = 0;

    if (out.size() == 1) {
      out_btlevel = 0;
    } else {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i)
        if (level[var_of(out[i])] > level[var_of(out[max_i])]) max_i = i;
      std::swap(out[1], out[max_i]);
      out_btlevel = level[var_of(out[1])];
    }
  }

  void reduce_db() {
    std::vector<CRef> live;
    for (CRef c : learnts)
      if (!cdeleted(c)) live.push_back(c);
    std::sort(live.begin(), live.end(), [&](CRef a, CRef b) { return cact(a) < cact(b); });
    std::size_t limit = live.size() / 2;
    for (std::size_t i = 0; i < live.size(); ++i) {
      CRef c = live[i];
      if (csize(c) > 2 && !is_reason(c) && (i < limit)) cdelete(c);
    }
    learnts.swap(live);
  }

  bool is_reason(CRef c) const {
    const Lit* ls = clits(c);
    int v = var_of(ls[0]);
    return assign[v] != kUndef && reason[v] == c && value_lit(ls[0]) == 1;
  }

  static double luby(double y, int x) {
    int size, seq;
    for (size = 1, seq = 0; size < x + 1; ++seq, size = 2 * size + 1) {
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    return std::pow(y, seq);
  }
};

Solver::Solver() : impl_(new Impl) {}
Solver::~Solver() { delete impl_; }

int Solver::new_var() {
  Impl& s = *impl_;
  s.assign.push_back(kUndef);
  s.polarity.push_back(0);
  s.activity.push_back(0.0);
  s.reason.push_back(kCRefUndef);
  s.level.push_back(0);
  s.seen.push_back(0);
  s.watches.emplace_back();
  s.watches.emplace_back();
  s.heap_pos.push_back(-1);
  int v = s.nvars() - 1;
  s.heap_insert(v);
  return v + 1;
}

void Solver::add_clause(std::span<const int> lits) {
  Impl& s = *impl_;
  if (!s.ok) return;
  s.cancel_until(0);
  std::vector<Lit> ls;
  ls.reserve(lits.size());
  for (int dl : lits) {
    if (dl == 0 || std::abs(dl) > s.nvars()) throw std::logic_error("bad literal");
    ls.push_back(from_dimacs_lit(dl));
  }
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  std::vector<Lit> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i + 1 < ls.size() && ls[i + 1] == neg(ls[i])) return; // tautology
    std::int8_t v = s.value_lit(ls[i]);
    if (v == 1) return; // satisfied at level 0
    if (v != 0) out.push_back(ls[i]);
  }
  if (out.empty()) {
    s.ok = false;
    return;
  }
  if (out.size() == 1) {
    s.unchecked_enqueue(out[0], kCRefUndef);
    if (s.propagate() != kCRefUndef) s.ok = false;
    return;
  }
  CRef c = s.alloc_clause(out, false);
  s.original.push_back(c);
  s.attach(c);
}

SatResult Solver::solve(std::span<const int> assumptions, std::uint64_t conflict_budget) {
  Impl& s = *impl_;
  SatResult res;
  s.cancel_until(0);
  if (!s.ok) {
    res.verdict = SatVerdict::Unsat;
    return res;
  }
  if (s.propagate() != kCRefUndef) {
    s.ok = false;
    res.verdict = SatVerdict::Unsat;
    return res;
  }

  std::vector<Lit> assumps;
  for (int dl : assumptions) assumps.push_back(from_dimacs_lit(dl));

  if (s.max_learnts == 0) s.max_learnts = std::max<double>(1000.0, s.original.size() / 3.0);
  std::uint64_t conflicts_start = s.stats.conflicts;
  int restart_n = 0;
  std::uint64_t restart_limit =
      static_cast<std::uint64_t>(100.0 * Impl::luby(2.0, restart_n));
  std::uint64_t restart_conflicts = 0;
  std::vector<Lit> learnt;

  for (;;) {
    CRef confl = s.propagate();
    if (confl != kCRefUndef) {
      ++s.stats.conflicts;
      ++restart_conflicts;
      if (s.decision_level() == 0) {
        s.ok = false;
        res.verdict = SatVerdict::Unsat;
        res.stats = s.stats;
        return res;
      }
      int bt;
      s.analyze(confl, learnt, bt);
      s.cancel_until(std::max(bt, 0));
      if (learnt.size() == 1) {
        s.cancel_until(0);
        s.unchecked_enqueue(learnt[0], kCRefUndef);
      } else {
        CRef c = s.alloc_clause(learnt, true);
        s.learnts.push_back(c);
        s.attach(c);
        s.bump_clause(c);
        s.unchecked_enqueue(learnt[0], c);
      }
      s.var_inc /= s.var_decay;
      s.cla_inc /= s.cla_decay;
      if (conflict_budget && s.stats.conflicts - conflicts_start >= conflict_budget) {
        s.cancel_until(0);
        res.verdict = SatVerdict::Budget;
        res.budget_cap = conflict_budget;
        res.stats = s.stats;
        return res;
      }
      continue;
    }

    if (restart_conflicts >= restart_limit) {
      ++s.stats.restarts;
      restart_conflicts = 0;
      restart_limit = static_cast<std::uint64_t>(100.0 * Impl::luby(2.0, ++restart_n));
      s.cancel_until(0);
      continue;
    }
    if (static_cast<double>(s.learnts.size()) >= s.max_learnts) {
      s.reduce_db();
      s.max_learnts *= 1.2;
    }

    // decide: assumptions first
    Lit next = kLitUndef;
    while (s.decision_level() < static_cast<int>(assumps.size())) {
      Lit p = assumps[s.decision_level()];
      std::int8_t v = s.value_lit(p);
      if (v == 1) {
        s.new_decision_level();
      } else if (v == 0) {
        s.cancel_until(0);
        res.verdict = SatVerdict::Unsat;
        res.stats = s.stats;
        return res;
      } else {
        next = p;
        break;
      }
    }
    if (next == kLitUndef) {
      while (!s.heap.empty() && s.assign[s.heap[0]] != kUndef) s.heap_pop();
      if (s.heap.empty()) {
        // model found
        res.verdict = SatVerdict::Sat;
        res.model.assign(s.nvars() + 1, 0);
        for (int v = 0; v < s.nvars(); ++v) res.model[v + 1] = s.assign[v] == 1;
        res.stats = s.stats;
        // internal re-verification against every original clause
        for (CRef c : s.original) {
          if (s.cdeleted(c)) continue;
          const Lit* ls = s.clits(c);
          bool sat = false;
          for (std::uint32_t k = 0; k < s.csize(c) && !sat; ++k)
            sat = s.value_lit(ls[k]) == 1;
          if (!sat) throw std::logic_error("solver model fails re-verification");
        }
        for (Lit a : assumps)
          if (s.value_lit(a) != 1) throw std::logic_error("model violates assumption");
        s.cancel_until(0);
        return res;
      }
      int v = s.heap_pop();
      next = mk_lit(v, !s.polarity[v]);
      ++s.stats.decisions;
    }
    s.new_decision_level();
    s.unchecked_enqueue(next, kCRefUndef);
  }
}

int Solver::num_vars() const { return impl_->nvars(); }
const SatStats& Solver::stats() const { return impl_->stats; }

SatResult solve(const Cnf& cnf, std::span<const int> assumptions,
                std::uint64_t conflict_budget) {
  Solver s;
  while (s.num_vars() < cnf.nvars) s.new_var();
  for (const auto& c : cnf.clauses) s.add_clause(c);
  return s.solve(assumptions, conflict_budget);
}

std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  os << "p cnf " << cnf.nvars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

DimacsResult from_dimacs(const std::string& text) {
  DimacsResult r;
  std::istringstream is(text);
  std::string tok;
  long declared_vars = -1, declared_clauses = -1;
  std::vector<int> cur;
  while (is >> tok) {
    if (tok == "c") {
      std::string line;
      std::getline(is, line);
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      if (!(is >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf" ||
          declared_vars < 0 || declared_clauses < 0) {
        r.error = "malformed problem line";
        return r;
      }
      continue;
    }
    long v;
    try {
      std::size_t pos = 0;
      v = std::stol(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (...) {
      r.error = "bad token: " + tok;
      return r;
    }
    if (declared_vars < 0) {
      r.error = "literal before problem line";
      return r;
    }
    if (v == 0) {
      r.cnf.clauses.push_back(cur);
      cur.clear();
    } else {
      if (std::labs(v) > declared_vars) {
        r.error = "literal out of range: " + tok;
        return r;
      }
      cur.push_back(static_cast<int>(v));
    }
  }
  if (!cur.empty()) {
    r.error = "trailing clause without terminating 0";
    return r;
  }
  if (declared_vars < 0) {
    r.error = "missing problem line";
    return r;
  }
  if (declared_clauses >= 0 &&
      static_cast<long>(r.cnf.clauses.size()) != declared_clauses) {
    r.error = "clause count mismatch";
    return r;
  }
  r.cnf.nvars = static_cast<int>(declared_vars);
  r.ok = true;
  return r;
}

} // namespace wlmc
