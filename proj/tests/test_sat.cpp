#include "doctest.h"

#include <random>
#include <set>
#include <vector>

#include "wlmc/sat.hpp"

using namespace wlmc;

namespace {

// Exhaustive satisfiability up to 20-or-so variables.
bool brute_force_sat(int nvars, const std::vector<std::vector<int>>& clauses) {
  for (std::uint64_t m = 0; m < (1ull << nvars); ++m) {
    bool all = true;
    for (const auto& c : clauses) {
      bool any = false;
      for (int lit : c) {
        int v = std::abs(lit) - 1;
        bool val = (m >> v) & 1;
        if (lit > 0 ? val : !val) {
          any = true;
          break;
        }
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<std::vector<int>> random_cnf(std::mt19937_64& rng, int nvars,
                                         int nclauses) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < nclauses; ++i) {
    int len = 2 + static_cast<int>(rng() % 3);
    std::set<int> vars;
    while (static_cast<int>(vars.size()) < len && static_cast<int>(vars.size()) < nvars)
      vars.insert(1 + static_cast<int>(rng() % nvars));
    std::vector<int> clause;
    for (int v : vars) clause.push_back(rng() % 2 ? v : -v);
    out.push_back(std::move(clause));
  }
  return out;
}

bool clauses_satisfied(const std::vector<std::vector<int>>& clauses,
                       const Solver& s, const SatResult& r) {
  for (const auto& c : clauses) {
    bool any = false;
    for (int lit : c)
      if (s.value_in_model(r, lit)) {
        any = true;
        break;
      }
    if (!any) return false;
  }
  return true;
}

// Pigeonhole principle: n+1 pigeons into n holes, unsatisfiable and hard.
std::vector<std::vector<int>> pigeonhole(int holes) {
  int pigeons = holes + 1;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  std::vector<std::vector<int>> out;
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    out.push_back(std::move(c));
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q)
        out.push_back({-var(p, h), -var(q, h)});
  return out;
}

void load(Solver& s, int nvars, const std::vector<std::vector<int>>& clauses) {
  while (static_cast<int>(s.num_vars()) < nvars) s.new_var();
  for (const auto& c : clauses) s.add_clause(c);
}

} // namespace

TEST_CASE("verdicts agree with exhaustive enumeration on random formulas") {
  std::mt19937_64 rng(12345);
  int sat_seen = 0, unsat_seen = 0;
  for (int iter = 0; iter < 100; ++iter) {
    int nvars = 3 + static_cast<int>(rng() % 14); // up to 16
    int nclauses = static_cast<int>(nvars * (2.5 + (rng() % 30) / 10.0));
    auto clauses = random_cnf(rng, nvars, nclauses);
    bool expect = brute_force_sat(nvars, clauses);
    Solver s;
    load(s, nvars, clauses);
    SatResult r = s.solve();
    REQUIRE(r.verdict == (expect ? SatVerdict::Sat : SatVerdict::Unsat));
    if (expect) {
      CHECK(clauses_satisfied(clauses, s, r));
      ++sat_seen;
    } else {
      ++unsat_seen;
    }
  }
  // The mix must exercise both outcomes or the test is vacuous.
  CHECK(sat_seen >= 20);
  CHECK(unsat_seen >= 20);
}

TEST_CASE("larger random instances return verified models") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 5; ++iter) {
    auto clauses = random_cnf(rng, 20, 85);
    Solver s;
    load(s, 20, clauses);
    SatResult r = s.solve();
    if (r.verdict == SatVerdict::Sat) CHECK(clauses_satisfied(clauses, s, r));
  }
}

TEST_CASE("assumptions carve subproblems without losing clauses") {
  Solver s;
  int a = s.new_var(), b = s.new_var(), c = s.new_var();
  s.add_clause(std::vector<int>{a, b});
  s.add_clause(std::vector<int>{-a, c});
  s.add_clause(std::vector<int>{-b, c});

  SatResult r1 = s.solve(std::vector<int>{-c});
  CHECK(r1.verdict == SatVerdict::Unsat);

  SatResult r2 = s.solve(std::vector<int>{c});
  REQUIRE(r2.verdict == SatVerdict::Sat);
  CHECK(s.value_in_model(r2, c));

  // Incremental growth: force a, then contradict it via new clauses.
  SatResult r3 = s.solve(std::vector<int>{a});
  REQUIRE(r3.verdict == SatVerdict::Sat);
  s.add_clause(std::vector<int>{-a});
  SatResult r4 = s.solve(std::vector<int>{a});
  CHECK(r4.verdict == SatVerdict::Unsat);
  SatResult r5 = s.solve();
  REQUIRE(r5.verdict == SatVerdict::Sat);
  CHECK_FALSE(s.value_in_model(r5, a));
}

TEST_CASE("conflicting assumptions on one literal are unsat") {
  Solver s;
  int a = s.new_var();
  s.add_clause(std::vector<int>{a, -a}); // tautology, removed on add
  SatResult r = s.solve(std::vector<int>{a, -a});
  CHECK(r.verdict == SatVerdict::Unsat);
}

TEST_CASE("empty clause poisons the instance") {
  Solver s;
  s.new_var();
  s.add_clause(std::vector<int>{});
  CHECK(s.solve().verdict == SatVerdict::Unsat);
  CHECK(s.solve().verdict == SatVerdict::Unsat);
}

TEST_CASE("conflict budget reports Budget with the cap echoed") {
  auto clauses = pigeonhole(6);
  Solver s;
  load(s, 7 * 6, clauses);
  SatResult r = s.solve({}, 30);
  CHECK(r.verdict == SatVerdict::Budget);
  CHECK(r.budget_cap == 30);

  // A later unlimited call on the same solver finishes the proof.
  SatResult full = s.solve();
  CHECK(full.verdict == SatVerdict::Unsat);
}

TEST_CASE("pigeonhole instances are unsat at several sizes") {
  for (int holes : {3, 4, 5}) {
    auto clauses = pigeonhole(holes);
    Solver s;
    load(s, (holes + 1) * holes, clauses);
    CHECK(s.solve().verdict == SatVerdict::Unsat);
  }
}

TEST_CASE("dimacs round-trips through print and parse") {
  std::mt19937_64 rng(7);
  auto clauses = random_cnf(rng, 12, 40);
  Cnf cnf;
  cnf.nvars = 12;
  cnf.clauses = clauses;
  std::string text = to_dimacs(cnf);
  DimacsResult back = from_dimacs(text);
  REQUIRE(back.ok);
  CHECK(back.cnf.nvars == 12);
  REQUIRE(back.cnf.clauses.size() == clauses.size());
  CHECK(back.cnf.clauses == clauses);

  // Solving the parsed copy agrees with solving the original.
  Solver s1, s2;
  load(s1, cnf.nvars, cnf.clauses);
  load(s2, back.cnf.nvars, back.cnf.clauses);
  CHECK(s1.solve().verdict == s2.solve().verdict);
}

TEST_CASE("dimacs parser rejects malformed input") {
  CHECK_FALSE(from_dimacs("1 2 0\n").ok);                  // no header
  CHECK_FALSE(from_dimacs("p cnf 2 1\n1 3 0\n").ok);        // var out of range
  CHECK_FALSE(from_dimacs("p cnf 2 2\n1 2 0\n").ok);        // count mismatch
  CHECK_FALSE(from_dimacs("p cnf 2 1\n1 2\n").ok);          // unterminated
  CHECK(from_dimacs("c comment\np cnf 2 1\nc mid\n1 -2 0\n").ok);
}

TEST_CASE("solver statistics accumulate across calls") {
  std::mt19937_64 rng(5);
  auto clauses = random_cnf(rng, 16, 70);
  Solver s;
  load(s, 16, clauses);
  s.solve();
  std::uint64_t after_first = s.stats().decisions;
  s.solve(std::vector<int>{1});
  CHECK(s.stats().decisions >= after_first);
  CHECK(s.stats().propagations > 0);
}
