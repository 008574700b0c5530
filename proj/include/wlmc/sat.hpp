#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wlmc/ir.hpp"

// CNF container and CDCL solver. Literals follow the DIMACS convention
// throughout: variables are positive integers starting at 1, negation is the
// arithmetic sign. Variable 1 is reserved by the encoder as constant true.

namespace wlmc {

struct VarInfo {
  int var = 0;
  SigId sig = kNoSig;
  std::uint8_t bit = 0;
  int frame = 0;
};

struct Cnf {
  int nvars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<VarInfo> var_map; // named-signal bits only; aux vars absent
};

enum class SatVerdict : std::uint8_t { Sat, Unsat, Budget };

struct SatStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

struct SatResult {
  SatVerdict verdict = SatVerdict::Unsat;
  std::vector<std::uint8_t> model; // indexed by var, valid when Sat
  SatStats stats;
  std::uint64_t budget_cap = 0; // echoed when verdict == Budget
};

// Incremental clause consumer; implemented by Solver and CnfBuilder.
struct ClauseSink {
  virtual ~ClauseSink() = default;
  virtual int new_var() = 0;
  virtual void add_clause(std::span<const int> lits) = 0;
};

struct CnfBuilder final : ClauseSink {
  Cnf cnf;
  int new_var() override { return ++cnf.nvars; }
  void add_clause(std::span<const int> lits) override {
    cnf.clauses.emplace_back(lits.begin(), lits.end());
  }
};

class Solver final : public ClauseSink {
public:
  Solver();
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  int new_var() override;
  void add_clause(std::span<const int> lits) override;
  void add_clause(std::initializer_list<int> lits) { add_clause(std::span<const int>(lits)); }

  // Solves under the given assumption literals. A conflict budget of 0 means
  // unlimited; exceeding it yields SatVerdict::Budget with the cap echoed.
  // Satisfying models are re-verified against every clause before return.
  SatResult solve(std::span<const int> assumptions = {},
                  std::uint64_t conflict_budget = 0);

  int num_vars() const;
  const SatStats& stats() const; // cumulative over all solve calls
  bool value_in_model(const SatResult& r, int lit) const {
    return lit > 0 ? r.model[lit] != 0 : r.model[-lit] == 0;
  }

private:
  struct Impl;
  Impl* impl_;
};

// One-shot convenience over a prebuilt CNF.
SatResult solve(const Cnf& cnf, std::span<const int> assumptions = {},
                std::uint64_t conflict_budget = 0);

// DIMACS import/export. Parsing accepts comments and arbitrary whitespace;
// malformed input yields an error message instead of a Cnf.
std::string to_dimacs(const Cnf& cnf);
struct DimacsResult {
  bool ok = false;
  Cnf cnf;
  std::string error;
};
DimacsResult from_dimacs(const std::string& text);

} // namespace wlmc
