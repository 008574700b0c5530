#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "wlmc/monitor.hpp"
#include "wlmc/sat.hpp"

// Bit-blasted unrolling of a netlist into CNF, one frame per cycle.
//
// Literals are DIMACS ints; variable 1 is the constant true (unit clause
// added on construction), so +1/-1 double as folded constants and constant
// propagation happens at the literal level. Encoding is lazy: only the cone
// of the words actually requested produces variables and clauses. Register
// words at frame f+1 alias their next-state cone at frame f (with a literal
// mux when the domain can skip a tick); frozen symbols alias frame 0.

namespace wlmc {

class Unroller {
public:
  static constexpr int kTrue = 1, kFalse = -1;

  // init_at_frame0: fix registers to reset values at frame 0; otherwise
  // frame-0 register bits are free (induction-step style).
  Unroller(const Netlist& n, ClauseSink& sink, bool init_at_frame0);

  // Replaces the comb signal's definition with free variables; must precede
  // any encoding touching the signal.
  void add_cut(SigId comb_sig);

  const std::vector<int>& word(SigId s, int frame);
  int lit(SigId s, int frame) { return word(s, frame)[0]; }
  std::vector<int> expr_word(ExprId e, int frame);

  // Every variable created for a named signal bit (inputs, frozen symbols,
  // free frame-0 registers, cuts).
  const std::vector<VarInfo>& var_map() const { return var_map_; }

  // Value of the word in a model, if its bits were ever encoded.
  std::optional<std::uint64_t> read_word(SigId s, int frame,
                                         const SatResult& r) const;

  const Netlist& net() const { return *n_; }

private:
  int fresh(SigId s, unsigned bit, int frame);
  int mk_and(int a, int b);
  int mk_or(int a, int b);
  int mk_xor(int a, int b);
  int mk_ite(int s, int t, int f);
  std::vector<int> add_words(const std::vector<int>& a, const std::vector<int>& b,
                             int carry_in);
  void ensure_frame(int f);

  const Netlist* n_;
  ClauseSink* sink_;
  bool init_;
  std::unordered_set<SigId> cuts_;
  // [frame][sig] / [frame][node]; empty vector = not yet encoded.
  std::vector<std::vector<std::vector<int>>> sig_bits_, node_bits_;
  std::vector<VarInfo> var_map_;
};

// Eager whole-netlist encoding: every signal at every frame, constraint
// monitors asserted true at each frame. bad/goal literal tables are indexed
// [monitor][frame] (entries only for monitors of that kind).
struct EncodedBmc {
  Cnf cnf;
  std::vector<std::vector<int>> bad;
  std::vector<std::vector<int>> goal;
};
EncodedBmc tseitin_encode(const Monitored& mon, int frames, bool init_at_frame0);

} // namespace wlmc
