#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wlmc/ir.hpp"

// Counterexample and witness traces. A trace stores the full valuation of
// every signal at every cycle, so text emission needs no re-simulation.

namespace wlmc {

struct Trace {
  std::vector<Valuation> cycles;
  std::size_t length() const { return cycles.size(); }
};

// Text format: header line "#cycles=<n>", then one line per (cycle, signal)
// "<cycle> <name> <hex-value>" with cycles ascending and names sorted within
// each cycle. Hex is lowercase, no 0x prefix.
std::string trace_to_text(const Netlist& n, const Trace& t);

struct ParsedTrace {
  bool ok = false;
  std::string error;
  std::size_t n_cycles = 0;
  // rows[cycle] maps signal name to value.
  std::vector<std::vector<std::pair<std::string, std::uint64_t>>> rows;
};
ParsedTrace trace_from_text(const std::string& text);

// Runs the netlist for inputs.size() cycles from the given state, recording
// the full valuation each cycle. inputs[t] is indexed by signal id; only
// input-kind entries are read.
Trace simulate(const Netlist& n, const SimState& init,
               const std::vector<Valuation>& inputs);

// True iff the named 1-bit signal is 1 at the given cycle of the trace.
bool trace_bit(const Netlist& n, const Trace& t, SigId sig, std::size_t cycle);

} // namespace wlmc
