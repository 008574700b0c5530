#pragma once

#include <string>
#include <vector>

#include "wlmc/ir.hpp"

// Property-to-circuit compilation. Every property becomes a monitor:
//
//   assert  -> 1-bit "bad" comb signal, 1 exactly when the property fails
//              on a tick of its domain;
//   assume  -> 1-bit "constraint" comb signal that must be held 1 at every
//              cycle (vacuously 1 off-tick);
//   cover   -> 1-bit "goal" comb signal, 1 when the cover body is observed.
//
// a |=> b places a one-tick delay register in the property's domain, so the
// antecedent is sampled on one tick and the consequent checked on the next.
// Eventually-shaped properties compile to no circuit here; the monitor
// records gated trigger/goal/fairness expressions for the liveness engine.

namespace wlmc {

enum class MonitorKind : std::uint8_t { Bad, Constraint, Goal, Liveness };

struct Monitor {
  PropId prop = 0;
  MonitorKind kind = MonitorKind::Bad;
  SigId sig = kNoSig; // the bad/constraint/goal signal; kNoSig for Liveness
  // Liveness only (already gated by the domain tick):
  ExprId trigger = kNoExpr;
  ExprId goal = kNoExpr;
  std::vector<ExprId> fairness;
};

struct Monitored {
  Netlist net;
  std::vector<Monitor> mons; // index-aligned with net.props
};

// Compiles one property in place; the netlist gains the monitor circuit.
Monitor compile_property(Netlist& n, PropId p);

// Copies the netlist and compiles every property.
Monitored compile_monitors(const Netlist& n);

} // namespace wlmc
