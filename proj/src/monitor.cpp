#include "wlmc/monitor.hpp"

#include <stdexcept>

namespace wlmc {

Monitor compile_property(Netlist& n, PropId p) {
  const Property& prop = n.props[p];
  Monitor m;
  m.prop = p;

  ExprId tick = kNoExpr;
  if (prop.domain != kDomainFree) tick = n.R(n.domains[prop.domain].tick);
  auto gate = [&](ExprId x) { return tick == kNoExpr ? x : n.And(tick, x); };
  // Off-tick cycles satisfy obligations vacuously.
  auto holds = [&](ExprId x) { return tick == kNoExpr ? x : n.Or(n.Not(tick), x); };

  if (prop.shape == PropShape::Eventually) {
    if (prop.role != PropRole::Assert)
      throw std::logic_error("eventually body must have assert role");
    m.kind = MonitorKind::Liveness;
    m.trigger = gate(prop.a);
    m.goal = gate(prop.b);
    for (ExprId f : prop.fairness) m.fairness.push_back(gate(f));
    return m;
  }

  // Failure condition on a tick of the domain.
  ExprId fail = kNoExpr;
  switch (prop.shape) {
    case PropShape::Bool:
      fail = n.Not(prop.a);
      break;
    case PropShape::ImplSame:
      fail = n.And(prop.a, n.Not(prop.b));
      break;
    case PropShape::ImplNext: {
      SigId d1 = n.add_register("mon_d1_" + prop.name, 1, 0, prop.domain);
      n.set_next(d1, prop.a);
      fail = n.And(n.R(d1), n.Not(prop.b));
      break;
    }
    default:
      throw std::logic_error("unreachable");
  }

  switch (prop.role) {
    case PropRole::Assert:
      m.kind = MonitorKind::Bad;
      m.sig = n.add_comb("mon_bad_" + prop.name, gate(fail));
      break;
    case PropRole::Assume:
      m.kind = MonitorKind::Constraint;
      m.sig = n.add_comb("mon_con_" + prop.name, holds(n.Not(fail)));
      break;
    case PropRole::Cover: {
      ExprId body = prop.shape == PropShape::Bool
                        ? prop.a
                        : n.And(prop.shape == PropShape::ImplSame
                                    ? prop.a
                                    : n.R(n.find("mon_d1_" + prop.name)),
                                prop.b);
      m.kind = MonitorKind::Goal;
      m.sig = n.add_comb("mon_goal_" + prop.name, gate(body));
      break;
    }
  }
  return m;
}

Monitored compile_monitors(const Netlist& n) {
  Monitored out;
  out.net = n;
  for (PropId p = 0; p < out.net.props.size(); ++p)
    out.mons.push_back(compile_property(out.net, p));
  return out;
}

} // namespace wlmc
