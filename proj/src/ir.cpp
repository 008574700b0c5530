#include "wlmc/ir.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace wlmc {

std::uint64_t mask_width(unsigned width) {
  return width >= 64 ? ~0ull : ((1ull << width) - 1);
}

static unsigned clog2(std::uint64_t v) {
  unsigned w = 0;
  while ((1ull << w) < v) ++w;
  return w;
}

ExprId Netlist::push(Expr e) {
  if (e.width == 0 || e.width > 64) throw std::logic_error("expr width out of range");
  nodes.push_back(e);
  return static_cast<ExprId>(nodes.size() - 1);
}

SigId Netlist::add_input(const std::string& name, unsigned width) {
  if (by_name.count(name)) throw std::logic_error("duplicate signal name: " + name);
  Signal s;
  s.name = name;
  s.kind = SigKind::Input;
  s.width = static_cast<std::uint8_t>(width);
  sigs.push_back(s);
  SigId id = static_cast<SigId>(sigs.size() - 1);
  by_name.emplace(name, id);
  return id;
}

SigId Netlist::add_frozen(const std::string& name, unsigned width) {
  SigId id = add_input(name, width);
  sigs[id].kind = SigKind::Frozen;
  return id;
}

SigId Netlist::add_register(const std::string& name, unsigned width, std::uint64_t reset,
                            DomainId domain) {
  SigId id = add_input(name, width);
  sigs[id].kind = SigKind::Register;
  sigs[id].reset = reset & mask_width(width);
  sigs[id].domain = domain;
  return id;
}

SigId Netlist::add_comb(const std::string& name, ExprId def) {
  SigId id = add_input(name, nodes[def].width);
  sigs[id].kind = SigKind::Comb;
  sigs[id].def = def;
  return id;
}

void Netlist::set_next(SigId reg, ExprId next) {
  if (sigs[reg].kind != SigKind::Register) throw std::logic_error("set_next on non-register");
  if (nodes[next].width != sigs[reg].width) throw std::logic_error("next width mismatch");
  sigs[reg].next = next;
}

DomainId Netlist::add_domain(const std::string& name) {
  SigId tick = add_input(name + "_tick", 1);
  domains.push_back({name, tick});
  return static_cast<DomainId>(domains.size() - 1);
}

PropId Netlist::add_property(Property p) {
  props.push_back(std::move(p));
  return static_cast<PropId>(props.size() - 1);
}

SigId Netlist::find(const std::string& name) const {
  auto it = by_name.find(name);
  return it == by_name.end() ? kNoSig : it->second;
}

// -- expression builders ----------------------------------------------------

ExprId Netlist::C(unsigned width, std::uint64_t value) {
  Expr e;
  e.op = ExprOp::Const;
  e.width = static_cast<std::uint8_t>(width);
  e.value = value & mask_width(width);
  return push(e);
}

ExprId Netlist::R(SigId s) {
  Expr e;
  e.op = ExprOp::Ref;
  e.width = sigs[s].width;
  e.sig = s;
  return push(e);
}

static void same_width(const Netlist& n, ExprId a, ExprId b, const char* what) {
  if (n.nodes[a].width != n.nodes[b].width)
    throw std::logic_error(std::string("width mismatch in ") + what);
}

ExprId Netlist::Not(ExprId a) {
  Expr e;
  e.op = ExprOp::Not;
  e.width = nodes[a].width;
  e.a = a;
  return push(e);
}

#define WLMC_BIN(NAME, OP, W)                              \
  ExprId Netlist::NAME(ExprId a, ExprId b) {               \
    same_width(*this, a, b, #NAME);                        \
    Expr e;                                                \
    e.op = ExprOp::OP;                                     \
    e.width = static_cast<std::uint8_t>(W);                \
    e.a = a;                                               \
    e.b = b;                                               \
    return push(e);                                        \
  }

WLMC_BIN(And, And, nodes[a].width)
WLMC_BIN(Or, Or, nodes[a].width)
WLMC_BIN(Xor, Xor, nodes[a].width)
WLMC_BIN(Add, Add, nodes[a].width)
WLMC_BIN(Sub, Sub, nodes[a].width)
WLMC_BIN(Eq, Eq, 1)
WLMC_BIN(Neq, Neq, 1)
WLMC_BIN(Lt, Lt, 1)
WLMC_BIN(Geq, Geq, 1)
#undef WLMC_BIN

ExprId Netlist::Mux(ExprId sel, ExprId t, ExprId f) {
  if (nodes[sel].width != 1) throw std::logic_error("mux select must be 1 bit");
  same_width(*this, t, f, "Mux");
  Expr e;
  e.op = ExprOp::Mux;
  e.width = nodes[t].width;
  e.a = sel;
  e.b = t;
  e.c = f;
  return push(e);
}

ExprId Netlist::ConcatE(ExprId hi, ExprId lo) {
  unsigned w = nodes[hi].width + nodes[lo].width;
  if (w > 64) throw std::logic_error("concat wider than 64");
  Expr e;
  e.op = ExprOp::Concat;
  e.width = static_cast<std::uint8_t>(w);
  e.a = hi;
  e.b = lo;
  return push(e);
}

ExprId Netlist::SliceE(ExprId a, unsigned hi, unsigned lo) {
  if (hi < lo || hi >= nodes[a].width) throw std::logic_error("bad slice range");
  Expr e;
  e.op = ExprOp::Slice;
  e.width = static_cast<std::uint8_t>(hi - lo + 1);
  e.a = a;
  e.hi = static_cast<std::uint8_t>(hi);
  e.lo = static_cast<std::uint8_t>(lo);
  return push(e);
}

ExprId Netlist::CountOnes(ExprId a) {
  Expr e;
  e.op = ExprOp::CountOnes;
  e.width = static_cast<std::uint8_t>(std::max(1u, clog2(nodes[a].width + 1ull)));
  e.a = a;
  return push(e);
}

ExprId Netlist::ReduceOrE(ExprId a) {
  Expr e;
  e.op = ExprOp::ReduceOr;
  e.width = 1;
  e.a = a;
  return push(e);
}

ExprId Netlist::AndN(const std::vector<ExprId>& xs) {
  if (xs.empty()) return C(1, 1);
  ExprId r = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) r = And(r, xs[i]);
  return r;
}

ExprId Netlist::OrN(const std::vector<ExprId>& xs) {
  if (xs.empty()) return C(1, 0);
  ExprId r = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) r = Or(r, xs[i]);
  return r;
}

ExprId Netlist::ZExt(ExprId a, unsigned width) {
  unsigned w = nodes[a].width;
  if (w == width) return a;
  if (w > width) throw std::logic_error("zext narrows");
  return ConcatE(C(width - w, 0), a);
}

ExprId Netlist::EqC(ExprId a, std::uint64_t v) { return Eq(a, C(nodes[a].width, v)); }

ExprId Netlist::Select(ExprId idx, const std::vector<ExprId>& table) {
  if (table.empty()) throw std::logic_error("empty select table");
  std::vector<ExprId> layer = table;
  size_t full = 1ull << nodes[idx].width;
  while (layer.size() < full) layer.push_back(layer.back());
  for (unsigned bit = 0; layer.size() > 1; ++bit) {
    ExprId sel = SliceE(idx, bit, bit);
    std::vector<ExprId> next;
    next.reserve((layer.size() + 1) / 2);
    for (size_t i = 0; i + 1 < layer.size(); i += 2)
      next.push_back(Mux(sel, layer[i + 1], layer[i]));
    if (layer.size() & 1) next.push_back(layer.back());
    layer.swap(next);
  }
  return layer[0];
}

ExprId subst_expr(Netlist& n, ExprId e, const SigSubst& sub) {
  std::unordered_map<ExprId, ExprId> memo;
  // Recursion depth equals expression tree depth; builders produce shallow
  // trees so plain recursion is fine.
  std::function<ExprId(ExprId)> go = [&](ExprId id) -> ExprId {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    const Expr x = n.nodes[id]; // copy: push() may reallocate
    ExprId out = id;
    switch (x.op) {
      case ExprOp::Const:
        break;
      case ExprOp::Ref: {
        std::optional<ExprId> rep = sub(x.sig);
        if (rep)
          out = *rep;
        else if (n.sigs[x.sig].kind == SigKind::Comb)
          out = go(n.sigs[x.sig].def);
        break;
      }
      default: {
        ExprId a = x.a == kNoExpr ? kNoExpr : go(x.a);
        ExprId b = x.b == kNoExpr ? kNoExpr : go(x.b);
        ExprId c = x.c == kNoExpr ? kNoExpr : go(x.c);
        if (a != x.a || b != x.b || c != x.c) {
          Expr y = x;
          y.a = a;
          y.b = b;
          y.c = c;
          n.nodes.push_back(y);
          out = static_cast<ExprId>(n.nodes.size() - 1);
        }
        break;
      }
    }
    memo.emplace(id, out);
    return out;
  };
  return go(e);
}

// -- validation -------------------------------------------------------------

ValidationReport Netlist::validate() const {
  ValidationReport rep;
  auto bad = [&](std::string m) { rep.violations.push_back(std::move(m)); };

  for (size_t i = 0; i < nodes.size(); ++i) {
    const Expr& e = nodes[i];
    auto in_range = [&](ExprId x) { return x != kNoExpr && x < i; };
    auto need = [&](ExprId x, const char* what) {
      if (!in_range(x)) bad("node " + std::to_string(i) + ": dangling or forward " + what);
      return in_range(x);
    };
    switch (e.op) {
      case ExprOp::Const:
        break;
      case ExprOp::Ref:
        if (e.sig >= sigs.size())
          bad("node " + std::to_string(i) + ": dangling signal id");
        else if (sigs[e.sig].width != e.width)
          bad("node " + std::to_string(i) + ": ref width mismatch");
        break;
      case ExprOp::Not:
      case ExprOp::Slice:
      case ExprOp::CountOnes:
      case ExprOp::ReduceOr:
        need(e.a, "operand");
        break;
      case ExprOp::Mux:
        if (need(e.a, "select") && nodes[e.a].width != 1)
          bad("node " + std::to_string(i) + ": mux select not 1 bit");
        if (need(e.b, "operand") && need(e.c, "operand") &&
            nodes[e.b].width != nodes[e.c].width)
          bad("node " + std::to_string(i) + ": mux arm width mismatch");
        break;
      case ExprOp::Concat:
        if (need(e.a, "operand") && need(e.b, "operand") &&
            nodes[e.a].width + nodes[e.b].width != e.width)
          bad("node " + std::to_string(i) + ": concat width mismatch");
        break;
      default:
        if (need(e.a, "operand") && need(e.b, "operand") &&
            nodes[e.a].width != nodes[e.b].width)
          bad("node " + std::to_string(i) + ": operand width mismatch");
        break;
    }
  }

  for (size_t s = 0; s < sigs.size(); ++s) {
    const Signal& sig = sigs[s];
    switch (sig.kind) {
      case SigKind::Register:
        if (sig.next == kNoExpr)
          bad("register " + sig.name + ": missing next-state expression");
        else if (sig.next >= nodes.size())
          bad("register " + sig.name + ": dangling next-state id");
        else if (nodes[sig.next].width != sig.width)
          bad("register " + sig.name + ": next-state width mismatch");
        if (sig.domain >= domains.size())
          bad("register " + sig.name + ": unknown clock domain");
        break;
      case SigKind::Comb:
        if (sig.def == kNoExpr || sig.def >= nodes.size())
          bad("comb " + sig.name + ": dangling definition");
        else if (nodes[sig.def].width != sig.width)
          bad("comb " + sig.name + ": definition width mismatch");
        break;
      default:
        break;
    }
  }

  // Combinational cycle check: comb signal -> comb signals referenced by its
  // definition. The node arena is forward-only, so a cycle can only arise via
  // a Ref to a comb whose def points at an equal-or-later node.
  {
    std::vector<int> state(sigs.size(), 0); // 0 unvisited, 1 on stack, 2 done
    std::vector<std::vector<SigId>> deps(sigs.size());
    for (size_t s = 0; s < sigs.size(); ++s) {
      if (sigs[s].kind != SigKind::Comb) continue;
      ExprId d = sigs[s].def;
      if (d == kNoExpr || d >= nodes.size()) continue;
      // Collect comb refs in the cone of d.
      std::vector<char> seen(nodes.size(), 0);
      std::vector<ExprId> stack{d};
      seen[d] = 1;
      while (!stack.empty()) {
        const Expr& e = nodes[stack.back()];
        stack.pop_back();
        if (e.op == ExprOp::Ref) {
          if (e.sig < sigs.size() && sigs[e.sig].kind == SigKind::Comb)
            deps[s].push_back(e.sig);
          continue;
        }
        for (ExprId x : {e.a, e.b, e.c})
          if (x != kNoExpr && x < nodes.size() && !seen[x]) {
            seen[x] = 1;
            stack.push_back(x);
          }
      }
    }
    // Iterative DFS over deps.
    for (size_t root = 0; root < sigs.size(); ++root) {
      if (sigs[root].kind != SigKind::Comb || state[root]) continue;
      std::vector<std::pair<SigId, size_t>> st{{static_cast<SigId>(root), 0}};
      state[root] = 1;
      while (!st.empty()) {
        auto& [s, i] = st.back();
        if (i < deps[s].size()) {
          SigId d = deps[s][i++];
          if (state[d] == 1) {
            bad("combinational cycle at id " + std::to_string(d) + " (" + sigs[d].name + ")");
            state[d] = 2;
          } else if (state[d] == 0) {
            state[d] = 1;
            st.push_back({d, 0});
          }
        } else {
          state[s] = 2;
          st.pop_back();
        }
      }
    }
  }

  for (size_t d = 1; d < domains.size(); ++d) {
    SigId t = domains[d].tick;
    if (t >= sigs.size() || sigs[t].kind != SigKind::Input || sigs[t].width != 1)
      bad("domain " + domains[d].name + ": tick must be a 1-bit input");
  }

  for (const Property& p : props) {
    auto chk = [&](ExprId e, const char* what) {
      if (e == kNoExpr || e >= nodes.size())
        bad("property " + p.name + ": dangling " + what);
      else if (nodes[e].width != 1)
        bad("property " + p.name + ": " + what + " not 1 bit");
    };
    chk(p.a, "antecedent");
    if (p.shape != PropShape::Bool)
      chk(p.b, p.shape == PropShape::Eventually ? "goal" : "consequent");
    if (p.domain >= domains.size()) bad("property " + p.name + ": unknown clock domain");
    if (p.shape == PropShape::Eventually && p.role != PropRole::Assert)
      bad("property " + p.name + ": eventually body must have assert role");
    for (ExprId f : p.fairness) chk(f, "fairness term");
  }

  return rep;
}

std::vector<SigId> Netlist::comb_order() const {
  std::vector<SigId> order;
  for (SigId s = 0; s < sigs.size(); ++s)
    if (sigs[s].kind == SigKind::Comb) order.push_back(s);
  return order; // arena order is already topological
}

// -- simulation -------------------------------------------------------------

SimState initial_state(const Netlist& n,
                       const std::vector<std::pair<SigId, std::uint64_t>>& frozen) {
  SimState st;
  st.regs.assign(n.sigs.size(), 0);
  for (SigId s = 0; s < n.sigs.size(); ++s)
    if (n.sigs[s].kind == SigKind::Register) st.regs[s] = n.sigs[s].reset;
  for (auto& [s, v] : frozen) st.regs[s] = v & mask_width(n.sigs[s].width);
  return st;
}

Evaluator::Evaluator(const Netlist& n) : n_(&n) {
  node_vals_.resize(n.nodes.size());
  sig_vals_.resize(n.sigs.size());
}

const Valuation& Evaluator::run(const SimState& st, const Valuation& in_vals) {
  const Netlist& n = *n_;
  for (SigId s = 0; s < n.sigs.size(); ++s) {
    switch (n.sigs[s].kind) {
      case SigKind::Input:
        sig_vals_[s] = in_vals[s] & mask_width(n.sigs[s].width);
        break;
      case SigKind::Frozen:
      case SigKind::Register:
        sig_vals_[s] = st.regs[s];
        break;
      case SigKind::Comb:
        break;
    }
  }
  for (ExprId i = 0; i < n.nodes.size(); ++i) {
    const Expr& e = n.nodes[i];
    std::uint64_t m = mask_width(e.width);
    std::uint64_t v = 0;
    switch (e.op) {
      case ExprOp::Const: v = e.value; break;
      case ExprOp::Ref:
        // A comb signal's def node precedes any Ref to it (add_comb order),
        // so resolving through the def keeps this single pass consistent.
        v = n.sigs[e.sig].kind == SigKind::Comb ? node_vals_[n.sigs[e.sig].def]
                                                : sig_vals_[e.sig];
        break;
      case ExprOp::Not: v = ~node_vals_[e.a] & m; break;
      case ExprOp::And: v = node_vals_[e.a] & node_vals_[e.b]; break;
      case ExprOp::Or: v = node_vals_[e.a] | node_vals_[e.b]; break;
      case ExprOp::Xor: v = node_vals_[e.a] ^ node_vals_[e.b]; break;
      case ExprOp::Add: v = (node_vals_[e.a] + node_vals_[e.b]) & m; break;
      case ExprOp::Sub: v = (node_vals_[e.a] - node_vals_[e.b]) & m; break;
      case ExprOp::Eq: v = node_vals_[e.a] == node_vals_[e.b]; break;
      case ExprOp::Neq: v = node_vals_[e.a] != node_vals_[e.b]; break;
      case ExprOp::Lt: v = node_vals_[e.a] < node_vals_[e.b]; break;
      case ExprOp::Geq: v = node_vals_[e.a] >= node_vals_[e.b]; break;
      case ExprOp::Mux: v = node_vals_[e.a] ? node_vals_[e.b] : node_vals_[e.c]; break;
      case ExprOp::Concat:
        v = (node_vals_[e.a] << n.nodes[e.b].width) | node_vals_[e.b];
        break;
      case ExprOp::Slice: v = (node_vals_[e.a] >> e.lo) & m; break;
      case ExprOp::CountOnes: v = std::popcount(node_vals_[e.a]); break;
      case ExprOp::ReduceOr: v = node_vals_[e.a] != 0; break;
    }
    node_vals_[i] = v;
    // Comb signals whose def is this node are filled below via sig scan.
  }
  for (SigId s = 0; s < n.sigs.size(); ++s)
    if (n.sigs[s].kind == SigKind::Comb) sig_vals_[s] = node_vals_[n.sigs[s].def];
  return sig_vals_;
}

void Evaluator::step_into(const SimState& st, SimState& out) const {
  const Netlist& n = *n_;
  out.regs = st.regs;
  for (SigId s = 0; s < n.sigs.size(); ++s) {
    const Signal& sig = n.sigs[s];
    if (sig.kind != SigKind::Register) continue;
    bool ticks = sig.domain == kDomainFree ||
                 sig_vals_[n.domains[sig.domain].tick] != 0;
    if (ticks) out.regs[s] = node_vals_[sig.next];
  }
}

Valuation eval_all(const Netlist& n, const SimState& st,
                   const std::vector<std::pair<SigId, std::uint64_t>>& inputs) {
  Valuation in_vals(n.sigs.size(), 0);
  for (auto& [s, v] : inputs) in_vals[s] = v;
  Evaluator ev(n);
  return ev.run(st, in_vals);
}

std::uint64_t eval_expr(const Netlist& n, const Valuation& v, ExprId e) {
  // Linear pass over the arena prefix; shared subterms evaluate once.
  std::vector<std::uint64_t> nv(e + 1, 0);
  for (ExprId i = 0; i <= e; ++i) {
    const Expr& x = n.nodes[i];
    std::uint64_t m = mask_width(x.width);
    std::uint64_t r = 0;
    switch (x.op) {
      case ExprOp::Const: r = x.value; break;
      case ExprOp::Ref: r = v[x.sig]; break;
      case ExprOp::Not: r = ~nv[x.a] & m; break;
      case ExprOp::And: r = nv[x.a] & nv[x.b]; break;
      case ExprOp::Or: r = nv[x.a] | nv[x.b]; break;
      case ExprOp::Xor: r = nv[x.a] ^ nv[x.b]; break;
      case ExprOp::Add: r = (nv[x.a] + nv[x.b]) & m; break;
      case ExprOp::Sub: r = (nv[x.a] - nv[x.b]) & m; break;
      case ExprOp::Eq: r = nv[x.a] == nv[x.b]; break;
      case ExprOp::Neq: r = nv[x.a] != nv[x.b]; break;
      case ExprOp::Lt: r = nv[x.a] < nv[x.b]; break;
      case ExprOp::Geq: r = nv[x.a] >= nv[x.b]; break;
      case ExprOp::Mux: r = nv[x.a] ? nv[x.b] : nv[x.c]; break;
      case ExprOp::Concat: r = (nv[x.a] << n.nodes[x.b].width) | nv[x.b]; break;
      case ExprOp::Slice: r = (nv[x.a] >> x.lo) & m; break;
      case ExprOp::CountOnes: r = std::popcount(nv[x.a]); break;
      case ExprOp::ReduceOr: r = nv[x.a] != 0; break;
    }
    nv[i] = r;
  }
  return nv[e];
}

SimState step(const Netlist& n, const SimState& st, const Valuation& v) {
  SimState out;
  out.regs = st.regs;
  for (SigId s = 0; s < n.sigs.size(); ++s) {
    const Signal& sig = n.sigs[s];
    if (sig.kind != SigKind::Register) continue;
    bool ticks =
        sig.domain == kDomainFree || v[n.domains[sig.domain].tick] != 0;
    if (ticks) out.regs[s] = eval_expr(n, v, sig.next) & mask_width(sig.width);
  }
  return out;
}

} // namespace wlmc
