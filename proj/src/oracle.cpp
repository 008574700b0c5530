#include "wlmc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace wlmc {

namespace {

// Marks the node cone of the given roots; relevant[s] is set for every input
// signal whose value can influence a root (comb references are chased).
void mark_cone(const Netlist& n, const std::vector<ExprId>& roots,
               std::vector<char>& node_seen, std::vector<char>& relevant) {
  std::vector<ExprId> work;
  auto push = [&](ExprId e) {
    if (e != kNoExpr && !node_seen[e]) {
      node_seen[e] = 1;
      work.push_back(e);
    }
  };
  for (ExprId r : roots) push(r);
  while (!work.empty()) {
    const Expr& e = n.nodes[work.back()];
    work.pop_back();
    if (e.op == ExprOp::Ref) {
      const Signal& s = n.sigs[e.sig];
      if (s.kind == SigKind::Comb)
        push(s.def);
      else if (s.kind == SigKind::Input)
        relevant[e.sig] = 1;
    } else {
      push(e.a);
      push(e.b);
      push(e.c);
    }
  }
}

} // namespace

ExplicitOracle::ExplicitOracle(const Monitored& mon, OracleLimits lim)
    : mon_(&mon), lim_(lim) {
  const Netlist& n = mon.net;

  std::vector<ExprId> roots;
  for (SigId s = 0; s < n.sigs.size(); ++s)
    if (n.sigs[s].kind == SigKind::Register) roots.push_back(n.sigs[s].next);
  for (const Monitor& m : mon.mons) {
    if (m.sig != kNoSig) roots.push_back(n.sigs[m.sig].def);
    if (m.kind == MonitorKind::Liveness) {
      roots.push_back(m.trigger);
      roots.push_back(m.goal);
      for (ExprId f : m.fairness) roots.push_back(f);
    }
  }
  std::vector<char> node_seen(n.nodes.size(), 0), relevant(n.sigs.size(), 0);
  mark_cone(n, roots, node_seen, relevant);
  for (std::size_t d = 1; d < n.domains.size(); ++d)
    for (SigId s = 0; s < n.sigs.size(); ++s)
      if (n.sigs[s].kind == SigKind::Register && n.sigs[s].domain == d)
        relevant[n.domains[d].tick] = 1;

  unsigned off = 0;
  for (SigId s = 0; s < n.sigs.size(); ++s)
    if (n.sigs[s].kind == SigKind::Register || n.sigs[s].kind == SigKind::Frozen) {
      state_fields_.push_back({s, n.sigs[s].width, off});
      off += n.sigs[s].width;
    }
  state_bits_ = off;
  off = 0;
  for (SigId s = 0; s < n.sigs.size(); ++s)
    if (n.sigs[s].kind == SigKind::Input && relevant[s]) {
      input_fields_.push_back({s, n.sigs[s].width, off});
      off += n.sigs[s].width;
    }
  input_bits_ = off;

  first_bad_.resize(mon.mons.size());
  first_goal_.resize(mon.mons.size());
}

std::uint64_t ExplicitOracle::pack_state(const Valuation& v) const {
  std::uint64_t key = 0;
  for (const Field& f : state_fields_)
    key |= (v[f.sig] & mask_width(f.width)) << f.offset;
  return key;
}

void ExplicitOracle::unpack_state(std::uint64_t key, SimState& st) const {
  st.regs.assign(mon_->net.sigs.size(), 0);
  for (const Field& f : state_fields_)
    st.regs[f.sig] = (key >> f.offset) & mask_width(f.width);
}

void ExplicitOracle::unpack_input(std::uint64_t key, Valuation& v) const {
  for (const Field& f : input_fields_)
    v[f.sig] = (key >> f.offset) & mask_width(f.width);
}

// Shared per-pass evaluation machinery: nodes whose value can depend on an
// input are re-evaluated per input valuation, everything else once per state.
namespace {

struct SplitEval {
  const Netlist* n;
  std::vector<char> input_dep;       // per node
  std::vector<ExprId> state_nodes, input_nodes;
  std::vector<std::uint64_t> node_vals, sig_vals;

  SplitEval(const Netlist& net, const std::vector<char>& relevant_input)
      : n(&net), input_dep(net.nodes.size(), 0) {
    for (ExprId i = 0; i < net.nodes.size(); ++i) {
      const Expr& e = net.nodes[i];
      char dep = 0;
      if (e.op == ExprOp::Ref) {
        const Signal& s = net.sigs[e.sig];
        if (s.kind == SigKind::Input)
          dep = relevant_input[e.sig];
        else if (s.kind == SigKind::Comb)
          dep = input_dep[s.def];
      } else {
        if (e.a != kNoExpr) dep |= input_dep[e.a];
        if (e.b != kNoExpr) dep |= input_dep[e.b];
        if (e.c != kNoExpr) dep |= input_dep[e.c];
      }
      input_dep[i] = dep;
      (dep ? input_nodes : state_nodes).push_back(i);
    }
    node_vals.resize(net.nodes.size());
    sig_vals.assign(net.sigs.size(), 0);
  }

  void eval_node(ExprId i) {
    const Expr& e = n->nodes[i];
    std::uint64_t m = mask_width(e.width);
    std::uint64_t v = 0;
    switch (e.op) {
      case ExprOp::Const: v = e.value; break;
      case ExprOp::Ref:
        v = n->sigs[e.sig].kind == SigKind::Comb ? node_vals[n->sigs[e.sig].def]
                                                 : sig_vals[e.sig];
        break;
      case ExprOp::Not: v = ~node_vals[e.a] & m; break;
      case ExprOp::And: v = node_vals[e.a] & node_vals[e.b]; break;
      case ExprOp::Or: v = node_vals[e.a] | node_vals[e.b]; break;
      case ExprOp::Xor: v = node_vals[e.a] ^ node_vals[e.b]; break;
      case ExprOp::Add: v = (node_vals[e.a] + node_vals[e.b]) & m; break;
      case ExprOp::Sub: v = (node_vals[e.a] - node_vals[e.b]) & m; break;
      case ExprOp::Eq: v = node_vals[e.a] == node_vals[e.b]; break;
      case ExprOp::Neq: v = node_vals[e.a] != node_vals[e.b]; break;
      case ExprOp::Lt: v = node_vals[e.a] < node_vals[e.b]; break;
      case ExprOp::Geq: v = node_vals[e.a] >= node_vals[e.b]; break;
      case ExprOp::Mux: v = node_vals[e.a] ? node_vals[e.b] : node_vals[e.c]; break;
      case ExprOp::Concat:
        v = (node_vals[e.a] << n->nodes[e.b].width) | node_vals[e.b];
        break;
      case ExprOp::Slice: v = (node_vals[e.a] >> e.lo) & m; break;
      case ExprOp::CountOnes: v = std::popcount(node_vals[e.a]); break;
      case ExprOp::ReduceOr: v = node_vals[e.a] != 0; break;
    }
    node_vals[i] = v;
  }

  void state_pass(const SimState& st) {
    for (SigId s = 0; s < n->sigs.size(); ++s) {
      SigKind k = n->sigs[s].kind;
      if (k == SigKind::Register || k == SigKind::Frozen) sig_vals[s] = st.regs[s];
      else if (k == SigKind::Input) sig_vals[s] = 0;
    }
    for (ExprId i : state_nodes) eval_node(i);
  }

  void input_pass() {
    for (ExprId i : input_nodes) eval_node(i);
  }

  std::uint64_t sig_value(SigId s) const {
    return n->sigs[s].kind == SigKind::Comb ? node_vals[n->sigs[s].def]
                                            : sig_vals[s];
  }

  bool tick(const Signal& sig) const {
    return sig.domain == kDomainFree ||
           sig_vals[n->domains[sig.domain].tick] != 0;
  }
};

} // namespace

bool ExplicitOracle::enumerate() {
  const Netlist& n = mon_->net;
  if (state_bits_ > 64 || state_bits_ > lim_.max_state_bits) {
    refusal_ = "state too large: " + std::to_string(state_bits_) +
               " bits (cap " + std::to_string(lim_.max_state_bits) + ")";
    return false;
  }
  if (input_bits_ > lim_.max_input_bits) {
    refusal_ = "input too large: " + std::to_string(input_bits_) +
               " bits (cap " + std::to_string(lim_.max_input_bits) + ")";
    return false;
  }

  std::vector<char> relevant(n.sigs.size(), 0);
  for (const Field& f : input_fields_) relevant[f.sig] = 1;
  SplitEval ev(n, relevant);

  // Initial set: resets x every frozen valuation.
  unsigned frozen_bits = 0;
  for (const Field& f : state_fields_)
    if (n.sigs[f.sig].kind == SigKind::Frozen) frozen_bits += f.width;
  if (frozen_bits >= 63 || (1ull << frozen_bits) > lim_.max_states) {
    refusal_ = "frozen space too large: " + std::to_string(frozen_bits) + " bits";
    return false;
  }

  std::uint64_t resets = 0;
  for (const Field& f : state_fields_)
    if (n.sigs[f.sig].kind == SigKind::Register)
      resets |= (n.sigs[f.sig].reset & mask_width(f.width)) << f.offset;

  std::deque<std::uint64_t> queue;
  for (std::uint64_t fz = 0; fz < (1ull << frozen_bits); ++fz) {
    std::uint64_t key = resets;
    unsigned consumed = 0;
    for (const Field& f : state_fields_)
      if (n.sigs[f.sig].kind == SigKind::Frozen) {
        key |= ((fz >> consumed) & mask_width(f.width)) << f.offset;
        consumed += f.width;
      }
    if (states_.emplace(key, Meta{0, 0, 0, true}).second) queue.push_back(key);
  }

  SimState st;
  const std::uint64_t n_inputs = 1ull << input_bits_;
  while (!queue.empty()) {
    std::uint64_t cur = queue.front();
    queue.pop_front();
    std::uint32_t depth = states_.at(cur).depth;
    unpack_state(cur, st);
    ev.state_pass(st);
    for (std::uint64_t in = 0; in < n_inputs; ++in) {
      for (const Field& f : input_fields_)
        ev.sig_vals[f.sig] = (in >> f.offset) & mask_width(f.width);
      ev.input_pass();

      bool allowed = true;
      for (const Monitor& m : mon_->mons)
        if (m.kind == MonitorKind::Constraint && ev.sig_value(m.sig) == 0) {
          allowed = false;
          break;
        }
      if (!allowed) continue;
      ++n_transitions_;

      for (std::size_t mi = 0; mi < mon_->mons.size(); ++mi) {
        const Monitor& m = mon_->mons[mi];
        if (m.sig == kNoSig) continue;
        if (m.kind == MonitorKind::Bad && !first_bad_[mi].found &&
            ev.sig_value(m.sig) != 0)
          first_bad_[mi] = {true, cur, in, depth};
        else if (m.kind == MonitorKind::Goal && !first_goal_[mi].found &&
                 ev.sig_value(m.sig) != 0)
          first_goal_[mi] = {true, cur, in, depth};
      }

      std::uint64_t next = 0;
      for (const Field& f : state_fields_) {
        const Signal& sig = n.sigs[f.sig];
        std::uint64_t v;
        if (sig.kind == SigKind::Frozen)
          v = ev.sig_vals[f.sig];
        else
          v = ev.tick(sig) ? ev.node_vals[sig.next] : ev.sig_vals[f.sig];
        next |= (v & mask_width(f.width)) << f.offset;
      }
      auto [it, fresh] = states_.emplace(next, Meta{cur, in, depth + 1, false});
      if (fresh) {
        if (states_.size() > lim_.max_states) {
          refusal_ = "state count exceeds cap " + std::to_string(lim_.max_states);
          return false;
        }
        queue.push_back(next);
      }
    }
  }
  enumerated_ = true;
  return true;
}

std::vector<Valuation> ExplicitOracle::input_chain(std::uint64_t state) const {
  std::vector<std::uint64_t> packs;
  std::uint64_t cur = state;
  for (;;) {
    const Meta& m = states_.at(cur);
    if (m.initial) break;
    packs.push_back(m.input);
    cur = m.pred;
  }
  std::reverse(packs.begin(), packs.end());
  std::vector<Valuation> inputs;
  for (std::uint64_t p : packs) {
    Valuation v(mon_->net.sigs.size(), 0);
    unpack_input(p, v);
    inputs.push_back(std::move(v));
  }
  return inputs;
}

Trace ExplicitOracle::path_to(std::uint64_t state, std::uint64_t final_input) const {
  std::uint64_t origin = state;
  while (!states_.at(origin).initial) origin = states_.at(origin).pred;
  SimState init;
  unpack_state(origin, init);
  std::vector<Valuation> inputs = input_chain(state);
  Valuation last(mon_->net.sigs.size(), 0);
  unpack_input(final_input, last);
  inputs.push_back(std::move(last));
  return simulate(mon_->net, init, inputs);
}

ExplicitOracle::Safety ExplicitOracle::check_safety(PropId prop) const {
  if (!enumerated_) throw std::logic_error("enumerate first");
  if (mon_->mons[prop].kind != MonitorKind::Bad)
    throw std::logic_error("check_safety: not an assert property");
  Safety out;
  const Hit& h = first_bad_[prop];
  if (!h.found) return out;
  out.holds = false;
  out.frame = static_cast<int>(h.depth);
  out.cex = path_to(h.state, h.input);
  if (!trace_bit(mon_->net, out.cex, mon_->mons[prop].sig, h.depth))
    throw std::logic_error("oracle path replay failed");
  return out;
}

ExplicitOracle::Cover ExplicitOracle::check_cover(PropId prop) const {
  if (!enumerated_) throw std::logic_error("enumerate first");
  if (mon_->mons[prop].kind != MonitorKind::Goal)
    throw std::logic_error("check_cover: not a cover property");
  Cover out;
  const Hit& h = first_goal_[prop];
  if (!h.found) return out;
  out.reachable = true;
  out.frame = static_cast<int>(h.depth);
  out.wit = path_to(h.state, h.input);
  if (!trace_bit(mon_->net, out.wit, mon_->mons[prop].sig, h.depth))
    throw std::logic_error("oracle path replay failed");
  return out;
}

ExplicitOracle::Live ExplicitOracle::check_liveness(PropId prop) const {
  if (!enumerated_) throw std::logic_error("enumerate first");
  const Monitor& lm = mon_->mons[prop];
  if (lm.kind != MonitorKind::Liveness)
    throw std::logic_error("check_liveness: not an eventually property");
  const Netlist& n = mon_->net;

  // Dense indices in discovery order are not stored during BFS; rebuild a
  // deterministic order by sorting keys (sizes here are tiny).
  std::vector<std::uint64_t> keys;
  keys.reserve(states_.size());
  for (const auto& [k, m] : states_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::unordered_map<std::uint64_t, std::uint32_t> idx;
  for (std::uint32_t i = 0; i < keys.size(); ++i) idx.emplace(keys[i], i);

  struct Edge {
    std::uint32_t to;
    std::uint32_t fair;
    std::uint64_t input;
    bool goal, trig;
  };
  std::vector<std::vector<Edge>> adj(keys.size());

  std::vector<char> relevant(n.sigs.size(), 0);
  for (const Field& f : input_fields_) relevant[f.sig] = 1;
  SplitEval ev(n, relevant);
  SimState st;
  const std::uint64_t n_inputs = 1ull << input_bits_;
  const std::uint32_t all_fair =
      lm.fairness.empty() ? 0 : (1u << lm.fairness.size()) - 1;

  for (std::uint32_t si = 0; si < keys.size(); ++si) {
    unpack_state(keys[si], st);
    ev.state_pass(st);
    for (std::uint64_t in = 0; in < n_inputs; ++in) {
      for (const Field& f : input_fields_)
        ev.sig_vals[f.sig] = (in >> f.offset) & mask_width(f.width);
      ev.input_pass();
      bool allowed = true;
      for (const Monitor& m : mon_->mons)
        if (m.kind == MonitorKind::Constraint && ev.sig_value(m.sig) == 0) {
          allowed = false;
          break;
        }
      if (!allowed) continue;
      std::uint64_t next = 0;
      for (const Field& f : state_fields_) {
        const Signal& sig = n.sigs[f.sig];
        std::uint64_t v;
        if (sig.kind == SigKind::Frozen)
          v = ev.sig_vals[f.sig];
        else
          v = ev.tick(sig) ? ev.node_vals[sig.next] : ev.sig_vals[f.sig];
        next |= (v & mask_width(f.width)) << f.offset;
      }
      Edge e;
      e.to = idx.at(next);
      e.input = in;
      e.goal = ev.node_vals[lm.goal] != 0;
      e.trig = ev.node_vals[lm.trigger] != 0;
      e.fair = 0;
      for (std::size_t i = 0; i < lm.fairness.size(); ++i)
        if (ev.node_vals[lm.fairness[i]] != 0) e.fair |= 1u << i;
      adj[si].push_back(e);
    }
  }

  // Product reachability over (state, pending).
  std::vector<char> reach0(keys.size(), 0), reach1(keys.size(), 0);
  struct PPred {
    std::uint32_t state = 0;
    std::uint8_t pending = 0;
    std::uint64_t input = 0;
    bool root = true;
  };
  std::vector<PPred> pred0(keys.size()), pred1(keys.size());
  std::deque<std::pair<std::uint32_t, std::uint8_t>> pq;
  for (std::uint32_t i = 0; i < keys.size(); ++i)
    if (states_.at(keys[i]).initial) {
      reach0[i] = 1;
      pq.emplace_back(i, 0);
    }
  while (!pq.empty()) {
    auto [si, p] = pq.front();
    pq.pop_front();
    for (const Edge& e : adj[si]) {
      std::uint8_t pc = (p || e.trig) && !e.goal ? 1 : 0;
      std::vector<char>& reach = pc ? reach1 : reach0;
      if (!reach[e.to]) {
        reach[e.to] = 1;
        (pc ? pred1 : pred0)[e.to] = {si, p, e.input, false};
        pq.emplace_back(e.to, pc);
      }
    }
  }

  // SCCs of the goal-free subgraph restricted to pending-reachable states.
  // Iterative Tarjan.
  const std::uint32_t kUnvisited = 0xffffffffu;
  std::vector<std::uint32_t> index(keys.size(), kUnvisited), low(keys.size(), 0),
      comp(keys.size(), kUnvisited);
  std::vector<char> on_stack(keys.size(), 0);
  std::vector<std::uint32_t> stk;
  std::uint32_t next_index = 0, n_comp = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t ei;
  };
  for (std::uint32_t root = 0; root < keys.size(); ++root) {
    if (!reach1[root] || index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stk.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& fr = call.back();
      bool descended = false;
      while (fr.ei < adj[fr.v].size()) {
        const Edge& e = adj[fr.v][fr.ei++];
        if (e.goal || !reach1[e.to]) continue;
        if (index[e.to] == kUnvisited) {
          index[e.to] = low[e.to] = next_index++;
          stk.push_back(e.to);
          on_stack[e.to] = 1;
          call.push_back({e.to, 0});
          descended = true;
          break;
        }
        if (on_stack[e.to]) low[fr.v] = std::min(low[fr.v], index[e.to]);
      }
      if (descended) continue;
      if (low[fr.v] == index[fr.v]) {
        for (;;) {
          std::uint32_t w = stk.back();
          stk.pop_back();
          on_stack[w] = 0;
          comp[w] = n_comp;
          if (w == fr.v) break;
        }
        ++n_comp;
      }
      std::uint32_t v = fr.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }

  // A component violates when it contains a goal-free cycle whose internal
  // edges cover every fairness term.
  std::vector<std::uint32_t> comp_fair(n_comp, 0);
  std::vector<char> comp_cycle(n_comp, 0);
  std::vector<std::uint32_t> comp_size(n_comp, 0);
  for (std::uint32_t si = 0; si < keys.size(); ++si)
    if (comp[si] != kUnvisited) ++comp_size[comp[si]];
  for (std::uint32_t si = 0; si < keys.size(); ++si) {
    if (comp[si] == kUnvisited) continue;
    for (const Edge& e : adj[si]) {
      if (e.goal || !reach1[e.to] || comp[e.to] != comp[si]) continue;
      comp_fair[comp[si]] |= e.fair;
      if (comp_size[comp[si]] > 1 || e.to == si) comp_cycle[comp[si]] = 1;
    }
  }
  std::uint32_t bad_comp = kUnvisited;
  for (std::uint32_t c = 0; c < n_comp; ++c)
    if (comp_cycle[c] && (comp_fair[c] & all_fair) == all_fair) {
      bad_comp = c;
      break;
    }

  Live out;
  if (bad_comp == kUnvisited) return out;
  out.holds = false;

  // Reconstruct a witness: stem to some pending state of the component, then
  // a loop inside the component covering every fairness term.
  std::uint32_t entry = kUnvisited;
  for (std::uint32_t si = 0; si < keys.size(); ++si)
    if (comp[si] == bad_comp) {
      entry = si;
      break;
    }

  // Stem inputs via product predecessors to (entry, pending=1).
  std::vector<std::uint64_t> stem;
  {
    std::uint32_t s = entry;
    std::uint8_t p = 1;
    while (true) {
      const PPred& pp = p ? pred1[s] : pred0[s];
      if (pp.root) break;
      stem.push_back(pp.input);
      s = pp.state;
      p = pp.pending;
    }
    std::reverse(stem.begin(), stem.end());
    // The walk must start at an initial state of the original system.
    std::uint64_t origin_key = keys[s];
    if (!states_.at(origin_key).initial)
      throw std::logic_error("lasso stem does not reach an initial state");
    SimState init;
    unpack_state(origin_key, init);
    // Loop: greedy BFS inside the component, collecting uncovered fairness
    // bits, then returning to the entry.
    std::vector<std::uint64_t> loop;
    std::uint32_t cur = entry;
    std::uint32_t covered = 0;
    auto bfs_to = [&](std::uint32_t from, auto accept) {
      std::unordered_map<std::uint32_t, std::pair<std::uint32_t, std::uint64_t>> par;
      std::deque<std::uint32_t> q{from};
      std::vector<char> seen(keys.size(), 0);
      seen[from] = 1;
      std::uint32_t found_from = kUnvisited;
      std::uint64_t found_in = 0;
      while (!q.empty() && found_from == kUnvisited) {
        std::uint32_t v = q.front();
        q.pop_front();
        for (const Edge& e : adj[v]) {
          if (e.goal || comp[e.to] != bad_comp) continue;
          if (accept(e)) {
            found_from = v;
            found_in = e.input;
            break;
          }
          if (!seen[e.to]) {
            seen[e.to] = 1;
            par[e.to] = {v, e.input};
            q.push_back(e.to);
          }
        }
      }
      std::vector<std::uint64_t> path;
      if (found_from == kUnvisited) return path;
      path.push_back(found_in);
      std::uint32_t w = found_from;
      while (w != from) {
        auto [pv, pin] = par.at(w);
        path.push_back(pin);
        w = pv;
      }
      std::reverse(path.begin(), path.end());
      return path;
    };
    while ((covered & all_fair) != all_fair) {
      std::uint32_t before = covered;
      std::vector<std::uint64_t> seg = bfs_to(cur, [&](const Edge& e) {
        return (e.fair & all_fair & ~covered) != 0;
      });
      if (seg.empty()) throw std::logic_error("fairness bit unreachable in loop");
      // Find which bits the accepted edge carried.
      std::uint32_t v = cur;
      for (std::size_t i = 0; i + 1 < seg.size(); ++i)
        for (const Edge& e : adj[v])
          if (!e.goal && comp[e.to] == bad_comp && e.input == seg[i]) {
            v = e.to;
            break;
          }
      for (const Edge& e : adj[v])
        if (!e.goal && comp[e.to] == bad_comp && e.input == seg.back()) {
          covered |= e.fair;
          cur = e.to;
          break;
        }
      loop.insert(loop.end(), seg.begin(), seg.end());
      if (covered == before) throw std::logic_error("loop walk stuck");
    }
    if (cur != entry || loop.empty()) {
      std::vector<std::uint64_t> seg =
          bfs_to(cur, [&](const Edge& e) { return e.to == entry; });
      if (seg.empty()) throw std::logic_error("cannot close loop");
      loop.insert(loop.end(), seg.begin(), seg.end());
    }

    std::vector<Valuation> inputs;
    for (std::uint64_t p2 : stem) {
      Valuation v2(n.sigs.size(), 0);
      unpack_input(p2, v2);
      inputs.push_back(std::move(v2));
    }
    for (std::uint64_t p2 : loop) {
      Valuation v2(n.sigs.size(), 0);
      unpack_input(p2, v2);
      inputs.push_back(std::move(v2));
    }
    out.loop_start = static_cast<int>(stem.size());
    out.lasso = simulate(n, init, inputs);
  }
  return out;
}

} // namespace wlmc
