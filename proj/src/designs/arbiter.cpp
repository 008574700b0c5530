#include "wlmc/designs.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace wlmc {

namespace {

unsigned ceil_log2(unsigned v) {
  unsigned b = 0;
  while ((1u << b) < v) ++b;
  return b;
}

} // namespace

const char* policy_name(ArbiterPolicy p) {
  switch (p) {
    case ArbiterPolicy::PriorityFcfs: return "priority_fcfs";
    case ArbiterPolicy::RoundRobin: return "round_robin";
    case ArbiterPolicy::PlainPriority: return "plain_priority";
  }
  return "?";
}

ArbiterDesign build_arbiter(unsigned n, ArbiterPolicy policy) {
  if (n < 2 || n > 16)
    throw std::invalid_argument("arbiter requestor count must be 2..16");

  ArbiterDesign d;
  d.n = n;
  d.policy = policy;
  d.idx_bits = std::max(1u, ceil_log2(n));
  Netlist& net = d.net;
  net.design_name = "arbiter";
  net.params["n"] = std::to_string(n);
  net.params["policy"] = policy_name(policy);
  const unsigned ib = d.idx_bits;

  for (unsigned i = 0; i < n; ++i) {
    std::string s = std::to_string(i);
    d.in_req.push_back(net.add_input("in_req" + s, 1));
    d.in_dst.push_back(net.add_input("in_dst" + s, 4));
  }
  d.out_ack = net.add_input("out_ack", 1);

  for (unsigned i = 0; i < n; ++i)
    d.pending.push_back(net.add_register("pending" + std::to_string(i), 1, 0));
  for (unsigned i = 0; i < n; ++i) {
    std::string s = std::to_string(i);
    // One outstanding request per requestor: ack is simply "slot free".
    SigId ack = net.add_comb("in_ack" + s, net.Not(net.R(d.pending[i])));
    d.in_ack.push_back(ack);
    d.in_hsk.push_back(net.add_comb(
        "in_hsk" + s, net.And(net.R(d.in_req[i]), net.R(ack))));
  }

  std::vector<ExprId> pend;
  for (SigId p : d.pending) pend.push_back(net.R(p));
  d.out_vld = net.add_comb("out_vld", net.OrN(pend));
  d.out_hsk = net.add_comb("out_hsk",
                           net.And(net.R(d.out_vld), net.R(d.out_ack)));

  if (policy == ArbiterPolicy::PriorityFcfs) {
    d.older.assign(n, std::vector<SigId>(n, kNoSig));
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) {
        if (i == j) continue;
        d.older[i][j] = net.add_register(
            "older" + std::to_string(i) + "_" + std::to_string(j), 1, 0);
      }
  } else if (policy == ArbiterPolicy::RoundRobin) {
    d.rr_ptr = net.add_register("rr_ptr", ib, 0);
    bool pow2 = (n & (n - 1)) == 0;
    for (unsigned i = 0; i < n; ++i) {
      ExprId r;
      if (pow2) {
        r = net.Sub(net.C(ib, i), net.R(d.rr_ptr));
      } else {
        // Distance (i - ptr) mod n as a lookup, since the index space does
        // not wrap at a power of two.
        std::vector<ExprId> tab;
        for (unsigned p = 0; p < n; ++p)
          tab.push_back(net.C(ib, (i + n - p) % n));
        r = net.Select(net.R(d.rr_ptr), tab);
      }
      d.rel.push_back(net.add_comb("rel" + std::to_string(i), r));
    }
  }

  for (unsigned i = 0; i < n; ++i) {
    std::vector<ExprId> beats; // i loses unless every term holds
    for (unsigned j = 0; j < n; ++j) {
      if (j == i) continue;
      switch (policy) {
        case ArbiterPolicy::PriorityFcfs:
          beats.push_back(net.Or(net.Not(net.R(d.pending[j])),
                                 net.R(d.older[i][j])));
          break;
        case ArbiterPolicy::RoundRobin:
          beats.push_back(net.Not(net.And(
              net.R(d.pending[j]),
              net.Lt(net.R(d.rel[j]), net.R(d.rel[i])))));
          break;
        case ArbiterPolicy::PlainPriority:
          if (j < i) beats.push_back(net.Not(net.R(d.pending[j])));
          break;
      }
    }
    ExprId g = net.And(net.R(d.out_hsk),
                       net.And(net.R(d.pending[i]), net.AndN(beats)));
    d.grant.push_back(net.add_comb("grant" + std::to_string(i), g));
  }

  std::vector<ExprId> grants;
  for (SigId g : d.grant) grants.push_back(net.R(g));
  d.granted_any = net.add_comb("granted_any", net.OrN(grants));

  std::vector<ExprId> src_terms;
  for (unsigned i = 0; i < n; ++i)
    src_terms.push_back(net.Mux(net.R(d.grant[i]), net.C(ib, i), net.C(ib, 0)));
  d.out_src = net.add_comb("out_src", net.OrN(src_terms));
  std::vector<ExprId> dsts;
  for (SigId s : d.in_dst) dsts.push_back(net.R(s));
  d.out_dst = net.add_comb("out_dst", net.Select(net.R(d.out_src), dsts));

  for (unsigned i = 0; i < n; ++i)
    net.set_next(d.pending[i],
                 net.And(net.Or(net.R(d.pending[i]), net.R(d.in_hsk[i])),
                         net.Not(net.R(d.grant[i]))));

  if (policy == ArbiterPolicy::PriorityFcfs) {
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) {
        if (i == j) continue;
        // Refresh on either side's arrival; a same-cycle tie goes to the
        // lower index. Stale bits left by a granted requestor are harmless
        // because the matrix is only consulted for pending pairs, and any
        // re-arrival rewrites its row and column.
        ExprId tie = i < j ? net.R(d.in_hsk[i]) : net.C(1, 0);
        ExprId on_j = net.Or(net.R(d.pending[i]), tie);
        ExprId on_i = net.Not(net.R(d.pending[j]));
        net.set_next(d.older[i][j],
                     net.Mux(net.R(d.in_hsk[j]), on_j,
                             net.Mux(net.R(d.in_hsk[i]), on_i,
                                     net.R(d.older[i][j]))));
      }
  } else if (policy == ArbiterPolicy::RoundRobin) {
    std::vector<ExprId> succ;
    for (unsigned s = 0; s < n; ++s) succ.push_back(net.C(ib, (s + 1) % n));
    net.set_next(d.rr_ptr,
                 net.Mux(net.R(d.granted_any),
                         net.Select(net.R(d.out_src), succ),
                         net.R(d.rr_ptr)));
  }
  return d;
}

} // namespace wlmc
