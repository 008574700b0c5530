#pragma once

#include <random>
#include <vector>

#include "wlmc/ir.hpp"

// Random word-level netlists for differential tests: every generated net
// passes validate(), and every signal keeps width <= 8 so packed-state
// tooling stays cheap.

namespace wlmc::testutil {

struct RandomNetOptions {
  unsigned n_inputs = 3;
  unsigned n_regs = 4;
  unsigned n_nodes = 40;
  unsigned max_width = 6;
  bool gated_domain = false; // add a ticked domain holding half the registers
};

inline ExprId adapt(Netlist& n, ExprId e, unsigned w) {
  unsigned have = n.width_of(e);
  if (have == w) return e;
  if (have > w) return n.SliceE(e, w - 1, 0);
  return n.ZExt(e, w);
}

inline Netlist random_netlist(std::mt19937_64& rng, RandomNetOptions opt = {}) {
  Netlist n;
  n.design_name = "random";
  auto pick_width = [&] { return 1u + static_cast<unsigned>(rng() % opt.max_width); };

  DomainId gated = kDomainFree;
  if (opt.gated_domain) {
    gated = n.add_domain("gated");
    n.domains[gated].tick = n.add_input("tick_gated", 1);
  }

  std::vector<SigId> inputs, regs;
  for (unsigned i = 0; i < opt.n_inputs; ++i)
    inputs.push_back(n.add_input("in" + std::to_string(i), pick_width()));
  for (unsigned i = 0; i < opt.n_regs; ++i) {
    unsigned w = pick_width();
    DomainId d = (opt.gated_domain && i % 2) ? gated : kDomainFree;
    regs.push_back(n.add_register("r" + std::to_string(i), w,
                                  rng() & mask_width(w), d));
  }

  std::vector<ExprId> pool;
  for (SigId s : inputs) pool.push_back(n.R(s));
  for (SigId s : regs) pool.push_back(n.R(s));
  pool.push_back(n.C(1, 1));
  pool.push_back(n.C(3, 5));

  auto any = [&] { return pool[rng() % pool.size()]; };
  unsigned comb_count = 0;
  for (unsigned i = 0; i < opt.n_nodes; ++i) {
    ExprId a = any();
    unsigned w = n.width_of(a);
    ExprId b = adapt(n, any(), w);
    ExprId e;
    switch (rng() % 14) {
      case 0: e = n.Not(a); break;
      case 1: e = n.And(a, b); break;
      case 2: e = n.Or(a, b); break;
      case 3: e = n.Xor(a, b); break;
      case 4: e = n.Add(a, b); break;
      case 5: e = n.Sub(a, b); break;
      case 6: e = n.Eq(a, b); break;
      case 7: e = n.Lt(a, b); break;
      case 8: e = n.Mux(adapt(n, any(), 1), a, b); break;
      case 9: {
        ExprId c = any();
        if (w + n.width_of(c) > 16) e = n.Neq(a, b);
        else e = n.ConcatE(a, c);
        break;
      }
      case 10: {
        unsigned hi = static_cast<unsigned>(rng() % w);
        unsigned lo = static_cast<unsigned>(rng() % (hi + 1));
        e = n.SliceE(a, hi, lo);
        break;
      }
      case 11: e = n.CountOnes(a); break;
      case 12: e = n.ReduceOrE(a); break;
      default: {
        // Route through a named comb signal so Ref(comb) shows up in cones.
        SigId c = n.add_comb("c" + std::to_string(comb_count++), n.Geq(a, b));
        e = n.R(c);
        break;
      }
    }
    pool.push_back(e);
  }

  for (SigId r : regs) n.set_next(r, adapt(n, any(), n.sigs[r].width));
  return n;
}

inline Valuation random_inputs(std::mt19937_64& rng, const Netlist& n) {
  Valuation v(n.sigs.size(), 0);
  for (SigId s = 0; s < n.sigs.size(); ++s)
    if (n.sigs[s].kind == SigKind::Input)
      v[s] = rng() & mask_width(n.sigs[s].width);
  return v;
}

} // namespace wlmc::testutil
