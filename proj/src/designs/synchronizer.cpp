#include "wlmc/designs.hpp"

#include <stdexcept>
#include <string>

namespace wlmc {

namespace {

unsigned log2_exact(unsigned v, const char* what) {
  if (v < 2 || (v & (v - 1)) != 0)
    throw std::invalid_argument(std::string(what) + " must be a power of two >= 2");
  unsigned b = 0;
  while ((1u << b) < v) ++b;
  return b;
}

PropId add_bool_assume(Netlist& n, std::string name, ExprId a) {
  Property p;
  p.name = std::move(name);
  p.role = PropRole::Assume;
  p.shape = PropShape::Bool;
  p.a = a;
  return n.add_property(std::move(p));
}

// gray(x) = x ^ (x >> 1), built as xor with the top bit re-padded by zero.
ExprId gray_of(Netlist& n, ExprId x, unsigned w) {
  ExprId shr = n.ConcatE(n.C(1, 0), n.SliceE(x, w - 1, 1));
  return n.Xor(x, shr);
}

} // namespace

SyncDesign build_synchronizer(unsigned depth, unsigned width, unsigned ratio,
                              bool jitter) {
  if (width < 1 || width > 64)
    throw std::invalid_argument("synchronizer width must be 1..64");
  if (ratio == 0 || (ratio & (ratio - 1)) != 0 || ratio > 64)
    throw std::invalid_argument("synchronizer ratio must be a power of two <= 64");

  SyncDesign d;
  d.depth = depth;
  d.width = width;
  d.depth_bits = log2_exact(depth, "synchronizer depth");
  d.ratio = ratio;
  d.jitter = jitter;
  Netlist& n = d.net;
  n.design_name = "synchronizer";
  n.params["depth"] = std::to_string(depth);
  n.params["width"] = std::to_string(width);
  n.params["ratio"] = std::to_string(ratio);
  n.params["jitter"] = jitter ? "1" : "0";
  const unsigned pb = d.depth_bits + 1; // pointer width, extra wrap bit

  d.wdom = n.add_domain("wclk");
  d.rdom = n.add_domain("rclk");
  d.tick_w = n.add_input("tick_w", 1);
  d.tick_r = n.add_input("tick_r", 1);
  n.domains[d.wdom].tick = d.tick_w;
  n.domains[d.rdom].tick = d.tick_r;

  d.w.req = n.add_input("w_req", 1);
  d.w.ack = n.add_input("w_ack", 1);
  d.w.data = n.add_input("w_data", width);
  d.r.req = n.add_input("r_req", 1);
  d.r.ack = n.add_input("r_ack", 1);
  d.w.hsk = n.add_comb("w_hsk", n.And(n.R(d.w.req), n.R(d.w.ack)));
  d.r.hsk = n.add_comb("r_hsk", n.And(n.R(d.r.req), n.R(d.r.ack)));

  d.wptr = n.add_register("wptr", pb, 0, d.wdom);
  d.rptr = n.add_register("rptr", pb, 0, d.rdom);
  n.set_next(d.wptr, n.Mux(n.R(d.w.hsk), n.Add(n.R(d.wptr), n.C(pb, 1)),
                           n.R(d.wptr)));
  n.set_next(d.rptr, n.Mux(n.R(d.r.hsk), n.Add(n.R(d.rptr), n.C(pb, 1)),
                           n.R(d.rptr)));

  d.wgray = n.add_comb("wgray", gray_of(n, n.R(d.wptr), pb));
  d.rgray = n.add_comb("rgray", gray_of(n, n.R(d.rptr), pb));
  // One-superstep delays of the gray combs. They run in the free domain on
  // purpose: prev differs from the current gray only during the superstep
  // right after a pointer move, which is exactly the setup/hold race window
  // a destination flop can straddle.
  d.wgray_prev = n.add_register("wgray_prev", pb, 0);
  d.rgray_prev = n.add_register("rgray_prev", pb, 0);
  n.set_next(d.wgray_prev, n.R(d.wgray));
  n.set_next(d.rgray_prev, n.R(d.rgray));

  // First sampler stage. With jitter enabled each bit independently picks the
  // current or the previous gray value, so a sample taken while the source
  // moves can land on either side of the transition; gray encoding keeps any
  // per-bit mix of the two a valid neighbour of the true pointer.
  ExprId w_mix = n.R(d.wgray);
  ExprId r_mix = n.R(d.rgray);
  if (jitter) {
    std::vector<ExprId> wb, rb;
    for (unsigned i = 0; i < pb; ++i) {
      d.jit_w.push_back(n.add_input("jit_w" + std::to_string(i), 1));
      d.jit_r.push_back(n.add_input("jit_r" + std::to_string(i), 1));
      wb.push_back(n.Mux(n.R(d.jit_w[i]), n.SliceE(n.R(d.wgray_prev), i, i),
                         n.SliceE(n.R(d.wgray), i, i)));
      rb.push_back(n.Mux(n.R(d.jit_r[i]), n.SliceE(n.R(d.rgray_prev), i, i),
                         n.SliceE(n.R(d.rgray), i, i)));
    }
    for (unsigned i = 1; i < pb; ++i) {
      wb[0] = n.ConcatE(wb[i], wb[0]);
      rb[0] = n.ConcatE(rb[i], rb[0]);
    }
    w_mix = wb[0];
    r_mix = rb[0];
  }
  d.wgray_r1 = n.add_register("wgray_r1", pb, 0, d.rdom);
  d.wgray_r2 = n.add_register("wgray_r2", pb, 0, d.rdom);
  d.rgray_w1 = n.add_register("rgray_w1", pb, 0, d.wdom);
  d.rgray_w2 = n.add_register("rgray_w2", pb, 0, d.wdom);
  n.set_next(d.wgray_r1, w_mix);
  n.set_next(d.wgray_r2, n.R(d.wgray_r1));
  n.set_next(d.rgray_w1, r_mix);
  n.set_next(d.rgray_w2, n.R(d.rgray_w1));

  // Gray identity: wptr - rptr == depth iff the grays agree with the top two
  // bits inverted, so full/empty need no binary decode of the foreign pointer.
  ExprId flip = n.C(pb, 0x3ull << (pb - 2));
  d.full = n.add_comb("full", n.Eq(n.R(d.wgray), n.Xor(n.R(d.rgray_w2), flip)));
  d.empty = n.add_comb("empty", n.Eq(n.R(d.rgray), n.R(d.wgray_r2)));

  for (unsigned i = 0; i < depth; ++i)
    d.mem.push_back(n.add_register("mem" + std::to_string(i), width, 0, d.wdom));
  ExprId w_slot = n.SliceE(n.R(d.wptr), d.depth_bits - 1, 0);
  for (unsigned i = 0; i < depth; ++i) {
    SigId we = n.add_comb("wen" + std::to_string(i),
                          n.And(n.R(d.w.hsk), n.EqC(w_slot, i)));
    d.wen.push_back(we);
    n.set_next(d.mem[i], n.Mux(n.R(we), n.R(d.w.data), n.R(d.mem[i])));
  }

  std::vector<ExprId> slots;
  for (SigId m : d.mem) slots.push_back(n.R(m));
  d.rd_next = n.add_comb(
      "rd_next", n.Select(n.SliceE(n.R(d.rptr), d.depth_bits - 1, 0), slots));
  d.r.data = n.add_register("r_data", width, 0, d.rdom);
  n.set_next(d.r.data, n.Mux(n.R(d.r.hsk), n.R(d.rd_next), n.R(d.r.data)));

  // Clocking: the write domain ticks every superstep, the read domain once
  // per ratio supersteps, paced by a free-running phase counter. ratio == 1
  // degenerates to synchronous operation with both ticks pinned high.
  if (ratio == 1) {
    d.assume_tr = add_bool_assume(n, "env_tick_r", n.R(d.tick_r));
  } else {
    unsigned phw = 0;
    while ((1u << phw) < ratio) ++phw;
    d.phase = n.add_register("phase", phw, 0);
    n.set_next(d.phase, n.Add(n.R(d.phase), n.C(phw, 1)));
    d.assume_tr = add_bool_assume(
        n, "env_tick_r", n.Eq(n.R(d.tick_r), n.EqC(n.R(d.phase), ratio - 1)));
  }
  d.assume_tw = add_bool_assume(n, "env_tick_w", n.R(d.tick_w));

  d.assume_w = add_bool_assume(n, "env_no_write_when_full",
                               n.Not(n.And(n.R(d.w.ack), n.R(d.full))));
  d.assume_r = add_bool_assume(n, "env_no_read_when_empty",
                               n.Not(n.And(n.R(d.r.ack), n.R(d.empty))));
  return d;
}

} // namespace wlmc
