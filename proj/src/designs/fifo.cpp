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

} // namespace

FifoDesign build_fifo(unsigned depth, unsigned width, FifoVariant variant) {
  if (width < 1 || width > 64)
    throw std::invalid_argument("fifo width must be 1..64");

  FifoDesign d;
  d.depth = depth;
  d.width = width;
  d.depth_bits = log2_exact(depth, "fifo depth");
  d.variant = variant;
  Netlist& n = d.net;
  n.design_name = "fifo";
  n.params["depth"] = std::to_string(depth);
  n.params["width"] = std::to_string(width);
  n.params["variant"] =
      variant == FifoVariant::Baseline ? "baseline" : "low_power";
  const unsigned ob = d.depth_bits + 1; // occupancy width

  d.w.req = n.add_input("w_req", 1);
  d.w.ack = n.add_input("w_ack", 1);
  d.w.data = n.add_input("w_data", width);
  d.r.req = n.add_input("r_req", 1);
  d.r.ack = n.add_input("r_ack", 1);
  d.w.hsk = n.add_comb("w_hsk", n.And(n.R(d.w.req), n.R(d.w.ack)));
  d.r.hsk = n.add_comb("r_hsk", n.And(n.R(d.r.req), n.R(d.r.ack)));

  d.wptr = n.add_register("wptr", d.depth_bits, 0);
  d.rptr = n.add_register("rptr", d.depth_bits, 0);
  d.occupancy = n.add_register("occupancy", ob, 0);
  d.full = n.add_comb("full", n.EqC(n.R(d.occupancy), depth));
  d.empty = n.add_comb("empty", n.EqC(n.R(d.occupancy), 0));

  for (unsigned i = 0; i < depth; ++i)
    d.mem.push_back(n.add_register("mem" + std::to_string(i), width, 0));
  for (unsigned i = 0; i < depth; ++i) {
    SigId we = n.add_comb("wen" + std::to_string(i),
                          n.And(n.R(d.w.hsk), n.EqC(n.R(d.wptr), i)));
    d.wen.push_back(we);
    ExprId din = n.R(d.w.data);
    if (variant == FifoVariant::LowPowerGated) {
      // The gated variant zeroes the data lane of every slot it is not
      // writing; behavior is unchanged, the write path just grows per-slot
      // logic that mutations can target.
      SigId g = n.add_comb("wdata_g" + std::to_string(i),
                           n.Mux(n.R(we), din, n.C(width, 0)));
      din = n.R(g);
    }
    n.set_next(d.mem[i], n.Mux(n.R(we), din, n.R(d.mem[i])));
  }

  std::vector<ExprId> slots;
  for (SigId m : d.mem) slots.push_back(n.R(m));
  d.rd_next = n.add_comb("rd_next", n.Select(n.R(d.rptr), slots));
  d.r.data = n.add_register("r_data", width, 0);
  n.set_next(d.r.data, n.Mux(n.R(d.r.hsk), n.R(d.rd_next), n.R(d.r.data)));

  n.set_next(d.wptr, n.Mux(n.R(d.w.hsk),
                           n.Add(n.R(d.wptr), n.C(d.depth_bits, 1)),
                           n.R(d.wptr)));
  n.set_next(d.rptr, n.Mux(n.R(d.r.hsk),
                           n.Add(n.R(d.rptr), n.C(d.depth_bits, 1)),
                           n.R(d.rptr)));
  n.set_next(d.occupancy,
             n.Sub(n.Add(n.R(d.occupancy), n.ZExt(n.R(d.w.hsk), ob)),
                   n.ZExt(n.R(d.r.hsk), ob)));

  // Environment rules: the testbench drives ack lines freely, but never
  // completes a write into a full buffer or a read from an empty one.
  d.assume_w = add_bool_assume(n, "env_no_write_when_full",
                               n.Not(n.And(n.R(d.w.ack), n.R(d.full))));
  d.assume_r = add_bool_assume(n, "env_no_read_when_empty",
                               n.Not(n.And(n.R(d.r.ack), n.R(d.empty))));
  return d;
}

} // namespace wlmc
