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

PacketDesign build_packet_pipe(unsigned depth, unsigned width,
                               unsigned shrink_len) {
  if (width < 3 || width > 64)
    throw std::invalid_argument("packet width must be 3..64 (3-bit header)");
  if (shrink_len < 2 || shrink_len > 8 || shrink_len > width)
    throw std::invalid_argument("shrink vector must be 2..8 bits and fit the width");

  PacketDesign d;
  d.depth = depth;
  d.width = width;
  d.shrink_len = shrink_len;
  d.depth_bits = log2_exact(depth, "packet pipe depth");
  Netlist& n = d.net;
  n.design_name = "packet_pipe";
  n.params["depth"] = std::to_string(depth);
  n.params["width"] = std::to_string(width);
  n.params["shrink_len"] = std::to_string(shrink_len);
  const unsigned ob = d.depth_bits + 1;

  d.w.req = n.add_input("w_req", 1);
  d.w.ack = n.add_input("w_ack", 1);
  d.w.data = n.add_input("w_data", width);
  d.r.req = n.add_input("r_req", 1);
  d.r.ack = n.add_input("r_ack", 1);
  d.drop = n.add_input("drop", 1);
  d.elasticate = n.add_input("elasticate", 1);
  d.w.hsk = n.add_comb("w_hsk", n.And(n.R(d.w.req), n.R(d.w.ack)));
  d.r.hsk = n.add_comb("r_hsk", n.And(n.R(d.r.req), n.R(d.r.ack)));
  // A drop consumes the head without a read handshake, so either event moves
  // the read pointer.
  SigId consume = n.add_comb("consume", n.Or(n.R(d.r.hsk), n.R(d.drop)));

  d.wptr = n.add_register("wptr", d.depth_bits, 0);
  d.rptr = n.add_register("rptr", d.depth_bits, 0);
  d.in_flight = n.add_register("in_flight", ob, 0);
  d.full = n.add_comb("full", n.EqC(n.R(d.in_flight), depth));
  d.empty = n.add_comb("empty", n.EqC(n.R(d.in_flight), 0));

  for (unsigned i = 0; i < depth; ++i)
    d.mem.push_back(n.add_register("mem" + std::to_string(i), width, 0));
  for (unsigned i = 0; i < depth; ++i) {
    SigId we = n.add_comb("wen" + std::to_string(i),
                          n.And(n.R(d.w.hsk), n.EqC(n.R(d.wptr), i)));
    d.wen.push_back(we);
    n.set_next(d.mem[i], n.Mux(n.R(we), n.R(d.w.data), n.R(d.mem[i])));
  }

  std::vector<ExprId> slots;
  for (SigId m : d.mem) slots.push_back(n.R(m));
  d.rd_next = n.add_comb("rd_next", n.Select(n.R(d.rptr), slots));
  d.r.data = n.add_register("r_data", width, 0);
  n.set_next(d.r.data, n.Mux(n.R(d.r.hsk), n.R(d.rd_next), n.R(d.r.data)));

  n.set_next(d.wptr, n.Mux(n.R(d.w.hsk),
                           n.Add(n.R(d.wptr), n.C(d.depth_bits, 1)),
                           n.R(d.wptr)));
  n.set_next(d.rptr, n.Mux(n.R(consume),
                           n.Add(n.R(d.rptr), n.C(d.depth_bits, 1)),
                           n.R(d.rptr)));
  n.set_next(d.in_flight,
             n.Sub(n.Add(n.R(d.in_flight), n.ZExt(n.R(d.w.hsk), ob)),
                   n.ZExt(n.R(consume), ob)));

  // Shrink snapshot: past half full with elasticate raised, the mask re-arms
  // from the head packet's 3-bit header as a thermometer, bit i = header >= i.
  d.head_header = n.add_comb("head_header", n.SliceE(n.R(d.rd_next), 2, 0));
  SigId shrink = n.add_comb(
      "shrink", n.And(n.Lt(n.C(ob, depth / 2), n.R(d.in_flight)),
                      n.R(d.elasticate)));
  d.internal_mask =
      n.add_register("internal_mask", shrink_len, mask_width(shrink_len));
  ExprId mask_next = kNoExpr;
  for (unsigned i = 0; i < shrink_len; ++i) {
    ExprId bit = n.Mux(n.R(shrink), n.Geq(n.R(d.head_header), n.C(3, i)),
                       n.SliceE(n.R(d.internal_mask), i, i));
    mask_next = i == 0 ? bit : n.ConcatE(bit, mask_next);
  }
  n.set_next(d.internal_mask, mask_next);
  d.mask_o = n.add_comb("mask_o", n.R(d.internal_mask));

  d.assume_w = add_bool_assume(n, "env_no_write_when_full",
                               n.Not(n.And(n.R(d.w.ack), n.R(d.full))));
  d.assume_r = add_bool_assume(n, "env_no_read_when_empty",
                               n.Not(n.And(n.R(d.r.ack), n.R(d.empty))));
  // A drop needs a head to remove and cannot race a read for it.
  d.assume_drop = add_bool_assume(
      n, "env_no_drop_when_empty_or_reading",
      n.Not(n.And(n.R(d.drop), n.Or(n.R(d.empty), n.R(d.r.hsk)))));
  return d;
}

} // namespace wlmc
