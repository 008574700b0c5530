#include "wlmc/scoreboards.hpp"

#include <stdexcept>
#include <utility>

namespace wlmc {

namespace {

PropId add_prop(Netlist& n, std::string name, PropRole role, PropShape shape,
                ExprId a, ExprId b = kNoExpr) {
  Property p;
  p.name = std::move(name);
  p.role = role;
  p.shape = shape;
  p.a = a;
  p.b = b;
  return n.add_property(std::move(p));
}

// 2^(v+1) - 1 in data width, saturating to all ones once v + 1 covers it.
ExprId stretch_table(Netlist& n, ExprId sel, unsigned sel_width,
                     unsigned width) {
  std::vector<ExprId> tab;
  for (std::uint64_t v = 0; v < (1ull << sel_width); ++v) {
    std::uint64_t m =
        v + 1 >= width ? mask_width(width) : (1ull << (v + 1)) - 1;
    tab.push_back(n.C(width, m));
  }
  return n.Select(sel, tab);
}

} // namespace

PacketTracker attach_packet_tracker(PacketDesign& d) {
  if (d.read_latency != 1)
    throw std::invalid_argument("packet tracker expects read latency 1");
  Netlist& n = d.net;
  const unsigned ob = d.depth_bits + 1;

  PacketTracker t;
  t.refs.d = n.add_frozen("d", d.width);
  t.arbit_window = n.add_input("arbit_window", 1);
  t.refs.sampled_in = n.add_register("sampled_in", 1, 0);
  t.sampled_out = n.add_register("sampled_out", 1, 0);
  t.watched_dropped = n.add_register("watched_dropped", 1, 0);
  // Either way the watched word is gone; only a read exit sets sampled_out.
  SigId gone = n.add_comb("gone",
                          n.Or(n.R(t.sampled_out), n.R(t.watched_dropped)));
  t.refs.exited = gone;
  t.refs.tc = n.add_register("tracking_counter", ob, 0);

  ExprId si = n.R(t.refs.sampled_in);
  ExprId tc = n.R(t.refs.tc);
  t.incr = n.add_comb("incr", n.And(n.R(d.w.hsk), n.Not(si)));
  // Reads and drops both move the head past the counter. The freeze on
  // watched_dropped keeps a dropped watched word from decrementing forever
  // and wrapping the counter back into ready_to_sample_out territory.
  t.decr = n.add_comb("decr", n.And(n.Or(n.R(d.r.hsk), n.R(d.drop)),
                                    n.Not(n.R(gone))));
  n.set_next(t.refs.sampled_in,
             n.Or(si, n.AndN({n.Eq(n.R(d.w.data), n.R(t.refs.d)),
                              n.R(t.incr), n.R(t.arbit_window)})));
  n.set_next(t.refs.tc, n.Sub(n.Add(tc, n.ZExt(n.R(t.incr), ob)),
                              n.ZExt(n.R(t.decr), ob)));

  ExprId head_leaves = n.AndN({n.EqC(tc, 1), si, n.R(t.decr)});
  t.ready_to_sample_out = n.add_comb(
      "ready_to_sample_out", n.And(head_leaves, n.Not(n.R(d.drop))));
  n.set_next(t.sampled_out,
             n.Or(n.R(t.sampled_out), n.R(t.ready_to_sample_out)));
  n.set_next(t.watched_dropped,
             n.Or(n.R(t.watched_dropped), n.And(head_leaves, n.R(d.drop))));

  // Mirror of the design's shrink mask, rebuilt from the same snapshot rule.
  ExprId rearm = n.And(n.Lt(n.C(ob, d.depth / 2), n.R(d.in_flight)),
                       n.R(d.elasticate));
  t.mask_mirror =
      n.add_register("mask_mirror", d.shrink_len, mask_width(d.shrink_len));
  ExprId mirror_next = kNoExpr;
  for (unsigned i = 0; i < d.shrink_len; ++i) {
    ExprId bit = n.Mux(rearm, n.Geq(n.R(d.head_header), n.C(3, i)),
                       n.SliceE(n.R(t.mask_mirror), i, i));
    mirror_next = i == 0 ? bit : n.ConcatE(bit, mirror_next);
  }
  n.set_next(t.mask_mirror, mirror_next);
  t.output_mask = n.add_comb(
      "output_mask", stretch_table(n, n.R(t.mask_mirror), d.shrink_len,
                                   d.width));
  t.output_mask_str = n.add_comb(
      "output_mask_stretched", stretch_table(n, n.R(d.mask_o), d.shrink_len,
                                             d.width));

  ExprId inside = n.And(si, n.Not(n.R(gone)));
  ExprId occ = n.R(d.in_flight);
  t.inv.not_entered = add_prop(n, "inv_not_entered", PropRole::Assert,
                               PropShape::ImplSame, n.Not(si),
                               n.Not(n.R(gone)));
  t.inv.count_agree = add_prop(n, "inv_count_agree", PropRole::Assert,
                               PropShape::ImplSame, n.Not(si), n.Eq(occ, tc));
  t.inv.between_pointers =
      add_prop(n, "inv_between_pointers", PropRole::Assert, PropShape::ImplSame,
               inside, n.And(n.Geq(tc, n.C(ob, 1)), n.Geq(occ, tc)));
  ExprId idx = n.Add(n.R(d.rptr),
                     n.SliceE(n.Sub(tc, n.C(ob, 1)), d.depth_bits - 1, 0));
  std::vector<ExprId> slots;
  for (SigId m : d.mem) slots.push_back(n.R(m));
  t.inv.positional =
      add_prop(n, "inv_positional", PropRole::Assert, PropShape::ImplSame,
               inside, n.Eq(n.Select(idx, slots), n.R(t.refs.d)));
  t.inv.ptr_agree =
      add_prop(n, "inv_ptr_agree", PropRole::Assert, PropShape::Bool,
               n.Eq(n.Sub(n.R(d.wptr), n.R(d.rptr)),
                    n.SliceE(occ, d.depth_bits - 1, 0)));
  t.inv.occ_bound = add_prop(n, "inv_occ_bound", PropRole::Assert,
                             PropShape::Bool, n.Geq(n.C(ob, d.depth), occ));
  t.inv.head = add_prop(n, "inv_head", PropRole::Assert, PropShape::ImplSame,
                        n.And(inside, n.EqC(tc, 1)),
                        n.Eq(n.R(d.rd_next), n.R(t.refs.d)));
  t.inv_mask = add_prop(n, "inv_mask_mirror", PropRole::Assert, PropShape::Bool,
                        n.Eq(n.R(t.mask_mirror), n.R(d.internal_mask)));

  // The exit read lands a possibly shrunk packet: only the masked fraction
  // has to match, each side stretched by its own mask source.
  {
    Property p;
    p.name = "master";
    p.role = PropRole::Assert;
    p.shape = PropShape::ImplNext;
    p.a = n.R(t.ready_to_sample_out);
    p.b = n.Eq(n.And(n.R(d.r.data), n.R(t.output_mask_str)),
               n.And(n.R(t.refs.d), n.R(t.output_mask)));
    p.stable = {t.refs.d};
    t.master = n.add_property(std::move(p));
  }

  t.cover_sampled_in = add_prop(n, "cover_sampled_in", PropRole::Cover,
                                PropShape::Bool, si);
  t.cover_out = add_prop(n, "cover_ready_to_sample_out", PropRole::Cover,
                         PropShape::Bool, n.R(t.ready_to_sample_out));
  t.cover_shrunk =
      add_prop(n, "cover_mask_shrunk", PropRole::Cover, PropShape::Bool,
               n.Neq(n.R(d.internal_mask),
                     n.C(d.shrink_len, mask_width(d.shrink_len))));
  return t;
}

std::vector<PlanStep> packet_tracker_plan(const PacketDesign& d,
                                          const PacketTracker& t) {
  std::vector<PlanStep> s;
  auto ind = [&](const char* name, PropId p, std::vector<PropId> lemmas,
                 std::vector<SigId> cuts = {}) {
    PlanStep st;
    st.name = name;
    st.prop = p;
    st.method = Method::KInduction;
    st.lemmas = std::move(lemmas);
    st.cuts = std::move(cuts);
    st.k = 2;
    s.push_back(std::move(st));
  };
  ind("occ_bound", t.inv.occ_bound, {});
  ind("ptr_agree", t.inv.ptr_agree, {});
  ind("not_entered", t.inv.not_entered, {});
  ind("count_agree", t.inv.count_agree, {t.inv.not_entered});
  ind("between_pointers", t.inv.between_pointers,
      {t.inv.not_entered, t.inv.count_agree, t.inv.occ_bound});
  ind("positional", t.inv.positional,
      {t.inv.not_entered, t.inv.count_agree, t.inv.between_pointers,
       t.inv.ptr_agree, t.inv.occ_bound});
  ind("head", t.inv.head, {t.inv.positional, t.inv.between_pointers});
  ind("mask_mirror", t.inv_mask, {});
  // Head fact plus the mask mirror let the read port be cut away, so the
  // masked compare no longer depends on the buffer size.
  ind("master", t.master, {t.inv.head, t.inv_mask}, {d.rd_next});

  auto cover = [&](const char* name, PropId p, int k) {
    PlanStep st;
    st.name = name;
    st.prop = p;
    st.method = Method::Cover;
    st.k = k;
    st.budget.max_seconds = 60;
    s.push_back(std::move(st));
  };
  cover("cover_sampled_in", t.cover_sampled_in, 4);
  cover("cover_ready_to_sample_out", t.cover_out, 8);
  cover("cover_mask_shrunk", t.cover_shrunk,
        static_cast<int>(d.depth) / 2 + 4);
  return s;
}

} // namespace wlmc
