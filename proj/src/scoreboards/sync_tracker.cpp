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

ExprId gray_of(Netlist& n, ExprId x, unsigned w) {
  ExprId shr = n.ConcatE(n.C(1, 0), n.SliceE(x, w - 1, 1));
  return n.Xor(x, shr);
}

// Decode a gray-coded image back to binary with a lookup table; the images
// are only pointer-wide, so the table stays small.
ExprId ungray(Netlist& n, ExprId g, unsigned w) {
  std::vector<ExprId> tab;
  for (std::uint64_t v = 0; v < (1ull << w); ++v) {
    std::uint64_t b = v;
    for (unsigned s = 1; s < w; s <<= 1) b ^= b >> s;
    tab.push_back(n.C(w, b));
  }
  return n.Select(g, tab);
}

} // namespace

SyncTracker attach_sync_tracker(SyncDesign& d) {
  if (d.read_latency != 1)
    throw std::invalid_argument("sync tracker expects read latency 1");
  Netlist& n = d.net;
  const unsigned pb = d.depth_bits + 1;

  SyncTracker t;
  t.refs.d = n.add_frozen("d", d.width);
  t.arbit_window = n.add_input("arbit_window", 1);
  t.refs.sampled_in = n.add_register("sampled_in", 1, 0, d.wdom);
  t.sampled_out = n.add_register("sampled_out", 1, 0, d.rdom);
  t.refs.exited = t.sampled_out;

  // Each side counts its own handshakes in its own clock, so nothing in the
  // tracker crosses a domain; the tracking counter is just the difference of
  // the two counts and freezes once both flags are up.
  t.w_count = n.add_register("w_count", pb, 0, d.wdom);
  t.r_count = n.add_register("r_count", pb, 0, d.rdom);
  SigId incr = n.add_comb(
      "incr", n.And(n.R(d.w.hsk), n.Not(n.R(t.refs.sampled_in))));
  SigId decr =
      n.add_comb("decr", n.And(n.R(d.r.hsk), n.Not(n.R(t.sampled_out))));
  n.set_next(t.w_count, n.Add(n.R(t.w_count), n.ZExt(n.R(incr), pb)));
  n.set_next(t.r_count, n.Add(n.R(t.r_count), n.ZExt(n.R(decr), pb)));
  t.tc_c = n.add_comb("tracking_counter",
                      n.Sub(n.R(t.w_count), n.R(t.r_count)));
  t.refs.tc = t.tc_c;

  n.set_next(t.refs.sampled_in,
             n.Or(n.R(t.refs.sampled_in),
                  n.AndN({n.Eq(n.R(d.w.data), n.R(t.refs.d)), n.R(incr),
                          n.R(t.arbit_window)})));
  t.must_read = n.add_comb(
      "must_read", n.AndN({n.EqC(n.R(t.tc_c), 1), n.R(t.refs.sampled_in),
                           n.R(decr)}));
  n.set_next(t.sampled_out, n.Or(n.R(t.sampled_out), n.R(t.must_read)));

  // Pointer images decoded back to binary, and every distance measured from
  // the oldest image so the chain below has a single anchor.
  ExprId u1 = ungray(n, n.R(d.rgray_w1), pb);
  ExprId u2 = ungray(n, n.R(d.rgray_w2), pb);
  ExprId v1 = ungray(n, n.R(d.wgray_r1), pb);
  ExprId v2 = ungray(n, n.R(d.wgray_r2), pb);
  auto dist = [&](ExprId x) { return n.Sub(x, u2); };
  ExprId dW = dist(n.R(d.wptr));
  ExprId dR = dist(n.R(d.rptr));
  ExprId du1 = dist(u1);
  ExprId dv1 = dist(v1);
  ExprId dv2 = dist(v2);

  // A sampler showing the current gray word means the source did not move
  // last superstep, so the race option is gone. Without this fact a stale
  // re-grab could step an image backwards and unhinge the chain anchor.
  ExprId settle_w = n.Or(n.Neq(n.R(d.wgray_r1), n.R(d.wgray)),
                         n.Eq(n.R(d.wgray_prev), n.R(d.wgray)));
  ExprId settle_r = n.Or(n.Neq(n.R(d.rgray_w1), n.R(d.rgray)),
                         n.Eq(n.R(d.rgray_prev), n.R(d.rgray)));

  t.inv_gray_w = add_prop(
      n, "inv_gray_w", PropRole::Assert, PropShape::Bool,
      n.Or(n.Eq(n.R(d.wgray_prev), n.R(d.wgray)),
           n.Eq(n.R(d.wgray_prev),
                gray_of(n, n.Sub(n.R(d.wptr), n.C(pb, 1)), pb))));
  t.inv_gray_r = add_prop(
      n, "inv_gray_r", PropRole::Assert, PropShape::Bool,
      n.Or(n.Eq(n.R(d.rgray_prev), n.R(d.rgray)),
           n.Eq(n.R(d.rgray_prev),
                gray_of(n, n.Sub(n.R(d.rptr), n.C(pb, 1)), pb))));

  // The whole crossing in one anchored chain: each image lags the pointer it
  // samples, the read side never overtakes the write image, and the span
  // from the oldest read image to the write pointer fits in the buffer.
  t.inv_occ = add_prop(
      n, "inv_occ", PropRole::Assert, PropShape::Bool,
      n.AndN({n.Geq(dR, du1), n.Geq(dv2, dR), n.Geq(dv1, dv2), n.Geq(dW, dv1),
              n.Geq(n.C(pb, d.depth), dW), settle_w, settle_r}));
  t.inv_west = add_prop(
      n, "inv_west", PropRole::Assert, PropShape::Bool,
      n.AndN({n.Geq(dv2, dR), n.Geq(dv1, dv2), n.Geq(dW, dv1)}));
  t.inv_rest =
      add_prop(n, "inv_rest", PropRole::Assert, PropShape::Bool,
               n.And(n.Geq(dR, du1), n.Geq(n.C(pb, d.depth), dR)));

  ExprId si = n.R(t.refs.sampled_in);
  ExprId so = n.R(t.sampled_out);
  ExprId inside = n.And(si, n.Not(so));
  ExprId tc = n.R(t.tc_c);
  ExprId occ = n.add_comb("occupancy", n.Sub(n.R(d.wptr), n.R(d.rptr)));

  t.inv_count = add_prop(n, "inv_count", PropRole::Assert, PropShape::Bool,
                         n.And(n.Or(si, n.Eq(n.R(t.w_count), n.R(d.wptr))),
                               n.Or(so, n.Eq(n.R(t.r_count), n.R(d.rptr)))));
  t.inv_not_entered = add_prop(n, "inv_not_entered", PropRole::Assert,
                               PropShape::ImplSame, n.Not(si), n.Not(so));
  t.inv_between =
      add_prop(n, "inv_between", PropRole::Assert, PropShape::ImplSame, inside,
               n.And(n.Geq(tc, n.C(pb, 1)), n.Geq(n.R(occ), tc)));

  // The watched word sits tc - 1 slots past the read pointer.
  ExprId idx = n.SliceE(n.Add(n.R(d.rptr), n.Sub(tc, n.C(pb, 1))),
                        d.depth_bits - 1, 0);
  std::vector<ExprId> slots;
  for (SigId m : d.mem) slots.push_back(n.R(m));
  t.inv_positional =
      add_prop(n, "inv_positional", PropRole::Assert, PropShape::ImplSame,
               inside, n.Eq(n.Select(idx, slots), n.R(t.refs.d)));
  t.inv_head = add_prop(n, "inv_head", PropRole::Assert, PropShape::ImplSame,
                        n.And(inside, n.EqC(tc, 1)),
                        n.Eq(n.R(d.rd_next), n.R(t.refs.d)));

  {
    Property p;
    p.name = "master";
    p.role = PropRole::Assert;
    p.shape = PropShape::ImplNext;
    p.domain = d.rdom;
    p.a = n.R(t.must_read);
    p.b = n.Eq(n.R(d.r.data), n.R(t.refs.d));
    p.stable = {t.refs.d};
    t.master = n.add_property(std::move(p));
  }
  {
    Property p;
    p.name = "live_sampled_out";
    p.role = PropRole::Assert;
    p.shape = PropShape::Eventually;
    p.a = si;
    p.b = so;
    p.fairness = {n.And(n.R(d.tick_r), n.R(d.r.hsk))};
    p.hint = RankHint{n.R(t.tc_c), t.refs.sampled_in, t.sampled_out};
    t.live = n.add_property(std::move(p));
  }

  t.cover_sampled_in = add_prop(n, "cover_sampled_in", PropRole::Cover,
                                PropShape::Bool, si);
  t.cover_sampled_out = add_prop(n, "cover_sampled_out", PropRole::Cover,
                                 PropShape::Bool, so);
  return t;
}

std::vector<PlanStep> sync_tracker_plan(const SyncDesign& d,
                                        const SyncTracker& t) {
  std::vector<PlanStep> s;
  auto ind = [&](const char* name, PropId p, std::vector<PropId> lemmas,
                 std::vector<SigId> cuts = {}, int k = 2) {
    PlanStep st;
    st.name = name;
    st.prop = p;
    st.method = Method::KInduction;
    st.lemmas = std::move(lemmas);
    st.cuts = std::move(cuts);
    st.k = k;
    s.push_back(std::move(st));
  };
  ind("gray_w", t.inv_gray_w, {});
  ind("gray_r", t.inv_gray_r, {});
  ind("occ", t.inv_occ, {t.inv_gray_w, t.inv_gray_r});
  ind("west", t.inv_west, {t.inv_occ});
  ind("rest", t.inv_rest, {t.inv_occ});
  ind("not_entered", t.inv_not_entered, {});
  ind("count", t.inv_count, {});
  ind("between", t.inv_between,
      {t.inv_not_entered, t.inv_count, t.inv_occ});
  ind("positional", t.inv_positional,
      {t.inv_count, t.inv_between, t.inv_occ});
  ind("head", t.inv_head, {t.inv_positional});
  // With the head fact as a lemma the read port can be cut away, so the
  // master proof stops depending on the buffer size. The induction window
  // still has to span one full read period, because the next-tick obligation
  // set at one read edge is only checked ratio supersteps later.
  ind("master", t.master, {t.inv_head}, {d.rd_next},
      static_cast<int>(d.ratio) + 2);

  {
    PlanStep st;
    st.name = "live_sampled_out";
    st.prop = t.live;
    st.method = Method::Liveness;
    st.lemmas = {t.inv_not_entered, t.inv_count, t.inv_between, t.inv_occ};
    st.k = 24 + 4 * static_cast<int>(d.ratio);
    s.push_back(std::move(st));
  }

  auto cover = [&](const char* name, PropId p, int k) {
    PlanStep st;
    st.name = name;
    st.prop = p;
    st.method = Method::Cover;
    st.k = k;
    st.budget.max_seconds = 60;
    s.push_back(std::move(st));
  };
  cover("cover_sampled_in", t.cover_sampled_in, 8);
  cover("cover_sampled_out", t.cover_sampled_out,
        4 * static_cast<int>(d.ratio) + 10);
  return s;
}

} // namespace wlmc
