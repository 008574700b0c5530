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

} // namespace

FifoInvariants fifo_invariants(FifoDesign& d, const TrackerRefs& t) {
  Netlist& n = d.net;
  const unsigned ob = d.depth_bits + 1;
  ExprId si = n.R(t.sampled_in);
  ExprId inside = n.And(si, n.Not(n.R(t.exited)));
  ExprId tc = n.R(t.tc);
  ExprId occ = n.R(d.occupancy);

  FifoInvariants inv;
  inv.not_entered = add_prop(n, "inv_not_entered", PropRole::Assert,
                             PropShape::ImplSame, n.Not(si),
                             n.Not(n.R(t.exited)));
  inv.count_agree = add_prop(n, "inv_count_agree", PropRole::Assert,
                             PropShape::ImplSame, n.Not(si), n.Eq(occ, tc));
  inv.between_pointers =
      add_prop(n, "inv_between_pointers", PropRole::Assert, PropShape::ImplSame,
               inside, n.And(n.Geq(tc, n.C(ob, 1)), n.Geq(occ, tc)));

  // The watched word sits tc - 1 slots past the read pointer.
  ExprId idx = n.Add(n.R(d.rptr),
                     n.SliceE(n.Sub(tc, n.C(ob, 1)), d.depth_bits - 1, 0));
  std::vector<ExprId> slots;
  for (SigId m : d.mem) slots.push_back(n.R(m));
  inv.positional =
      add_prop(n, "inv_positional", PropRole::Assert, PropShape::ImplSame,
               inside, n.Eq(n.Select(idx, slots), n.R(t.d)));

  inv.ptr_agree = add_prop(n, "inv_ptr_agree", PropRole::Assert, PropShape::Bool,
                           n.Eq(n.Sub(n.R(d.wptr), n.R(d.rptr)),
                                n.SliceE(occ, d.depth_bits - 1, 0)));
  inv.occ_bound = add_prop(n, "inv_occ_bound", PropRole::Assert, PropShape::Bool,
                           n.Geq(n.C(ob, d.depth), occ));
  inv.head = add_prop(n, "inv_head", PropRole::Assert, PropShape::ImplSame,
                      n.And(inside, n.EqC(tc, 1)),
                      n.Eq(n.R(d.rd_next), n.R(t.d)));
  return inv;
}

SmartTracker attach_smart_tracker(FifoDesign& d) {
  if (d.read_latency != 1)
    throw std::invalid_argument("smart tracker expects read latency 1");
  Netlist& n = d.net;
  const unsigned ob = d.depth_bits + 1;

  SmartTracker t;
  t.refs.d = n.add_frozen("d", d.width);
  t.arbit_window = n.add_input("arbit_window", 1);
  t.refs.sampled_in = n.add_register("sampled_in", 1, 0);
  t.sampled_out = n.add_register("sampled_out", 1, 0);
  t.refs.exited = t.sampled_out;
  t.refs.tc = n.add_register("tracking_counter", ob, 0);

  // Count every write until the watched word is sampled, every read until it
  // leaves; the counter is then the watched word's distance from the head.
  t.incr = n.add_comb("incr",
                      n.And(n.R(d.w.hsk), n.Not(n.R(t.refs.sampled_in))));
  t.decr = n.add_comb("decr", n.And(n.R(d.r.hsk), n.Not(n.R(t.sampled_out))));
  n.set_next(t.refs.sampled_in,
             n.Or(n.R(t.refs.sampled_in),
                  n.AndN({n.Eq(n.R(d.w.data), n.R(t.refs.d)), n.R(t.incr),
                          n.R(t.arbit_window)})));
  n.set_next(t.refs.tc,
             n.Sub(n.Add(n.R(t.refs.tc), n.ZExt(n.R(t.incr), ob)),
                   n.ZExt(n.R(t.decr), ob)));
  t.must_read = n.add_comb(
      "must_read", n.AndN({n.EqC(n.R(t.refs.tc), 1), n.R(t.refs.sampled_in),
                           n.R(t.decr)}));
  n.set_next(t.sampled_out, n.Or(n.R(t.sampled_out), n.R(t.must_read)));

  t.inv = fifo_invariants(d, t.refs);

  {
    Property p;
    p.name = "master";
    p.role = PropRole::Assert;
    p.shape = PropShape::ImplNext;
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
    p.a = n.R(t.refs.sampled_in);
    p.b = n.R(t.sampled_out);
    p.fairness = {n.R(d.r.hsk)};
    p.hint = RankHint{n.R(t.refs.tc), t.refs.sampled_in, t.sampled_out};
    t.live = n.add_property(std::move(p));
  }

  t.cover_sampled_in = add_prop(n, "cover_sampled_in", PropRole::Cover,
                                PropShape::Bool, n.R(t.refs.sampled_in));
  t.cover_full = add_prop(n, "cover_full", PropRole::Cover, PropShape::Bool,
                          n.R(d.full));
  SigId sne = n.add_register("seen_nonempty", 1, 0);
  n.set_next(sne, n.Or(n.R(sne), n.Not(n.R(d.empty))));
  t.cover_empty_after =
      add_prop(n, "cover_empty_after_nonempty", PropRole::Cover, PropShape::Bool,
               n.And(n.R(sne), n.R(d.empty)));
  return t;
}

std::vector<PlanStep> smart_tracker_plan(const FifoDesign& d,
                                         const SmartTracker& t) {
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
  // With the head fact as a lemma the read port can be cut away, so the
  // master proof stops depending on the buffer size.
  ind("master", t.master, {t.inv.head}, {d.rd_next});

  {
    PlanStep st;
    st.name = "live_sampled_out";
    st.prop = t.live;
    st.method = Method::Liveness;
    st.lemmas = {t.inv.not_entered, t.inv.count_agree, t.inv.between_pointers,
                 t.master};
    st.k = 24;
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
  cover("cover_sampled_in", t.cover_sampled_in, 4);
  cover("cover_full", t.cover_full, static_cast<int>(d.depth) + 4);
  cover("cover_empty_after_nonempty", t.cover_empty_after, 6);
  return s;
}

} // namespace wlmc
