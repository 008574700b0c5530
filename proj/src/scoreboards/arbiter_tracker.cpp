#include "wlmc/scoreboards.hpp"

#include <string>
#include <utility>
#include <vector>

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

ExprId concat_bits(Netlist& n, const std::vector<ExprId>& bits) {
  ExprId r = bits[0];
  for (size_t i = 1; i < bits.size(); ++i) r = n.ConcatE(bits[i], r);
  return r;
}

ExprId count_word(Netlist& n, const std::vector<ExprId>& bits, unsigned width) {
  return n.ZExt(n.CountOnes(concat_bits(n, bits)), width);
}

} // namespace

// The counter's meaning depends on the policy: it holds the number of
// requests the arbiter must serve before the watched one is done, counting
// the watched request itself once sampled.
//   PriorityFcfs: pre-sampling it mirrors the whole pending population
//     (everyone already waiting is older), afterwards 1 + requests ahead in
//     age order. Every grant drains one of them.
//   RoundRobin: idle until sampling, then 1 + pending requestors between
//     rr_ptr and the watched index. Arrivals inside that window but behind a
//     same-cycle grant fall outside the next window and are not counted.
//   PlainPriority: always the pending population at or below the watched
//     index; higher indices can never delay the watched request.
ArbiterTracker attach_arbiter_tracker(ArbiterDesign& d) {
  Netlist& n = d.net;
  const unsigned N = d.n, ib = d.idx_bits, tcw = ib + 1;

  ArbiterTracker t;
  t.watched = n.add_frozen("watched", ib);
  t.arbit_window = n.add_input("arbit_window", 1);
  t.sampled_in = n.add_register("sampled_in", 1, 0);
  t.sampled_out = n.add_register("sampled_out", 1, 0);
  t.tc = n.add_register("tracking_counter", tcw, 0);
  t.hsk_out_glbl = d.granted_any;
  if ((N & (N - 1)) != 0)
    t.assume_watched = add_prop(n, "env_watched_in_range", PropRole::Assume,
                                PropShape::Bool,
                                n.Lt(n.R(t.watched), n.C(ib, N)));

  std::vector<ExprId> hsk_tab, grant_tab, pend_tab;
  for (unsigned j = 0; j < N; ++j) {
    hsk_tab.push_back(n.R(d.in_hsk[j]));
    grant_tab.push_back(n.R(d.grant[j]));
    pend_tab.push_back(n.R(d.pending[j]));
  }
  SigId hsk_w = n.add_comb("hsk_w", n.Select(n.R(t.watched), hsk_tab));
  SigId grant_w = n.add_comb("grant_w", n.Select(n.R(t.watched), grant_tab));
  SigId pend_w = n.add_comb("pending_w", n.Select(n.R(t.watched), pend_tab));
  SigId sampling = n.add_comb(
      "sampling", n.AndN({n.R(hsk_w), n.R(t.arbit_window),
                          n.Not(n.R(t.sampled_in))}));
  n.set_next(t.sampled_in, n.Or(n.R(t.sampled_in), n.R(sampling)));
  n.set_next(t.sampled_out,
             n.Or(n.R(t.sampled_out), n.And(n.R(t.sampled_in), n.R(grant_w))));

  ExprId si = n.R(t.sampled_in);
  ExprId so = n.R(t.sampled_out);
  ExprId zero = n.C(tcw, 0);

  // Requests at or below the watched index, as handshakes and as pendings.
  std::vector<ExprId> hsk_le, pend_le;
  for (unsigned j = 0; j < N; ++j) {
    ExprId le = n.Geq(n.R(t.watched), n.C(ib, j));
    hsk_le.push_back(n.And(hsk_tab[j], le));
    pend_le.push_back(n.And(pend_tab[j], le));
  }

  ExprId rank = kNoExpr;
  switch (d.policy) {
    case ArbiterPolicy::PriorityFcfs: {
      ExprId cnt_all = count_word(n, hsk_tab, tcw);
      ExprId cnt_le = count_word(n, hsk_le, tcw);
      t.incr = n.add_comb(
          "incr", n.Mux(n.R(sampling), cnt_le, n.Mux(si, zero, cnt_all)));
      t.decr = n.add_comb("decr", n.And(n.R(d.granted_any), n.Not(so)));

      std::vector<ExprId> pair_ok, ahead;
      for (unsigned i = 0; i < N; ++i)
        for (unsigned j = i + 1; j < N; ++j)
          pair_ok.push_back(n.Or(
              n.Not(n.And(pend_tab[i], pend_tab[j])),
              n.Xor(n.R(d.older[i][j]), n.R(d.older[j][i]))));
      t.inv_total = add_prop(n, "inv_age_order", PropRole::Assert,
                             PropShape::Bool, n.AndN(pair_ok));
      for (unsigned j = 0; j < N; ++j) {
        // older[j][watched] under a symbolic watched index; the j == watched
        // entry is vacuously 0 and never selected while j is pending.
        std::vector<ExprId> col;
        for (unsigned w = 0; w < N; ++w)
          col.push_back(w == j ? n.C(1, 0) : n.R(d.older[j][w]));
        ahead.push_back(n.And(pend_tab[j], n.Select(n.R(t.watched), col)));
      }
      t.inv_occupancy =
          add_prop(n, "inv_occupancy", PropRole::Assert, PropShape::ImplSame,
                   n.Not(si), n.Eq(n.R(t.tc), count_word(n, pend_tab, tcw)));
      t.inv_count = add_prop(
          n, "inv_count", PropRole::Assert, PropShape::ImplSame,
          n.And(si, n.Not(so)),
          n.Eq(n.R(t.tc), n.Add(n.C(tcw, 1), count_word(n, ahead, tcw))));
      rank = n.R(t.tc);
      break;
    }
    case ArbiterPolicy::RoundRobin: {
      std::vector<ExprId> rel_tab;
      for (unsigned j = 0; j < N; ++j) rel_tab.push_back(n.R(d.rel[j]));
      SigId rel_w = n.add_comb("rel_w", n.Select(n.R(t.watched), rel_tab));
      SigId rel_src = n.add_comb("rel_src", n.Select(n.R(d.out_src), rel_tab));

      // While the watched request is pending, a grant can only land at or
      // ahead of it, so window membership is a plain distance compare. At
      // the sampling cycle the grant may instead land beyond the watched
      // index; the pointer then jumps past it and everything after the
      // granted slot wraps to the front of the next window, so the load is
      // counted against the post-grant window.
      std::vector<ExprId> win, ahead_after, enter;
      ExprId rs = n.R(rel_src), rw = n.R(rel_w), g = n.R(d.granted_any);
      for (unsigned j = 0; j < N; ++j) {
        ExprId closer = n.Lt(rel_tab[j], rw);
        win.push_back(n.And(pend_tab[j], closer));
        ExprId alive = n.Or(n.And(pend_tab[j], n.Not(grant_tab[j])),
                            hsk_tab[j]);
        ExprId next_win =
            n.Mux(g,
                  n.Mux(n.Lt(rs, rw),
                        n.And(n.Lt(rs, rel_tab[j]), closer),
                        n.Or(closer, n.Lt(rs, rel_tab[j]))),
                  closer);
        ahead_after.push_back(n.And(alive, next_win));
        enter.push_back(n.AndN(
            {hsk_tab[j], closer, n.Or(n.Not(g), n.Lt(rs, rel_tab[j]))}));
      }
      ExprId load = n.Add(count_word(n, win, tcw), n.C(tcw, 1));
      ExprId sample_load =
          n.Add(count_word(n, ahead_after, tcw), n.C(tcw, 1));
      ExprId post = n.And(si, n.Not(so));
      t.incr = n.add_comb(
          "incr", n.Mux(n.R(sampling), sample_load,
                        n.Mux(post, count_word(n, enter, tcw), zero)));
      t.decr = n.add_comb(
          "decr", n.AndN({post, g, n.Lt(rs, rw)}));

      t.inv_occupancy =
          add_prop(n, "inv_occupancy", PropRole::Assert, PropShape::ImplSame,
                   n.Not(si), n.EqC(n.R(t.tc), 0));
      t.inv_count = add_prop(n, "inv_count", PropRole::Assert,
                             PropShape::ImplSame, n.And(si, n.Not(so)),
                             n.Eq(n.R(t.tc), load));
      // rel_w does not freeze once the watched request is granted (rr_ptr
      // moves past it), so the rank pins to 0 on the goal flag instead.
      rank = n.Mux(so, n.C(ib + 1, 0),
                   n.Add(n.ZExt(n.R(rel_w), ib + 1), n.C(ib + 1, 1)));
      break;
    }
    case ArbiterPolicy::PlainPriority: {
      ExprId cnt_le = count_word(n, hsk_le, tcw);
      t.incr = n.add_comb("incr", n.Mux(so, zero, cnt_le));
      t.decr = n.add_comb(
          "decr", n.AndN({n.R(d.granted_any), n.Not(so),
                          n.Geq(n.R(t.watched), n.R(d.out_src))}));
      t.inv_count =
          add_prop(n, "inv_count", PropRole::Assert, PropShape::ImplSame,
                   n.Not(so), n.Eq(n.R(t.tc), count_word(n, pend_le, tcw)));
      break;
    }
  }
  n.set_next(t.tc, n.Sub(n.Add(n.R(t.tc), n.R(t.incr)),
                         n.ZExt(n.R(t.decr), tcw)));

  t.inv_not_entered = add_prop(n, "inv_not_entered", PropRole::Assert,
                               PropShape::ImplSame, n.Not(si), n.Not(so));
  t.inv_pending =
      add_prop(n, "inv_pending", PropRole::Assert, PropShape::ImplSame,
               n.And(si, n.Not(so)), n.R(pend_w));
  t.master = add_prop(n, "master", PropRole::Assert, PropShape::ImplSame,
                      n.AndN({n.EqC(n.R(t.tc), 1), si, n.Not(so),
                              n.R(d.granted_any)}),
                      n.Eq(n.R(d.out_src), n.R(t.watched)));
  {
    Property p;
    p.name = "live_sampled_out";
    p.role = PropRole::Assert;
    p.shape = PropShape::Eventually;
    p.a = si;
    p.b = so;
    p.fairness = {n.R(d.granted_any)};
    // A plain priority arbiter starves low-priority requestors, so there is
    // no rank to offer; the property is kept for lasso hunting.
    if (d.policy != ArbiterPolicy::PlainPriority)
      p.hint = RankHint{rank, t.sampled_in, t.sampled_out};
    t.live = n.add_property(std::move(p));
  }
  t.cover_sampled_in =
      add_prop(n, "cover_sampled_in", PropRole::Cover, PropShape::Bool, si);
  t.cover_sampled_out =
      add_prop(n, "cover_sampled_out", PropRole::Cover, PropShape::Bool, so);
  return t;
}

std::vector<PlanStep> arbiter_tracker_plan(const ArbiterDesign& d,
                                           const ArbiterTracker& t) {
  std::vector<PlanStep> s;
  auto ind = [&](const char* name, PropId p, std::vector<PropId> lemmas) {
    PlanStep st;
    st.name = name;
    st.prop = p;
    st.method = Method::KInduction;
    st.lemmas = std::move(lemmas);
    st.k = 2;
    s.push_back(std::move(st));
  };
  ind("not_entered", t.inv_not_entered, {});
  ind("pending", t.inv_pending, {});
  switch (d.policy) {
    case ArbiterPolicy::PriorityFcfs:
      ind("age_order", t.inv_total, {});
      ind("occupancy", t.inv_occupancy, {t.inv_not_entered, t.inv_total});
      ind("count", t.inv_count,
          {t.inv_pending, t.inv_total, t.inv_occupancy});
      break;
    case ArbiterPolicy::RoundRobin:
      ind("occupancy", t.inv_occupancy, {});
      ind("count", t.inv_count, {t.inv_occupancy, t.inv_pending});
      break;
    case ArbiterPolicy::PlainPriority:
      ind("count", t.inv_count, {t.inv_not_entered});
      break;
  }
  ind("master", t.master, {t.inv_pending, t.inv_count});
  if (d.policy != ArbiterPolicy::PlainPriority) {
    PlanStep st;
    st.name = "live_sampled_out";
    st.prop = t.live;
    st.method = Method::Liveness;
    st.lemmas = {t.inv_pending, t.inv_count};
    if (d.policy == ArbiterPolicy::PriorityFcfs) {
      st.lemmas.push_back(t.inv_total);
      st.lemmas.push_back(t.inv_occupancy);
    }
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
  cover("cover_sampled_out", t.cover_sampled_out, 8);
  return s;
}

} // namespace wlmc
