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

TwoTransaction attach_two_transaction(FifoDesign& d) {
  if (d.read_latency != 1)
    throw std::invalid_argument("two-transaction tracker expects read latency 1");
  Netlist& n = d.net;
  const unsigned ob = d.depth_bits + 1;

  TwoTransaction t;
  t.d1 = n.add_frozen("d1", d.width);
  t.d2 = n.add_frozen("d2", d.width);
  t.arbit_window = n.add_input("arbit_window", 1);
  t.sampled_in_d1 = n.add_register("sampled_in_d1", 1, 0);
  t.sampled_in_d2 = n.add_register("sampled_in_d2", 1, 0);
  t.sampled_out_d1 = n.add_register("sampled_out_d1", 1, 0);
  t.sampled_out_d2 = n.add_register("sampled_out_d2", 1, 0);
  t.seen_read = n.add_register("seen_read", 1, 0);
  t.d1_exited = n.add_register("d1_exited", 1, 0);
  t.tc = n.add_register("tracking_counter", ob, 0);

  ExprId whsk = n.R(d.w.hsk), rhsk = n.R(d.r.hsk);
  ExprId si1 = n.R(t.sampled_in_d1), si2 = n.R(t.sampled_in_d2);
  ExprId dx = n.R(t.d1_exited);
  n.set_next(t.sampled_in_d1,
             n.Or(si1, n.AndN({whsk, n.Not(si1), n.Eq(n.R(d.w.data), n.R(t.d1)),
                               n.R(t.arbit_window)})));
  n.set_next(t.sampled_in_d2,
             n.Or(si2, n.AndN({whsk, n.Not(si2),
                               n.Eq(n.R(d.w.data), n.R(t.d2))})));
  n.set_next(t.seen_read, n.Or(n.R(t.seen_read), rhsk));

  // Exit flags are value matches on the read port, one tick after the load.
  ExprId match1 = n.AndN({si1, n.R(t.seen_read), n.Eq(n.R(d.r.data), n.R(t.d1))});
  ExprId match2 = n.AndN({si2, n.R(t.seen_read), n.Eq(n.R(d.r.data), n.R(t.d2))});
  n.set_next(t.sampled_out_d1, n.Or(n.R(t.sampled_out_d1), match1));
  n.set_next(t.sampled_out_d2, n.Or(n.R(t.sampled_out_d2), match2));

  // The position counter freezes on the read that pops d1's slot, not on the
  // (later) value match, so the shared invariants stay exact.
  ExprId incr = n.And(whsk, n.Not(si1));
  ExprId decr = n.And(rhsk, n.Not(dx));
  n.set_next(t.d1_exited,
             n.Or(dx, n.AndN({n.EqC(n.R(t.tc), 1), si1, rhsk})));
  n.set_next(t.tc, n.Sub(n.Add(n.R(t.tc), n.ZExt(incr, ob)),
                         n.ZExt(decr, ob)));

  t.assume_distinct = add_prop(n, "env_distinct_words", PropRole::Assume,
                               PropShape::Bool, n.Neq(n.R(t.d1), n.R(t.d2)));
  t.assume_order = add_prop(n, "env_d1_enters_first", PropRole::Assume,
                            PropShape::ImplSame, n.Not(si1), n.Not(si2));

  t.inv = fifo_invariants(
      d, TrackerRefs{t.d1, t.sampled_in_d1, t.d1_exited, t.tc});

  // d2's value cannot be stored anywhere before it is sampled...
  std::vector<ExprId> stored_is_d2;
  std::vector<ExprId> terms_any, terms_ahead;
  ExprId occ = n.R(d.occupancy);
  for (unsigned k = 0; k < d.depth; ++k) {
    ExprId idx = n.Add(n.R(d.rptr), n.C(d.depth_bits, k % d.depth));
    std::vector<ExprId> slots;
    for (SigId m : d.mem) slots.push_back(n.R(m));
    ExprId is_d2 = n.Eq(n.Select(idx, slots), n.R(t.d2));
    terms_any.push_back(
        n.Or(n.Not(n.Lt(n.C(ob, k), occ)), n.Not(is_d2)));
    // ...and never strictly ahead of d1 (positions 0..tc-2) while d1 sits
    // inside the buffer.
    terms_ahead.push_back(
        n.Or(n.Not(n.Lt(n.C(ob, k + 1), n.R(t.tc))), n.Not(is_d2)));
  }
  t.no_d2_anywhere = add_prop(n, "inv_no_d2_anywhere", PropRole::Assert,
                              PropShape::ImplSame, n.Not(si2),
                              n.AndN(terms_any));
  t.no_d2_ahead = add_prop(n, "inv_no_d2_ahead", PropRole::Assert,
                           PropShape::ImplSame, n.And(si1, n.Not(dx)),
                           n.AndN(terms_ahead));
  t.rdata_not_d2_pre =
      add_prop(n, "inv_rdata_not_d2_pre", PropRole::Assert, PropShape::ImplSame,
               n.And(n.Not(si2), n.R(t.seen_read)),
               n.Neq(n.R(d.r.data), n.R(t.d2)));
  t.rdata_not_d2 =
      add_prop(n, "inv_rdata_not_d2", PropRole::Assert, PropShape::ImplSame,
               n.AndN({si1, n.Not(dx), n.R(t.seen_read)}),
               n.Neq(n.R(d.r.data), n.R(t.d2)));
  t.exit2_entered =
      add_prop(n, "inv_exit2_entered", PropRole::Assert, PropShape::ImplSame,
               n.R(t.sampled_out_d2), si2);
  t.exit_pending =
      add_prop(n, "inv_exit_pending", PropRole::Assert, PropShape::ImplSame,
               n.And(dx, n.Not(n.R(t.sampled_out_d1))),
               n.AndN({n.Eq(n.R(d.r.data), n.R(t.d1)), n.R(t.seen_read), si1}));

  t.master = add_prop(n, "master_order", PropRole::Assert, PropShape::ImplSame,
                      n.AndN({si1, si2, n.Not(n.R(t.sampled_out_d1))}),
                      n.Not(n.R(t.sampled_out_d2)));
  t.exit_order =
      add_prop(n, "inv_exit_order", PropRole::Assert, PropShape::ImplSame,
               n.R(t.sampled_out_d2), n.R(t.sampled_out_d1));

  {
    Property p;
    p.name = "live_d1_sampled_out";
    p.role = PropRole::Assert;
    p.shape = PropShape::Eventually;
    p.a = si1;
    p.b = n.R(t.sampled_out_d1);
    p.fairness = {rhsk};
    // Rank: 4*tc+2 while d1 is stored, 1 for the one-tick match lag, 0 done.
    ExprId rank = n.Mux(n.R(t.sampled_out_d1), n.C(ob + 2, 0),
                        n.Mux(dx, n.C(ob + 2, 1),
                              n.ConcatE(n.R(t.tc), n.C(2, 2))));
    p.hint = RankHint{rank, t.sampled_in_d1, t.sampled_out_d1};
    p.stable = {t.d1, t.d2};
    t.live = n.add_property(std::move(p));
  }

  t.cover_in_d1 = add_prop(n, "cover_sampled_in_d1", PropRole::Cover,
                           PropShape::Bool, si1);
  t.cover_in_d2 = add_prop(n, "cover_sampled_in_d2", PropRole::Cover,
                           PropShape::Bool, si2);
  t.cover_out_d2 = add_prop(n, "cover_sampled_out_d2", PropRole::Cover,
                            PropShape::Bool, n.R(t.sampled_out_d2));
  return t;
}

std::vector<PlanStep> two_transaction_plan(const FifoDesign& d,
                                           const TwoTransaction& t) {
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
  ind("no_d2_anywhere", t.no_d2_anywhere, {t.inv.ptr_agree});
  ind("no_d2_ahead", t.no_d2_ahead,
      {t.no_d2_anywhere, t.inv.between_pointers, t.inv.ptr_agree,
       t.inv.occ_bound});
  ind("rdata_not_d2_pre", t.rdata_not_d2_pre, {t.no_d2_anywhere});
  ind("rdata_not_d2", t.rdata_not_d2,
      {t.no_d2_anywhere, t.no_d2_ahead, t.inv.between_pointers,
       t.rdata_not_d2_pre});
  ind("exit2_entered", t.exit2_entered, {});
  ind("exit_pending", t.exit_pending, {t.inv.head});
  ind("master_order", t.master,
      {t.rdata_not_d2, t.exit_pending, t.exit2_entered});
  ind("exit_order", t.exit_order, {t.rdata_not_d2, t.exit_pending});

  {
    PlanStep st;
    st.name = "live_d1_sampled_out";
    st.prop = t.live;
    st.method = Method::Liveness;
    st.lemmas = {t.inv.not_entered, t.inv.count_agree, t.inv.between_pointers,
                 t.inv.head, t.exit_pending};
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
  cover("cover_sampled_in_d1", t.cover_in_d1, 4);
  cover("cover_sampled_in_d2", t.cover_in_d2, 6);
  cover("cover_sampled_out_d2", t.cover_out_d2, 10);
  return s;
}

} // namespace wlmc
