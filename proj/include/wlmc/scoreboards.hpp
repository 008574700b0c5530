#pragma once

#include <vector>

#include "wlmc/designs.hpp"
#include "wlmc/engine.hpp"

// Formal testbenches. Each attach_* grows the design netlist with a tracking
// abstraction (frozen watched symbols, counters, sampling flags) and emits
// assume/assert/cover properties; the matching *_plan returns a staged proof
// plan whose lemma edges mirror the order in which the obligations become
// inductive.

namespace wlmc {

// Signals every counter-style tracker exposes to the shared invariants.
struct TrackerRefs {
  SigId d = kNoSig;           // frozen watched word
  SigId sampled_in = kNoSig;  // watched word entered
  SigId exited = kNoSig;      // counter freeze flag (watched word left)
  SigId tc = kNoSig;          // tracking counter, occupancy-wide
};

// The four invariants tying a tracker to the buffer, plus the helper facts
// their proofs lean on (pointer/occupancy agreement, occupancy bound, and
// the head specialization of the positional invariant used to cut the read
// port out of the master proof).
struct FifoInvariants {
  PropId not_entered = 0;      // !sampled_in |-> !exited
  PropId count_agree = 0;      // !sampled_in |-> occupancy == tc
  PropId between_pointers = 0; // sampled_in && !exited |-> 1 <= tc <= occupancy
  PropId positional = 0;       // watched word sits at rptr + tc - 1
  PropId ptr_agree = 0;        // wptr - rptr == occupancy mod depth
  PropId occ_bound = 0;        // occupancy <= depth
  PropId head = 0;             // tc == 1 |-> rd_next == d
};

FifoInvariants fifo_invariants(FifoDesign& d, const TrackerRefs& t);

// -- smart tracker (single watched word + counter) --------------------------

struct SmartTracker {
  TrackerRefs refs;
  SigId arbit_window = kNoSig;
  SigId sampled_out = kNoSig; // same register as refs.exited
  SigId incr = kNoSig, decr = kNoSig, must_read = kNoSig;
  FifoInvariants inv;
  PropId master = 0; // must_read |=> r_data == d
  PropId live = 0;   // sampled_in |-> eventually sampled_out, fair on r_hsk
  PropId cover_sampled_in = 0, cover_full = 0, cover_empty_after = 0;
};

SmartTracker attach_smart_tracker(FifoDesign& d);
std::vector<PlanStep> smart_tracker_plan(const FifoDesign& d,
                                         const SmartTracker& t);

// -- two-transaction tracker ------------------------------------------------

// Watches two symbolic words with an assumed entry order (d1 strictly
// before d2, values distinct). Exit flags are value matches against the
// read port; the d1 position counter and its invariants come along so the
// ordering proof can locate d1. The no_d2_* invariants establish that d2's
// value cannot sit ahead of d1, which is what keeps the read port from
// matching d2 early.
struct TwoTransaction {
  SigId d1 = kNoSig, d2 = kNoSig, arbit_window = kNoSig;
  SigId sampled_in_d1 = kNoSig, sampled_in_d2 = kNoSig;
  SigId sampled_out_d1 = kNoSig, sampled_out_d2 = kNoSig;
  SigId seen_read = kNoSig;
  SigId d1_exited = kNoSig; // counter-based exit flag (read of d1's slot)
  SigId tc = kNoSig;        // d1 position counter
  PropId assume_distinct = 0, assume_order = 0;
  FifoInvariants inv;
  PropId no_d2_anywhere = 0;  // !sampled_in_d2 |-> no stored word equals d2
  PropId no_d2_ahead = 0;     // d2's value never ahead of d1
  PropId rdata_not_d2 = 0;    // read port cannot hold d2 while d1 inside
  PropId rdata_not_d2_pre = 0;
  PropId exit2_entered = 0;   // sampled_out_d2 implies sampled_in_d2
  PropId exit_pending = 0;    // d1 read out but match flag not yet up
  PropId master = 0;          // d2 cannot exit while d1 is inside
  PropId exit_order = 0;      // sampled_out_d2 implies sampled_out_d1
  PropId live = 0;            // d1 eventually exits
  PropId cover_in_d1 = 0, cover_in_d2 = 0, cover_out_d2 = 0;
};

TwoTransaction attach_two_transaction(FifoDesign& d);
std::vector<PlanStep> two_transaction_plan(const FifoDesign& d,
                                           const TwoTransaction& t);

// -- arbiter tracker --------------------------------------------------------

// Position counter for the first windowed request of a frozen requestor
// index. The increment/decrement masks depend on the arbitration policy:
// FCFS counts every earlier arrival, priority counts only indices that can
// still overtake, round robin counts the circular window ahead of the
// watched index.
struct ArbiterTracker {
  SigId watched = kNoSig; // frozen requestor index
  SigId arbit_window = kNoSig;
  SigId sampled_in = kNoSig, sampled_out = kNoSig;
  SigId tc = kNoSig;
  SigId incr = kNoSig, decr = kNoSig;
  SigId hsk_out_glbl = kNoSig; // any grant this cycle
  PropId assume_watched = kNoProp; // watched < n (absent for power of two n)
  PropId master = 0; // counter at one and a grant |-> watched granted
  PropId live = 0;   // sampled_in |-> eventually sampled_out
  PropId inv_not_entered = 0; // !sampled_in |-> !sampled_out
  PropId inv_total = kNoProp; // pending pairs are age-ordered (age matrix only)
  PropId inv_occupancy = kNoProp; // counter against pending set, pre-sampling
  PropId inv_pending = 0; // watched request stays pending while tracked
  PropId inv_count = 0;   // counter against pending set, post-sampling
  PropId cover_sampled_in = 0, cover_sampled_out = 0;
};

ArbiterTracker attach_arbiter_tracker(ArbiterDesign& d);
std::vector<PlanStep> arbiter_tracker_plan(const ArbiterDesign& d,
                                           const ArbiterTracker& t);

// -- memory arbiter scoreboard ----------------------------------------------

// Per-stream-per-bank order checks plus same-cycle priority checks.
// A stream's counter freezes when its watched request is sampled; the
// scenario guard other_req_active latches any activity from other streams
// and gates both sampling and the order assertions, reproducing the
// one-active-stream scenario split.
struct MemArbScoreboard {
  SigId watched_id = kNoSig;
  std::vector<SigId> other_req_active; // sticky, per multi-instance stream
  // Indexed [stream][bank] over multi-instance streams (mi_streams lists
  // their source numbers).
  std::vector<unsigned> mi_streams;
  std::vector<std::vector<SigId>> seen_in, seen_out, tc;
  std::vector<std::vector<PropId>> fcfs; // order assertions
  // Priority checks, indexed [multi group][bank][case]; cases enumerate the
  // instance subsets of size >= 2 of that group.
  std::vector<unsigned> mi_groups;
  std::vector<std::vector<std::vector<SigId>>> seen_multi;
  std::vector<std::vector<std::vector<PropId>>> priority, priority_cover;
  unsigned n_fcfs = 0, n_priority = 0, n_covers = 0;
};

MemArbScoreboard attach_mem_arbiter_scoreboard(MemArbiterDesign& d);
std::vector<PlanStep> mem_arbiter_plan(const MemArbiterDesign& d,
                                       const MemArbScoreboard& s);

// -- synchronizer tracker ---------------------------------------------------

// Per-domain counters: w_count advances with accepted writes on write-domain
// ticks, r_count with reads on read-domain ticks; their difference is the
// position of the watched word. The master assertion lives in the read
// domain. The sync_* invariants pin the sampled pointer images inside the
// [rptr, wptr] window, which is what makes the crossing proofs inductive.
struct SyncTracker {
  TrackerRefs refs;
  SigId arbit_window = kNoSig;
  SigId sampled_out = kNoSig;
  SigId w_count = kNoSig, r_count = kNoSig; // per-domain counters
  SigId tc_c = kNoSig;                      // comb w_count - r_count
  SigId must_read = kNoSig;
  PropId inv_gray_w = 0, inv_gray_r = 0; // gray delays track binary pointers
  PropId inv_occ = 0; // anchored chain: images lag pointers, span <= depth
  PropId inv_west = 0;  // write pointer image (read side) inside window
  PropId inv_rest = 0;  // read pointer image (write side) inside window
  PropId inv_count = 0; // counter difference equals pointer difference
  PropId inv_not_entered = 0, inv_between = 0, inv_positional = 0, inv_head = 0;
  PropId master = 0; // on read-domain ticks, must_read |=> r_data == d
  PropId live = 0;
  PropId cover_sampled_in = 0, cover_sampled_out = 0;
};

SyncTracker attach_sync_tracker(SyncDesign& d);
std::vector<PlanStep> sync_tracker_plan(const SyncDesign& d,
                                        const SyncTracker& t);

// -- packet tracker ---------------------------------------------------------

// Smart tracker with drop-aware decrement plus a mirror of the design's
// shrink mask. The master compares the masked output word against the
// masked watched word, stretching each side with its own mask source so a
// diverging design mask becomes visible. A drop that removes the watched
// word itself freezes the counter instead of setting sampled_out: without
// the freeze the counter keeps decrementing, wraps back to one, and
// ready_to_sample_out would re-fire against an unrelated packet.
struct PacketTracker {
  TrackerRefs refs;
  SigId arbit_window = kNoSig;
  SigId sampled_out = kNoSig;
  SigId watched_dropped = kNoSig; // watched word removed by a drop
  SigId incr = kNoSig, decr = kNoSig;
  SigId ready_to_sample_out = kNoSig;
  SigId mask_mirror = kNoSig;  // scoreboard copy of internal_mask
  SigId output_mask = kNoSig;  // 2^(mirror+1) - 1
  SigId output_mask_str = kNoSig; // 2^(mask_o+1) - 1
  FifoInvariants inv;
  PropId inv_mask = 0; // mirror equals the design mask
  PropId master = 0;
  PropId cover_sampled_in = 0, cover_out = 0, cover_shrunk = 0;
};

PacketTracker attach_packet_tracker(PacketDesign& d);
std::vector<PlanStep> packet_tracker_plan(const PacketDesign& d,
                                          const PacketTracker& t);

} // namespace wlmc
