#pragma once

#include <string>
#include <vector>

#include "wlmc/ir.hpp"

// Parameterized design generators. Shared conventions: handshake wires that
// the environment drives are free inputs, environment rules (no write into a
// full buffer, tick patterns) are emitted as assume properties instead of
// being baked into update logic, and everything a scoreboard or a mutation
// needs to reach is a named signal recorded on the returned struct.

namespace wlmc {

// One handshake port; hsk = req & ack.
struct Port {
  SigId req = kNoSig, ack = kNoSig, data = kNoSig;
  SigId hsk = kNoSig;
};

// -- fifo -------------------------------------------------------------------

enum class FifoVariant { Baseline, LowPowerGated };

// Circular buffer with registered read data (one cycle from read handshake
// to data). Write side: w.req/w.ack free, data accepted on w.hsk. Read side:
// r.req/r.ack free, head value lands in r.data the cycle after r.hsk. The
// LowPowerGated variant routes write data through per-slot gating logic;
// behavior is identical, the gating exists as distinct mutation surface.
struct FifoDesign {
  Netlist net;
  unsigned depth = 0, width = 0, depth_bits = 0;
  FifoVariant variant = FifoVariant::Baseline;
  Port w, r;
  int read_latency = 1;
  SigId wptr = kNoSig, rptr = kNoSig; // depth_bits wide
  SigId occupancy = kNoSig;           // depth_bits + 1 wide
  std::vector<SigId> mem;             // one register per slot
  std::vector<SigId> wen;             // per-slot write enable combs
  SigId rd_next = kNoSig;             // comb mem[rptr]; read-path cut point
  SigId full = kNoSig, empty = kNoSig;
  PropId assume_w = 0, assume_r = 0;
};

FifoDesign build_fifo(unsigned depth, unsigned width,
                      FifoVariant variant = FifoVariant::Baseline);

// -- arbiter ----------------------------------------------------------------

enum class ArbiterPolicy { PriorityFcfs, RoundRobin, PlainPriority };

const char* policy_name(ArbiterPolicy p);

// n requestors, one grant per cycle. A requestor may hold one outstanding
// request (in_ack = !pending); the grant port announces the serviced
// requestor (out_src) and routes its destination field (out_dst).
//   PriorityFcfs: age-matrix order, same-cycle ties to the lower index.
//   RoundRobin:   first pending requestor at or after rr_ptr.
//   PlainPriority: lowest-index pending requestor.
struct ArbiterDesign {
  Netlist net;
  unsigned n = 0;
  ArbiterPolicy policy = ArbiterPolicy::PriorityFcfs;
  unsigned idx_bits = 0;
  std::vector<SigId> in_req, in_ack, in_hsk; // ack is design logic
  std::vector<SigId> in_dst;                 // free routing field per requestor
  std::vector<SigId> pending;
  std::vector<std::vector<SigId>> older; // [i][j], PriorityFcfs only
  SigId rr_ptr = kNoSig;                 // RoundRobin only
  std::vector<SigId> rel; // RoundRobin distance to rr_ptr, per requestor
  SigId out_vld = kNoSig, out_ack = kNoSig, out_hsk = kNoSig;
  SigId out_src = kNoSig, out_dst = kNoSig;
  std::vector<SigId> grant;      // per-requestor grant combs
  SigId granted_any = kNoSig;    // some grant fired this cycle
};

ArbiterDesign build_arbiter(unsigned n, ArbiterPolicy policy);

// -- memory subsystem arbiter -----------------------------------------------

struct MemArbiterConfig {
  std::vector<unsigned> groups{4, 4, 1}; // requestor instances per group
  unsigned bank_groups = 4;
  unsigned banks_per_group = 2;
  unsigned max_outstanding = 4; // per-bank queue capacity
  unsigned id_width = 2;
};

// Request streams (one per group instance) feed per-bank queues. A stream's
// requests to one bank are served in order; same-cycle arrivals enqueue in
// (group, instance) order; cross-cycle interleaving across groups is free
// because acceptance can be stalled per stream and banks drain only when
// their enable input allows. Each bank announces the id and source of the
// entry it hands out.
struct MemArbiterDesign {
  Netlist net;
  MemArbiterConfig cfg;
  unsigned n_sources = 0, n_banks = 0, src_bits = 0, bank_bits = 0;
  std::vector<unsigned> src_group, src_inst;
  std::vector<SigId> req_valid, req_enable, req_hsk; // enable is design logic
  std::vector<SigId> req_id;             // id inputs, id_width wide
  std::vector<SigId> req_bank;           // destination inputs (kNoSig if 1 bank)
  std::vector<SigId> stall;              // free staller per stream
  std::vector<std::vector<SigId>> q_id;  // [bank][slot]
  std::vector<std::vector<SigId>> q_src; // [bank][slot]
  std::vector<SigId> q_occ;              // per bank
  std::vector<SigId> bank_vld, bank_en, bank_hsk; // enable is a free input
  std::vector<SigId> out_id, out_src;    // per bank head fields (combs)

  unsigned source_of(unsigned group, unsigned inst) const;
  unsigned bank_of(unsigned grp, unsigned bnk) const {
    return grp * cfg.banks_per_group + bnk;
  }
};

MemArbiterDesign build_mem_arbiter(const MemArbiterConfig& cfg);

// -- clock domain crossing fifo ---------------------------------------------

// Dual-clock circular buffer. Binary pointers are one bit wider than the
// index; their gray encodings cross into the opposite domain through two
// sampling registers. With jitter enabled, each sampler bit may grab the
// value from one source tick earlier, chosen by a free input per bit; gray
// coding keeps any such mix equal to an actual past pointer value.
// ratio r means the read domain ticks once every r supersteps while the
// write domain ticks every superstep (assume properties pin the pattern).
struct SyncDesign {
  Netlist net;
  unsigned depth = 0, width = 0, depth_bits = 0, ratio = 1;
  bool jitter = false;
  DomainId wdom = 0, rdom = 0;
  SigId tick_w = kNoSig, tick_r = kNoSig;
  Port w, r;
  int read_latency = 1; // in read-domain ticks
  SigId wptr = kNoSig, rptr = kNoSig;         // binary, depth_bits + 1 wide
  SigId wgray = kNoSig, rgray = kNoSig;       // gray-encode combs
  SigId wgray_prev = kNoSig, rgray_prev = kNoSig;
  SigId wgray_r1 = kNoSig, wgray_r2 = kNoSig; // write pointer seen from rdom
  SigId rgray_w1 = kNoSig, rgray_w2 = kNoSig; // read pointer seen from wdom
  std::vector<SigId> jit_w, jit_r; // per-bit jitter inputs (jitter only)
  std::vector<SigId> mem;
  std::vector<SigId> wen;
  SigId rd_next = kNoSig;
  SigId full = kNoSig, empty = kNoSig;
  SigId phase = kNoSig; // free-running ratio counter
  PropId assume_w = 0, assume_r = 0, assume_tw = 0, assume_tr = 0;
};

SyncDesign build_synchronizer(unsigned depth, unsigned width, unsigned ratio,
                              bool jitter = false);

// -- packet pipe ------------------------------------------------------------

// Elastic packet buffer. drop removes the head without presenting it at the
// read port. When more than depth/2 packets are in flight and elasticate is
// raised, the shrink mask re-arms from the lower three bits of the head
// packet: internal_mask bit i = (header >= i). mask_o publishes the mask.
struct PacketDesign {
  Netlist net;
  unsigned depth = 0, width = 0, shrink_len = 5, depth_bits = 0;
  Port w, r;
  int read_latency = 1;
  SigId drop = kNoSig, elasticate = kNoSig;
  SigId wptr = kNoSig, rptr = kNoSig;
  SigId in_flight = kNoSig; // depth_bits + 1 wide
  std::vector<SigId> mem;
  std::vector<SigId> wen;
  SigId rd_next = kNoSig;
  SigId head_header = kNoSig;   // comb, low 3 bits of the head slot
  SigId internal_mask = kNoSig; // register, shrink_len wide, resets to ones
  SigId mask_o = kNoSig;        // comb alias of internal_mask
  SigId full = kNoSig, empty = kNoSig;
  PropId assume_w = 0, assume_r = 0, assume_drop = 0;
};

PacketDesign build_packet_pipe(unsigned depth, unsigned width,
                               unsigned shrink_len = 5);

} // namespace wlmc
