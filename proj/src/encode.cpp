#include "wlmc/encode.hpp"

#include <stdexcept>

namespace wlmc {

Unroller::Unroller(const Netlist& n, ClauseSink& sink, bool init_at_frame0)
    : n_(&n), sink_(&sink), init_(init_at_frame0) {
  int v = sink_->new_var();
  if (v != 1) throw std::logic_error("unroller requires a fresh sink");
  int unit[1] = {1};
  sink_->add_clause(unit);
}

void Unroller::add_cut(SigId s) {
  if (n_->sigs[s].kind != SigKind::Comb) throw std::logic_error("cut on non-comb");
  for (const auto& frame : sig_bits_)
    if (s < frame.size() && !frame[s].empty())
      throw std::logic_error("cut after encoding");
  cuts_.insert(s);
}

void Unroller::ensure_frame(int f) {
  while (static_cast<int>(sig_bits_.size()) <= f) {
    sig_bits_.emplace_back(n_->sigs.size());
    node_bits_.emplace_back(n_->nodes.size());
  }
}

int Unroller::fresh(SigId s, unsigned bit, int frame) {
  int v = sink_->new_var();
  var_map_.push_back({v, s, static_cast<std::uint8_t>(bit), frame});
  return v;
}

int Unroller::mk_and(int a, int b) {
  if (a == kFalse || b == kFalse) return kFalse;
  if (a == kTrue) return b;
  if (b == kTrue) return a;
  if (a == b) return a;
  if (a == -b) return kFalse;
  int t = sink_->new_var();
  sink_->add_clause(std::initializer_list<int>{-t, a});
  sink_->add_clause(std::initializer_list<int>{-t, b});
  sink_->add_clause(std::initializer_list<int>{t, -a, -b});
  return t;
}

int Unroller::mk_or(int a, int b) { return -mk_and(-a, -b); }

int Unroller::mk_xor(int a, int b) {
  if (a == kFalse) return b;
  if (b == kFalse) return a;
  if (a == kTrue) return -b;
  if (b == kTrue) return -a;
  if (a == b) return kFalse;
  if (a == -b) return kTrue;
  int t = sink_->new_var();
  sink_->add_clause(std::initializer_list<int>{-t, a, b});
  sink_->add_clause(std::initializer_list<int>{-t, -a, -b});
  sink_->add_clause(std::initializer_list<int>{t, -a, b});
  sink_->add_clause(std::initializer_list<int>{t, a, -b});
  return t;
}

int Unroller::mk_ite(int s, int t, int f) {
  if (s == kTrue) return t;
  if (s == kFalse) return f;
  if (t == f) return t;
  if (t == kTrue && f == kFalse) return s;
  if (t == kFalse && f == kTrue) return -s;
  if (t == kTrue) return mk_or(s, f);
  if (t == kFalse) return mk_and(-s, f);
  if (f == kTrue) return mk_or(-s, t);
  if (f == kFalse) return mk_and(s, t);
  int x = sink_->new_var();
  sink_->add_clause(std::initializer_list<int>{-x, -s, t});
  sink_->add_clause(std::initializer_list<int>{x, -s, -t});
  sink_->add_clause(std::initializer_list<int>{-x, s, f});
  sink_->add_clause(std::initializer_list<int>{x, s, -f});
  // Redundant but propagation-friendly.
  sink_->add_clause(std::initializer_list<int>{-x, t, f});
  sink_->add_clause(std::initializer_list<int>{x, -t, -f});
  return x;
}

std::vector<int> Unroller::add_words(const std::vector<int>& a,
                                     const std::vector<int>& b, int carry_in) {
  std::vector<int> out(a.size());
  int c = carry_in;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int axb = mk_xor(a[i], b[i]);
    out[i] = mk_xor(axb, c);
    // carry-out = a&b | c&(a^b)
    c = mk_or(mk_and(a[i], b[i]), mk_and(c, axb));
  }
  return out;
}

const std::vector<int>& Unroller::word(SigId s, int f) {
  ensure_frame(f);
  std::vector<int>& w = sig_bits_[f][s];
  if (!w.empty()) return w;
  const Signal& sig = n_->sigs[s];
  std::vector<int> bits;
  switch (sig.kind) {
    case SigKind::Input:
      for (unsigned i = 0; i < sig.width; ++i) bits.push_back(fresh(s, i, f));
      break;
    case SigKind::Frozen:
      if (f == 0)
        for (unsigned i = 0; i < sig.width; ++i) bits.push_back(fresh(s, i, 0));
      else
        bits = word(s, 0);
      break;
    case SigKind::Register:
      if (f == 0) {
        if (init_)
          for (unsigned i = 0; i < sig.width; ++i)
            bits.push_back((sig.reset >> i) & 1 ? kTrue : kFalse);
        else
          for (unsigned i = 0; i < sig.width; ++i) bits.push_back(fresh(s, i, 0));
      } else {
        std::vector<int> nx = expr_word(sig.next, f - 1);
        if (sig.domain == kDomainFree) {
          bits = nx;
        } else {
          int tick = word(n_->domains[sig.domain].tick, f - 1)[0];
          std::vector<int> prev = word(s, f - 1);
          for (unsigned i = 0; i < sig.width; ++i)
            bits.push_back(mk_ite(tick, nx[i], prev[i]));
        }
      }
      break;
    case SigKind::Comb:
      if (cuts_.count(s))
        for (unsigned i = 0; i < sig.width; ++i) bits.push_back(fresh(s, i, f));
      else
        bits = expr_word(sig.def, f);
      break;
  }
  // word() may have been re-entered; write through the map, not the old ref.
  sig_bits_[f][s] = std::move(bits);
  return sig_bits_[f][s];
}

std::vector<int> Unroller::expr_word(ExprId e, int f) {
  ensure_frame(f);
  if (!node_bits_[f][e].empty()) return node_bits_[f][e];
  const Expr& x = n_->nodes[e];
  std::vector<int> r;
  auto A = [&] { return expr_word(x.a, f); };
  auto B = [&] { return expr_word(x.b, f); };
  switch (x.op) {
    case ExprOp::Const:
      for (unsigned i = 0; i < x.width; ++i)
        r.push_back((x.value >> i) & 1 ? kTrue : kFalse);
      break;
    case ExprOp::Ref:
      r = word(x.sig, f);
      break;
    case ExprOp::Not:
      for (int l : A()) r.push_back(-l);
      break;
    case ExprOp::And: {
      auto a = A(), b = B();
      for (unsigned i = 0; i < x.width; ++i) r.push_back(mk_and(a[i], b[i]));
      break;
    }
    case ExprOp::Or: {
      auto a = A(), b = B();
      for (unsigned i = 0; i < x.width; ++i) r.push_back(mk_or(a[i], b[i]));
      break;
    }
    case ExprOp::Xor: {
      auto a = A(), b = B();
      for (unsigned i = 0; i < x.width; ++i) r.push_back(mk_xor(a[i], b[i]));
      break;
    }
    case ExprOp::Add:
      r = add_words(A(), B(), kFalse);
      break;
    case ExprOp::Sub: {
      auto b = B();
      for (int& l : b) l = -l;
      r = add_words(A(), b, kTrue);
      break;
    }
    case ExprOp::Eq:
    case ExprOp::Neq: {
      auto a = A(), b = B();
      int any = kFalse;
      for (std::size_t i = 0; i < a.size(); ++i) any = mk_or(any, mk_xor(a[i], b[i]));
      r.push_back(x.op == ExprOp::Eq ? -any : any);
      break;
    }
    case ExprOp::Lt:
    case ExprOp::Geq: {
      // Borrow chain of a - b: borrow out means a < b.
      auto a = A(), b = B();
      int borrow = kFalse;
      for (std::size_t i = 0; i < a.size(); ++i) {
        int axb = mk_xor(a[i], b[i]);
        borrow = mk_or(mk_and(-a[i], b[i]), mk_and(-axb, borrow));
      }
      r.push_back(x.op == ExprOp::Lt ? borrow : -borrow);
      break;
    }
    case ExprOp::Mux: {
      int s = A()[0];
      auto t = B(), fl = expr_word(x.c, f);
      for (unsigned i = 0; i < x.width; ++i) r.push_back(mk_ite(s, t[i], fl[i]));
      break;
    }
    case ExprOp::Concat: {
      auto hi = A(), lo = B();
      r = lo;
      r.insert(r.end(), hi.begin(), hi.end());
      break;
    }
    case ExprOp::Slice: {
      auto a = A();
      for (unsigned i = x.lo; i <= x.hi; ++i) r.push_back(a[i]);
      break;
    }
    case ExprOp::CountOnes: {
      auto a = A();
      r.assign(x.width, kFalse);
      for (int bit : a) {
        std::vector<int> one(x.width, kFalse);
        one[0] = bit;
        r = add_words(r, one, kFalse);
      }
      break;
    }
    case ExprOp::ReduceOr: {
      int any = kFalse;
      for (int l : A()) any = mk_or(any, l);
      r.push_back(any);
      break;
    }
  }
  node_bits_[f][e] = r;
  return r;
}

std::optional<std::uint64_t> Unroller::read_word(SigId s, int f,
                                                 const SatResult& r) const {
  if (f >= static_cast<int>(sig_bits_.size())) return std::nullopt;
  const std::vector<int>& w = sig_bits_[f][s];
  if (w.empty()) return std::nullopt;
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int l = w[i];
    bool bit = l > 0 ? r.model[l] != 0 : r.model[-l] == 0;
    if (bit) v |= 1ull << i;
  }
  return v;
}

EncodedBmc tseitin_encode(const Monitored& mon, int frames, bool init_at_frame0) {
  if (frames < 1) throw std::logic_error("frames must be at least 1");
  EncodedBmc out;
  CnfBuilder builder;
  Unroller u(mon.net, builder, init_at_frame0);
  out.bad.resize(mon.mons.size());
  out.goal.resize(mon.mons.size());
  for (int f = 0; f < frames; ++f) {
    for (SigId s = 0; s < mon.net.sigs.size(); ++s) u.word(s, f);
    for (const Monitor& m : mon.mons) {
      switch (m.kind) {
        case MonitorKind::Constraint: {
          int c[1] = {u.lit(m.sig, f)};
          builder.add_clause(c);
          break;
        }
        case MonitorKind::Bad:
          out.bad[m.prop].push_back(u.lit(m.sig, f));
          break;
        case MonitorKind::Goal:
          out.goal[m.prop].push_back(u.lit(m.sig, f));
          break;
        case MonitorKind::Liveness:
          break;
      }
    }
  }
  out.cnf = std::move(builder.cnf);
  out.cnf.var_map = u.var_map();
  return out;
}

} // namespace wlmc
