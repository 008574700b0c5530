#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

// Word-level netlist IR.
//
// A netlist is a set of named signals plus an expression arena. Signals are
// one of: free input, frozen symbol (nondeterministic at cycle 0, constant
// afterwards), register (state, with reset value and next-state expression in
// some clock domain), or combinational (defined by an expression). All values
// are unsigned words of at most 64 bits; arithmetic wraps modulo 2^width.
//
// Multi-clock designs run on a global superstep. Every clock domain other
// than the implicit always-ticking domain 0 names a 1-bit tick input; a
// register updates on a superstep iff its domain ticks, otherwise it holds.

namespace wlmc {

using SigId = std::uint32_t;
using ExprId = std::uint32_t;
using DomainId = std::uint32_t;
using PropId = std::uint32_t;

inline constexpr SigId kNoSig = 0xffffffffu;
inline constexpr ExprId kNoExpr = 0xffffffffu;
inline constexpr PropId kNoProp = 0xffffffffu;
inline constexpr DomainId kDomainFree = 0; // always ticks

enum class ExprOp : std::uint8_t {
  Const,
  Ref,
  Not,
  And,
  Or,
  Xor,
  Add,
  Sub,
  Eq,
  Neq,
  Lt,  // unsigned
  Geq, // unsigned
  Mux, // a ? b : c with a of width 1
  Concat, // a is the high part
  Slice,
  CountOnes,
  ReduceOr,
};

struct Expr {
  ExprOp op = ExprOp::Const;
  std::uint8_t width = 1;
  ExprId a = kNoExpr;
  ExprId b = kNoExpr;
  ExprId c = kNoExpr;
  SigId sig = kNoSig;      // Ref
  std::uint64_t value = 0; // Const
  std::uint8_t hi = 0, lo = 0; // Slice
};

enum class SigKind : std::uint8_t { Input, Frozen, Register, Comb };

struct Signal {
  std::string name;
  SigKind kind = SigKind::Input;
  std::uint8_t width = 1;
  // Register only:
  std::uint64_t reset = 0;
  ExprId next = kNoExpr;
  DomainId domain = kDomainFree;
  // Comb only:
  ExprId def = kNoExpr;
};

enum class PropRole : std::uint8_t { Assume, Assert, Cover };

enum class PropShape : std::uint8_t {
  Bool,       // expr must hold on every tick of the domain
  ImplSame,   // a |-> b, same tick
  ImplNext,   // a |=> b, consequent on the following tick of the domain
  Eventually, // a |-> ##[0:$] b under fairness; assert role only
};

// Optional guidance for proving an eventually-property after the
// loop-closing translation: a rank expression that never increases and
// strictly decreases on fairness events while the obligation is pending.
// trigger/goal must be monotone 1-bit registers for the hint to apply.
struct RankHint {
  ExprId rank = kNoExpr;
  SigId trigger_reg = kNoSig;
  SigId goal_reg = kNoSig;
};

struct Property {
  std::string name;
  PropRole role = PropRole::Assert;
  PropShape shape = PropShape::Bool;
  DomainId domain = kDomainFree;
  ExprId a = kNoExpr; // antecedent, or the bool body / cover body / trigger
  ExprId b = kNoExpr; // consequent, or the eventually-goal
  std::vector<ExprId> fairness;  // Eventually only
  std::vector<SigId> stable;     // frozen symbols the property relies on
  std::optional<RankHint> hint;  // Eventually only
};

struct ClockDomain {
  std::string name;
  SigId tick = kNoSig; // kNoSig for domain 0
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct Netlist {
  std::vector<Signal> sigs;
  std::vector<Expr> nodes;
  std::vector<ClockDomain> domains{{"free", kNoSig}};
  std::vector<Property> props;
  std::unordered_map<std::string, SigId> by_name;
  std::string design_name;
  std::unordered_map<std::string, std::string> params;

  // -- construction ---------------------------------------------------------

  SigId add_input(const std::string& name, unsigned width);
  SigId add_frozen(const std::string& name, unsigned width);
  SigId add_register(const std::string& name, unsigned width, std::uint64_t reset,
                     DomainId domain = kDomainFree);
  SigId add_comb(const std::string& name, ExprId def);
  void set_next(SigId reg, ExprId next);
  DomainId add_domain(const std::string& name);
  PropId add_property(Property p);

  // -- expression builders --------------------------------------------------

  ExprId C(unsigned width, std::uint64_t value); // constant
  ExprId R(SigId s);                             // reference
  ExprId Not(ExprId a);
  ExprId And(ExprId a, ExprId b);
  ExprId Or(ExprId a, ExprId b);
  ExprId Xor(ExprId a, ExprId b);
  ExprId Add(ExprId a, ExprId b);
  ExprId Sub(ExprId a, ExprId b);
  ExprId Eq(ExprId a, ExprId b);
  ExprId Neq(ExprId a, ExprId b);
  ExprId Lt(ExprId a, ExprId b);
  ExprId Geq(ExprId a, ExprId b);
  ExprId Mux(ExprId sel, ExprId t, ExprId f);
  ExprId ConcatE(ExprId hi, ExprId lo);
  ExprId SliceE(ExprId a, unsigned hi, unsigned lo);
  ExprId CountOnes(ExprId a);
  ExprId ReduceOrE(ExprId a);

  // Conveniences built from the primitives above.
  ExprId AndN(const std::vector<ExprId>& xs); // empty -> const 1
  ExprId OrN(const std::vector<ExprId>& xs);  // empty -> const 0
  ExprId ZExt(ExprId a, unsigned width);
  ExprId EqC(ExprId a, std::uint64_t v);
  // Value mux over a table indexed by idx (binary select tree). The table is
  // padded with its last element up to a power of two.
  ExprId Select(ExprId idx, const std::vector<ExprId>& table);

  unsigned width_of(ExprId e) const { return nodes[e].width; }
  unsigned width_of_sig(SigId s) const { return sigs[s].width; }
  SigId find(const std::string& name) const;

  ValidationReport validate() const;

  // Topological order of comb signals, valid once validate().ok(). The node
  // arena is topological by construction (operands precede users).
  std::vector<SigId> comb_order() const;

private:
  ExprId push(Expr e);
};

std::uint64_t mask_width(unsigned width);

// Rebuilds expression e substituting signal references: sub(s) returning an
// expression replaces Ref(s); comb references without a substitution are
// inlined recursively (so the result mentions only substituted or leaf
// signals). Unchanged subtrees are shared, not copied.
using SigSubst = std::function<std::optional<ExprId>(SigId)>;
ExprId subst_expr(Netlist& n, ExprId e, const SigSubst& sub);

// -- simulation -------------------------------------------------------------

// Full valuation of every signal in one superstep.
using Valuation = std::vector<std::uint64_t>;

struct SimState {
  // Values of registers and frozen symbols, indexed by signal id (combs and
  // inputs are zero and ignored).
  std::vector<std::uint64_t> regs;
};

SimState initial_state(const Netlist& n,
                       const std::vector<std::pair<SigId, std::uint64_t>>& frozen = {});

// Evaluates every node and comb signal given register contents and the input
// valuation; returns values for all signals.
Valuation eval_all(const Netlist& n, const SimState& st,
                   const std::vector<std::pair<SigId, std::uint64_t>>& inputs);

std::uint64_t eval_expr(const Netlist& n, const Valuation& v, ExprId e);

// One superstep: registers whose domain ticks take their next value, all
// others hold. Frozen symbols always hold.
SimState step(const Netlist& n, const SimState& st, const Valuation& v);

// Reusable evaluator avoiding per-call allocation; also exposes node values.
class Evaluator {
public:
  explicit Evaluator(const Netlist& n);
  // in_vals must assign every input signal (by id, others ignored).
  const Valuation& run(const SimState& st, const Valuation& in_vals);
  void step_into(const SimState& st, SimState& out) const;
  const Netlist& net() const { return *n_; }

private:
  const Netlist* n_;
  std::vector<std::uint64_t> node_vals_;
  Valuation sig_vals_;
};

} // namespace wlmc
