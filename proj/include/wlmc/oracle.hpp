#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "wlmc/monitor.hpp"
#include "wlmc/trace.hpp"

// Ground-truth explicit-state enumeration for tiny instances. Breadth-first
// search over packed register+frozen states, expanding every input valuation
// that satisfies the constraint monitors. Inputs outside the cone of any
// next-state function or monitor are pinned to 0; enumeration order is
// lexicographic for reproducibility.

namespace wlmc {

struct OracleLimits {
  unsigned max_state_bits = 24;
  unsigned max_input_bits = 24;
  std::uint64_t max_states = 1ull << 22;
};

class ExplicitOracle {
public:
  explicit ExplicitOracle(const Monitored& mon, OracleLimits lim = {});

  // False when a cap is exceeded; refusal() then carries the measured size.
  bool enumerate();
  const std::string& refusal() const { return refusal_; }

  std::uint64_t n_states() const { return states_.size(); }
  std::uint64_t n_transitions() const { return n_transitions_; }
  unsigned state_bits() const { return state_bits_; }
  unsigned input_bits() const { return input_bits_; }

  struct Safety {
    bool holds = true;
    int frame = -1; // shortest violating path length in cycles
    Trace cex;
  };
  Safety check_safety(PropId prop) const;

  struct Cover {
    bool reachable = false;
    int frame = -1;
    Trace wit;
  };
  Cover check_cover(PropId prop) const;

  struct Live {
    bool holds = true;
    Trace lasso;     // stem then one loop period
    int loop_start = -1;
  };
  Live check_liveness(PropId prop) const;

private:
  struct Field {
    SigId sig;
    unsigned width, offset;
  };
  struct Meta {
    std::uint64_t pred = 0, input = 0;
    std::uint32_t depth = 0;
    bool initial = true;
  };
  struct Hit {
    bool found = false;
    std::uint64_t state = 0, input = 0;
    std::uint32_t depth = 0;
  };

  std::uint64_t pack_state(const Valuation& v) const;
  void unpack_state(std::uint64_t key, SimState& st) const;
  void unpack_input(std::uint64_t key, Valuation& v) const;
  Trace path_to(std::uint64_t state, std::uint64_t final_input) const;
  std::vector<Valuation> input_chain(std::uint64_t state) const;

  const Monitored* mon_;
  OracleLimits lim_;
  std::string refusal_;
  std::vector<Field> state_fields_, input_fields_;
  unsigned state_bits_ = 0, input_bits_ = 0;
  bool enumerated_ = false;

  std::unordered_map<std::uint64_t, Meta> states_;
  std::uint64_t n_transitions_ = 0;
  std::vector<Hit> first_bad_;  // per prop id (assert monitors)
  std::vector<Hit> first_goal_; // per prop id (cover monitors)
};

} // namespace wlmc
