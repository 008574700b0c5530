#include "wlmc/trace.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace wlmc {

std::string trace_to_text(const Netlist& n, const Trace& t) {
  std::vector<std::pair<std::string, SigId>> order;
  order.reserve(n.sigs.size());
  for (SigId s = 0; s < n.sigs.size(); ++s) order.emplace_back(n.sigs[s].name, s);
  std::sort(order.begin(), order.end());

  std::ostringstream os;
  os << "#cycles=" << t.cycles.size() << '\n';
  os << std::hex;
  for (std::size_t c = 0; c < t.cycles.size(); ++c)
    for (const auto& [name, s] : order)
      os << std::dec << c << std::hex << ' ' << name << ' ' << t.cycles[c][s] << '\n';
  return os.str();
}

ParsedTrace trace_from_text(const std::string& text) {
  ParsedTrace r;
  std::istringstream is(text);
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!have_header) {
      if (line.rfind("#cycles=", 0) != 0) {
        r.error = "line 1: expected #cycles=<n>";
        return r;
      }
      const char* b = line.data() + 8;
      const char* e = line.data() + line.size();
      auto [p, ec] = std::from_chars(b, e, r.n_cycles);
      if (ec != std::errc() || p != e) {
        r.error = "line 1: bad cycle count";
        return r;
      }
      r.rows.resize(r.n_cycles);
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::size_t cycle;
    std::string name, hex;
    if (!(ls >> cycle >> name >> hex) || !(ls >> std::ws).eof()) {
      r.error = "line " + std::to_string(lineno) + ": expected <cycle> <name> <hex>";
      return r;
    }
    if (cycle >= r.n_cycles) {
      r.error = "line " + std::to_string(lineno) + ": cycle out of range";
      return r;
    }
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
    if (ec != std::errc() || p != hex.data() + hex.size()) {
      r.error = "line " + std::to_string(lineno) + ": bad hex value";
      return r;
    }
    r.rows[cycle].emplace_back(name, v);
  }
  if (!have_header) {
    r.error = "empty trace";
    return r;
  }
  r.ok = true;
  return r;
}

Trace simulate(const Netlist& n, const SimState& init,
               const std::vector<Valuation>& inputs) {
  Trace t;
  t.cycles.reserve(inputs.size());
  Evaluator ev(n);
  SimState st = init;
  SimState next;
  for (const Valuation& in : inputs) {
    t.cycles.push_back(ev.run(st, in));
    ev.step_into(st, next);
    std::swap(st, next);
  }
  return t;
}

bool trace_bit(const Netlist& n, const Trace& t, SigId sig, std::size_t cycle) {
  (void)n;
  return cycle < t.cycles.size() && (t.cycles[cycle][sig] & 1) != 0;
}

} // namespace wlmc
