#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nocsim/types.hpp"

namespace nocsim {

// The five dynamic-energy events tracked per router.
enum class RouterEvent : std::uint8_t {
  BufferWrite = 0,
  BufferRead,
  BufferPop,
  RoutingCalc,
  CrossbarTraversal,
};
inline constexpr int kRouterEventCount = 5;
const char* to_string(RouterEvent e);

struct RouterEventCounts {
  std::array<std::int64_t, kRouterEventCount> counts{};

  void add(RouterEvent e) { ++counts[static_cast<std::size_t>(e)]; }
  std::int64_t of(RouterEvent e) const {
    return counts[static_cast<std::size_t>(e)];
  }
};

// Switching-activity descriptor of one color, used by the stand-in
// coefficient generator.
struct ColorActivity {
  double toggle_probability = 0.5;  // alpha, in [0, 1]
  double coupling = 0.0;            // >= 0
};

// Energy cost model: picojoules per router event and per link-state
// transition. Transition entries are indexed [from * states + to] and share
// the matrix state labeling.
struct EnergyCoefficients {
  std::array<double, kRouterEventCount> event_pj{};
  std::vector<std::string> state_labels;
  std::vector<double> transition_pj;  // state_labels.size()^2 entries

  int states() const { return static_cast<int>(state_labels.size()); }
  double transition(int from, int to) const {
    return transition_pj[static_cast<std::size_t>(from) *
                             static_cast<std::size_t>(states()) +
                         static_cast<std::size_t>(to)];
  }
};

// Stand-in table when no technology file is given: transitions into an
// active color state cost flit_size * alpha * (1 + coupling) * unit, into
// the active head state flit_size * 0.5 * unit, into idle states nothing.
// Real per-technology coefficients are supplied via a file instead.
EnergyCoefficients default_table(const std::vector<ColorActivity>& colors,
                                 const std::vector<std::string>& state_labels,
                                 int flit_size_bits, double unit_pj = 1.0);

// csv round trip for coefficient files.
std::string write_coefficients_csv(const EnergyCoefficients& coeffs);
EnergyCoefficients parse_coefficients_csv(std::string_view text,
                                          std::string_view file = "coeffs.csv");

// Linear event-energy sum, fixed iteration order.
double router_energy(const RouterEventCounts& counts,
                     const EnergyCoefficients& coeffs);

// Linear transition-energy sum over a flattened matrix, fixed order.
double link_energy(const std::vector<std::int64_t>& matrix_counts, int states,
                   const EnergyCoefficients& coeffs);

struct EnergyReport {
  std::vector<std::pair<NodeId, double>> router_pj;
  std::vector<std::pair<LinkId, double>> link_pj;
  double routers_total_pj = 0.0;
  double links_total_pj = 0.0;
  double total_pj = 0.0;
  std::int64_t flits_ejected = 0;
  double pj_per_flit = 0.0;
};

}  // namespace nocsim
