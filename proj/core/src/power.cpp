#include "nocsim/power.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace nocsim {

const char* to_string(RouterEvent e) {
  switch (e) {
    case RouterEvent::BufferWrite: return "buffer_write";
    case RouterEvent::BufferRead: return "buffer_read";
    case RouterEvent::BufferPop: return "buffer_pop";
    case RouterEvent::RoutingCalc: return "routing_calc";
    case RouterEvent::CrossbarTraversal: return "crossbar_traversal";
  }
  return "?";
}

EnergyCoefficients default_table(const std::vector<ColorActivity>& colors,
                                 const std::vector<std::string>& state_labels,
                                 int flit_size_bits, double unit_pj) {
  const int states = static_cast<int>(state_labels.size());
  if (states != 2 * static_cast<int>(colors.size()) + 3)
    throw ConfigError("state labels do not match the color count");
  for (const ColorActivity& c : colors) {
    if (c.toggle_probability < 0.0 || c.toggle_probability > 1.0)
      throw ConfigError("toggle probability must be in [0, 1]");
    if (c.coupling < 0.0) throw ConfigError("coupling must be >= 0");
  }

  EnergyCoefficients out;
  out.state_labels = state_labels;
  out.transition_pj.assign(
      static_cast<std::size_t>(states) * static_cast<std::size_t>(states), 0.0);
  const double bits = static_cast<double>(flit_size_bits);

  // Cost depends only on the target state: what just crossed the wire.
  std::vector<double> into(static_cast<std::size_t>(states), 0.0);
  into[1] = bits * 0.5 * unit_pj;  // head flits: address-like content
  for (std::size_t c = 0; c < colors.size(); ++c)
    into[3 + 2 * c] = bits * colors[c].toggle_probability *
                      (1.0 + colors[c].coupling) * unit_pj;

  for (int from = 0; from < states; ++from)
    for (int to = 0; to < states; ++to)
      out.transition_pj[static_cast<std::size_t>(from) *
                            static_cast<std::size_t>(states) +
                        static_cast<std::size_t>(to)] =
          into[static_cast<std::size_t>(to)];

  // Modest defaults for router events, scaled by flit width.
  out.event_pj[0] = 0.50 * bits / 32.0;  // buffer write
  out.event_pj[1] = 0.35 * bits / 32.0;  // buffer read
  out.event_pj[2] = 0.05 * bits / 32.0;  // buffer pop
  out.event_pj[3] = 0.20;                // routing calculation
  out.event_pj[4] = 0.30 * bits / 32.0;  // crossbar traversal
  return out;
}

std::string write_coefficients_csv(const EnergyCoefficients& coeffs) {
  std::ostringstream out;
  out.precision(17);
  out << "kind,from,to,pj\n";
  for (int e = 0; e < kRouterEventCount; ++e)
    out << "event," << to_string(static_cast<RouterEvent>(e)) << ",,"
        << coeffs.event_pj[static_cast<std::size_t>(e)] << "\n";
  const int states = coeffs.states();
  for (int from = 0; from < states; ++from)
    for (int to = 0; to < states; ++to)
      out << "transition," << coeffs.state_labels[static_cast<std::size_t>(from)]
          << "," << coeffs.state_labels[static_cast<std::size_t>(to)] << ","
          << coeffs.transition(from, to) << "\n";
  return out.str();
}

EnergyCoefficients parse_coefficients_csv(std::string_view text,
                                          std::string_view file) {
  EnergyCoefficients out;
  std::map<std::string, int> label_index;
  struct Row {
    std::string from, to;
    double pj;
  };
  std::vector<Row> transitions;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_skipped = false;
  std::array<bool, kRouterEventCount> have_event{};
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (c != '\r') {
        cell.push_back(c);
      }
    }
    cells.push_back(cell);
    if (!header_skipped && cells[0] == "kind") {
      header_skipped = true;
      continue;
    }
    if (cells.size() != 4)
      throw ConfigError(std::string(file) + ":" + std::to_string(line_no) +
                        ": expected kind,from,to,pj");
    double pj = 0.0;
    try {
      pj = std::stod(cells[3]);
    } catch (const std::exception&) {
      throw ConfigError(std::string(file) + ":" + std::to_string(line_no) +
                        ": bad energy value '" + cells[3] + "'");
    }
    if (pj < 0.0)
      throw ConfigError(std::string(file) + ":" + std::to_string(line_no) +
                        ": coefficients must be >= 0");
    if (cells[0] == "event") {
      bool found = false;
      for (int e = 0; e < kRouterEventCount; ++e) {
        if (cells[1] == to_string(static_cast<RouterEvent>(e))) {
          out.event_pj[static_cast<std::size_t>(e)] = pj;
          have_event[static_cast<std::size_t>(e)] = true;
          found = true;
        }
      }
      if (!found)
        throw ConfigError(std::string(file) + ":" + std::to_string(line_no) +
                          ": unknown event '" + cells[1] + "'");
    } else if (cells[0] == "transition") {
      for (const std::string& label : {cells[1], cells[2]})
        if (!label_index.count(label)) {
          const int idx = static_cast<int>(out.state_labels.size());
          label_index[label] = idx;
          out.state_labels.push_back(label);
        }
      transitions.push_back(Row{cells[1], cells[2], pj});
    } else {
      throw ConfigError(std::string(file) + ":" + std::to_string(line_no) +
                        ": unknown row kind '" + cells[0] + "'");
    }
  }
  for (int e = 0; e < kRouterEventCount; ++e)
    if (!have_event[static_cast<std::size_t>(e)])
      throw ConfigError(std::string(file) + ": missing coefficient for event " +
                        to_string(static_cast<RouterEvent>(e)));
  const int states = out.states();
  out.transition_pj.assign(
      static_cast<std::size_t>(states) * static_cast<std::size_t>(states), 0.0);
  for (const Row& r : transitions)
    out.transition_pj[static_cast<std::size_t>(label_index.at(r.from)) *
                          static_cast<std::size_t>(states) +
                      static_cast<std::size_t>(label_index.at(r.to))] = r.pj;
  return out;
}

double router_energy(const RouterEventCounts& counts,
                     const EnergyCoefficients& coeffs) {
  double total = 0.0;
  for (int e = 0; e < kRouterEventCount; ++e)
    total += static_cast<double>(counts.counts[static_cast<std::size_t>(e)]) *
             coeffs.event_pj[static_cast<std::size_t>(e)];
  return total;
}

double link_energy(const std::vector<std::int64_t>& matrix_counts, int states,
                   const EnergyCoefficients& coeffs) {
  if (states != coeffs.states())
    throw ConfigError("state-set mismatch: matrix has " +
                      std::to_string(states) + " states, table has " +
                      std::to_string(coeffs.states()));
  if (matrix_counts.size() !=
      static_cast<std::size_t>(states) * static_cast<std::size_t>(states))
    throw ConfigError("matrix size does not match its state count");
  double total = 0.0;
  for (std::size_t i = 0; i < matrix_counts.size(); ++i)
    total += static_cast<double>(matrix_counts[i]) * coeffs.transition_pj[i];
  return total;
}

}  // namespace nocsim
