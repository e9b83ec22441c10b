#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nocsim/power.hpp"
#include "nocsim/simulation.hpp"

namespace nocsim {

// Fixed-width float formatting (6 significant digits) so reports are
// byte-stable across runs.
std::string fmt_g6(double v);

struct WriteInfo {
  std::int64_t simulation_time_ns = 0;
  std::uint64_t seed = 0;
  std::vector<NodeId> report_routers;  // empty = all routers
  std::optional<EnergyCoefficients> coefficients;
};

// Writes the full report family into out_dir: report.txt,
// report_Links.csv, report_Routers_Power.csv, run_meta.csv, VCUsage/ and
// BuffUsage/ (per reported router plus per-layer averages).
void write_bundle(const SimulationResult& result, const NetworkGraph& graph,
                  const WriteInfo& info, const std::string& out_dir);

// A run directory parsed back for post-simulation energy evaluation.
struct RunArtifacts {
  struct LinkData {
    LinkId id = -1;
    NodeId driver = kInvalidNode;
    std::string driver_port;
    NodeId sink = kInvalidNode;
    std::int64_t cycles = 0;
    std::int64_t flits = 0;
    std::vector<std::int64_t> counts;  // states x states
  };
  std::vector<std::string> state_labels;
  std::vector<LinkData> links;
  std::vector<std::pair<NodeId, RouterEventCounts>> routers;
  std::map<std::string, std::string> meta;

  std::int64_t flits_ejected() const;
  std::vector<std::string> color_names() const;
};

RunArtifacts read_artifacts(const std::string& run_dir);

// Post-run energy evaluation: no simulation state needed, only artifacts.
EnergyReport evaluate_energy(const RunArtifacts& artifacts,
                             const EnergyCoefficients& coeffs);

std::string write_energy_csv(const EnergyReport& report);

// --- Sweep aggregation -------------------------------------------------

struct SweepRunSummary {
  int rate_index = 0;
  double rate = 0.0;
  int restart = 0;
  double flit_mean_ns = 0.0;
  double packet_mean_ns = 0.0;
  double network_mean_ns = 0.0;
};

// Per rate point: mean, median and standard deviation of the per-run mean
// latencies across restarts, ordered by rate.
std::string aggregate_sweep(std::vector<SweepRunSummary> runs);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace nocsim
