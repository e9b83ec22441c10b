#pragma once

#include <memory>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/interface.hpp"
#include "nocsim/kernel.hpp"
#include "nocsim/monitor.hpp"
#include "nocsim/power.hpp"
#include "nocsim/router.hpp"
#include "nocsim/topology.hpp"
#include "nocsim/traffic.hpp"

namespace nocsim {

struct SimulationOptions {
  const NetworkGraph* graph = nullptr;
  SimTime sim_time_ps = 0;
  int flits_per_packet = 1;
  std::uint64_t seed = 0;

  BenchmarkKind benchmark = BenchmarkKind::Synthetic;
  InjectionSchedule schedule;               // synthetic traffic phases
  const ApplicationSpec* app = nullptr;     // task benchmark
  const Mapping* mapping = nullptr;

  // Latency statistics window (defaults to the whole run).
  SimTime measure_from = 0;
  SimTime measure_to = std::int64_t{1} << 62;

  // Instrumentation: per-cycle credit conservation, per-traversal turn
  // checks against the enumerated masks.
  bool check_credits = false;
  bool check_turns = false;
};

struct SimulationResult {
  SimulationOutcome outcome;
  Monitors monitors;
  std::vector<RouterEventCounts> events;  // indexed by node id
  std::vector<LinkRecord> links;
  std::int64_t resident_flits = 0;        // buffers + in-network registers

  // Token accounting (task benchmark).
  std::int64_t tokens_delivered = 0;
  std::int64_t tokens_consumed = 0;
  std::int64_t tokens_held = 0;
};

// Builds the network from the graph, runs the event loop until sim_time and
// verifies flit conservation at the end. Single-threaded; independent
// instances may run on separate threads.
SimulationResult run_simulation(const SimulationOptions& options);

// Zero-load closed form of the pipeline: per hop a flit is processed by two
// router cycles and spends one cycle on the link.
inline constexpr std::int64_t kHopCycles = 3;
inline SimTime zero_load_network_latency(int router_hops, int packet_length,
                                         SimTime period_ps) {
  return (kHopCycles * router_hops + (packet_length - 1)) * period_ps;
}

}  // namespace nocsim
