#pragma once

#include <string>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/report.hpp"
#include "nocsim/simulation.hpp"

namespace nocsim {

struct SweepJob {
  int rate_index = 0;
  double rate = 0.0;
  int restart = 0;
  std::uint64_t seed = 0;
  std::string out_dir;  // relative to the sweep root
};

struct RunPlan {
  std::vector<SweepJob> jobs;
  int workers = 1;
};

// One deterministic seed per (rate index, restart) derived from the base
// seed; seeds are distinct across jobs.
RunPlan build_plan(const SimulationConfig& sim, std::uint64_t seed_override,
                   int jobs_override = 0);

// Converts the synthetic phase configuration into the schedule for one rate.
InjectionSchedule schedule_for(const SimulationConfig& sim, double rate);

// Runs a single simulation per the config (the first grid rate for
// synthetic traffic) and writes its bundle.
SimulationResult run_single(const ParsedConfig& cfg, const NetworkGraph& graph,
                            const ApplicationSpec* app, const Mapping* mapping,
                            std::uint64_t seed, const std::string& out_dir);

// Full sweep: rate grid x restarts jobs across a worker pool, per-job
// bundles under <out_root>/<job dir> and an aggregated sweep.csv.
void run_sweep(const ParsedConfig& cfg, const NetworkGraph& graph,
               const RunPlan& plan, const std::string& out_root);

}  // namespace nocsim
