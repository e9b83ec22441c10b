#include "nocsim/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <thread>

namespace nocsim {

RunPlan build_plan(const SimulationConfig& sim, std::uint64_t seed,
                   int jobs_override) {
  const std::vector<double> rates = sim.synthetic.rate_grid();
  RunPlan plan;
  plan.workers = jobs_override > 0 ? jobs_override : sim.synthetic.num_cores;
  for (std::size_t r = 0; r < rates.size(); ++r) {
    for (int restart = 0; restart < sim.synthetic.restarts; ++restart) {
      SweepJob job;
      job.rate_index = static_cast<int>(r);
      job.rate = rates[r];
      job.restart = restart;
      job.seed = derive_seed(seed, r + 1, static_cast<std::uint64_t>(restart));
      char name[64];
      std::snprintf(name, sizeof(name), "rate%03d_run%03d",
                    static_cast<int>(r), restart);
      job.out_dir = name;
      plan.jobs.push_back(job);
    }
  }
  return plan;
}

InjectionSchedule schedule_for(const SimulationConfig& sim, double rate) {
  const SyntheticConfig& s = sim.synthetic;
  InjectionSchedule sched;
  sched.warmup_start = s.warmup_start_ns * kPsPerNs;
  sched.warmup_end = (s.warmup_start_ns + s.warmup_duration_ns) * kPsPerNs;
  sched.warmup_rate = s.warmup_rate;
  sched.run_start = s.run_start_ns() * kPsPerNs;
  sched.run_end = (s.run_start_ns() + s.run_duration_ns) * kPsPerNs;
  sched.run_rate = rate;
  return sched;
}

namespace {

SimulationResult run_one(const ParsedConfig& cfg, const NetworkGraph& graph,
                         const ApplicationSpec* app, const Mapping* mapping,
                         double rate, std::uint64_t seed,
                         const std::string& out_dir) {
  SimulationOptions options;
  options.graph = &graph;
  options.sim_time_ps = cfg.sim.simulation_time_ns * kPsPerNs;
  options.flits_per_packet = cfg.sim.flits_per_packet;
  options.seed = seed;
  options.benchmark = cfg.sim.benchmark;
  if (cfg.sim.benchmark == BenchmarkKind::Synthetic) {
    options.schedule = schedule_for(cfg.sim, rate);
    options.measure_from = options.schedule.run_start;
    options.measure_to = options.schedule.run_end;
  } else {
    options.app = app;
    options.mapping = mapping;
  }

  SimulationResult result = run_simulation(options);

  WriteInfo info;
  info.simulation_time_ns = cfg.sim.simulation_time_ns;
  info.seed = seed;
  info.report_routers = cfg.sim.report_routers;
  write_bundle(result, graph, info, out_dir);
  return result;
}

}  // namespace

SimulationResult run_single(const ParsedConfig& cfg, const NetworkGraph& graph,
                            const ApplicationSpec* app, const Mapping* mapping,
                            std::uint64_t seed, const std::string& out_dir) {
  const double rate = cfg.sim.synthetic.run_rate_min;
  return run_one(cfg, graph, app, mapping, rate, seed, out_dir);
}

void run_sweep(const ParsedConfig& cfg, const NetworkGraph& graph,
               const RunPlan& plan, const std::string& out_root) {
  if (cfg.sim.benchmark != BenchmarkKind::Synthetic)
    throw ConfigError("sweep requires the synthetic benchmark");
  std::error_code ec;
  std::filesystem::create_directories(out_root, ec);
  if (ec) throw IoError("cannot create sweep directory: " + out_root);

  std::vector<SweepRunSummary> summaries(plan.jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.jobs.size()) return;
      const SweepJob& job = plan.jobs[i];
      try {
        const SimulationResult result =
            run_one(cfg, graph, nullptr, nullptr, job.rate, job.seed,
                    out_root + "/" + job.out_dir);
        SweepRunSummary s;
        s.rate_index = job.rate_index;
        s.rate = job.rate;
        s.restart = job.restart;
        s.flit_mean_ns = result.monitors.latencies().flit.mean_ns();
        s.packet_mean_ns = result.monitors.latencies().packet.mean_ns();
        s.network_mean_ns = result.monitors.latencies().network.mean_ns();
        summaries[i] = s;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty())
          first_error = "job " + job.out_dir + " failed: " + e.what();
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(plan.workers,
                                static_cast<int>(plan.jobs.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  if (!first_error.empty()) throw SimulationError(first_error);

  write_text_file(out_root + "/sweep.csv", aggregate_sweep(summaries));
}

}  // namespace nocsim
