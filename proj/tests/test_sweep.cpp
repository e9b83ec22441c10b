#include <doctest.h>

#include <filesystem>
#include <set>

#include "helpers.hpp"
#include "nocsim/sweep.hpp"

using namespace nocsim;
using namespace testutil;

namespace {

ParsedConfig sweep_config() {
  ParsedConfig cfg;
  cfg.sim.simulation_time_ns = 1500;
  cfg.sim.flits_per_packet = 4;
  cfg.sim.benchmark = BenchmarkKind::Synthetic;
  cfg.sim.seed = 8;
  cfg.sim.synthetic.restarts = 2;
  cfg.sim.synthetic.run_rate_min = 0.04;
  cfg.sim.synthetic.run_rate_max = 0.08;
  cfg.sim.synthetic.run_rate_step = 0.04;
  cfg.sim.synthetic.run_duration_ns = 1500;
  cfg.sim.synthetic.num_cores = 2;
  return cfg;
}

}  // namespace

TEST_CASE("run plan: grid arithmetic and distinct seeds") {
  ParsedConfig cfg = sweep_config();
  cfg.sim.synthetic.run_rate_min = 0.01;
  cfg.sim.synthetic.run_rate_max = 0.08;
  cfg.sim.synthetic.run_rate_step = 0.01;
  cfg.sim.synthetic.restarts = 10;
  const RunPlan plan = build_plan(cfg.sim, cfg.sim.seed);
  CHECK(plan.jobs.size() == 80);
  std::set<std::uint64_t> seeds;
  std::set<std::string> dirs;
  for (const SweepJob& j : plan.jobs) {
    seeds.insert(j.seed);
    dirs.insert(j.out_dir);
  }
  CHECK(seeds.size() == plan.jobs.size());
  CHECK(dirs.size() == plan.jobs.size());
}

TEST_CASE("sweep: job isolation, one job re-run reproduces its bytes") {
  const ParsedConfig cfg = sweep_config();
  const NetworkGraph g = make_mesh({2}, {2}, {1.0}, "XY", 1, 4);
  const RunPlan plan = build_plan(cfg.sim, cfg.sim.seed, 2);
  REQUIRE(plan.jobs.size() == 4);

  TempDir full("sweep_full"), single("sweep_single");
  run_sweep(cfg, g, plan, full.str());

  RunPlan one;
  one.workers = 1;
  one.jobs.push_back(plan.jobs[2]);
  run_sweep(cfg, g, one, single.str());

  CHECK(trees_identical(full.path / plan.jobs[2].out_dir,
                        single.path / plan.jobs[2].out_dir));
}

TEST_CASE("sweep: a crashing job fails the sweep and names the job") {
  ParsedConfig cfg = sweep_config();
  // XY routing cannot resolve the vertical offsets of a two-layer mesh, so
  // every job aborts with a runtime error.
  const NetworkGraph g = make_mesh({2, 2}, {2, 2}, {1.0, 1.0}, "XY", 1, 4);
  const RunPlan plan = build_plan(cfg.sim, cfg.sim.seed, 1);
  TempDir out("sweep_crash");
  try {
    run_sweep(cfg, g, plan, out.str());
    FAIL("expected the sweep to fail");
  } catch (const SimulationError& e) {
    CHECK(std::string(e.what()).find("rate000_run000") != std::string::npos);
  }
}

TEST_CASE("sweep: requires the synthetic benchmark") {
  ParsedConfig cfg = sweep_config();
  cfg.sim.benchmark = BenchmarkKind::Task;
  const NetworkGraph g = make_mesh({2}, {2}, {1.0}, "XY", 1, 4);
  const RunPlan plan = build_plan(cfg.sim, 1, 1);
  TempDir out("sweep_task");
  CHECK_THROWS_AS(run_sweep(cfg, g, plan, out.str()), ConfigError);
}
