// Command-line front end: validate configs, run single simulations, sweep
// injection rates, analyze routing turns and re-evaluate energy.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nocsim/config.hpp"
#include "nocsim/report.hpp"
#include "nocsim/routing.hpp"
#include "nocsim/simulation.hpp"
#include "nocsim/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

struct LoadedSetup {
  nocsim::ParsedConfig cfg;
  nocsim::NetworkGraph graph;
  std::optional<nocsim::ApplicationSpec> app;
  std::optional<nocsim::Mapping> mapping;
};

std::string dir_of(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

LoadedSetup load_setup(const std::string& config_path) {
  LoadedSetup setup;
  setup.cfg =
      nocsim::parse_config(nocsim::read_text_file(config_path), config_path);
  for (const std::string& w : setup.cfg.warnings)
    std::cerr << "warning: " << w << "\n";
  setup.graph = nocsim::load_network(setup.cfg, dir_of(config_path));
  setup.graph.flit_size_bits = setup.cfg.network.flit_size;

  if (setup.cfg.sim.benchmark == nocsim::BenchmarkKind::Task) {
    std::string lib = setup.cfg.sim.task_lib_dir;
    if (!lib.empty() && lib.front() != '/')
      lib = dir_of(config_path) + "/" + lib;
    if (!std::filesystem::is_directory(lib))
      throw nocsim::ConfigError("task libDir is not a directory: " + lib);
    const std::string app_path = lib + "/application.xml";
    const std::string map_path = lib + "/mapping.xml";
    setup.app = nocsim::parse_application(nocsim::read_text_file(app_path),
                                          app_path);
    setup.mapping =
        nocsim::parse_mapping(nocsim::read_text_file(map_path), map_path);
    nocsim::validate_mapping(*setup.mapping, *setup.app, setup.graph);
  }
  return setup;
}

std::uint64_t effective_seed(const LoadedSetup& setup,
                             std::int64_t seed_flag) {
  return seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag)
                        : setup.cfg.sim.seed;
}

int cmd_validate(const std::string& config_path) {
  const LoadedSetup setup = load_setup(config_path);
  std::cout << "config ok: " << setup.graph.routers().size() << " routers, "
            << setup.graph.processing_elements().size() << " PEs, "
            << setup.graph.connection_count() << " connections, "
            << setup.graph.links_of().size() << " unidirectional links\n";
  if (setup.app)
    std::cout << "application: " << setup.app->tasks.size() << " tasks, "
              << setup.app->data_types.size() << " data types\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::int64_t seed_flag) {
  const LoadedSetup setup = load_setup(config_path);
  const std::uint64_t seed = effective_seed(setup, seed_flag);
  const nocsim::SimulationResult result = nocsim::run_single(
      setup.cfg, setup.graph, setup.app ? &*setup.app : nullptr,
      setup.mapping ? &*setup.mapping : nullptr, seed, out_dir);
  std::cout << "run complete: injected " << result.monitors.flits_injected()
            << " flits, ejected " << result.monitors.flits_ejected()
            << ", mean flit latency "
            << nocsim::fmt_g6(result.monitors.latencies().flit.mean_ns())
            << " ns\n";
  std::cout << "reports written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::string out_dir,
              std::int64_t seed_flag, int jobs) {
  const LoadedSetup setup = load_setup(config_path);
  if (out_dir.empty()) out_dir = setup.cfg.sim.synthetic.sim_dir;
  const std::uint64_t seed = effective_seed(setup, seed_flag);
  const nocsim::RunPlan plan = nocsim::build_plan(setup.cfg.sim, seed, jobs);
  std::cout << "sweep: " << plan.jobs.size() << " jobs on "
            << std::max(1, std::min<int>(plan.workers,
                                         static_cast<int>(plan.jobs.size())))
            << " workers\n";
  nocsim::run_sweep(setup.cfg, setup.graph, plan, out_dir);
  std::cout << "aggregate written to " << out_dir << "/sweep.csv\n";
  return kExitOk;
}

int cmd_turns(const std::string& config_path, const std::string& out_dir) {
  const LoadedSetup setup = load_setup(config_path);
  const nocsim::NetworkGraph& graph = setup.graph;

  std::filesystem::create_directories(out_dir);
  std::string mask_csv = "router,input,output\n";
  std::string reduction_csv = "router,x,y,z,ports,allowed_turns,reduction\n";
  double reduction_sum = 0.0;
  int routers = 0;

  // Heterogeneous graphs may mix routing algorithms; enumerate per
  // algorithm once.
  std::map<std::string, std::vector<nocsim::TurnMask>> masks;
  for (const nocsim::NodeRecord& n : graph.nodes()) {
    if (n.kind != nocsim::NodeKind::Router) continue;
    if (!masks.count(n.routing))
      masks[n.routing] = nocsim::allowed_turns_all(
          nocsim::routing_from_string(n.routing), graph);
    const nocsim::TurnMask& mask =
        masks[n.routing][static_cast<std::size_t>(n.id)];
    std::vector<nocsim::Direction> ports;
    for (const nocsim::PortRecord& p : n.ports) ports.push_back(p.dir);
    for (const auto& [in, out] : mask.turns())
      mask_csv += std::to_string(n.id) + "," + nocsim::to_string(in) + "," +
                  nocsim::to_string(out) + "\n";
    const double reduction = nocsim::crossbar_reduction(mask, ports);
    reduction_csv += std::to_string(n.id) + "," +
                     std::to_string(n.position.x) + "," +
                     std::to_string(n.position.y) + "," +
                     std::to_string(n.position.z) + "," +
                     std::to_string(ports.size()) + "," +
                     std::to_string(mask.count()) + "," +
                     nocsim::fmt_g6(reduction) + "\n";
    reduction_sum += reduction;
    ++routers;
  }
  nocsim::write_text_file(out_dir + "/turns_mask.csv", mask_csv);
  nocsim::write_text_file(out_dir + "/turns_reduction.csv", reduction_csv);
  std::cout << "network average crossbar reduction: "
            << nocsim::fmt_g6(routers ? reduction_sum / routers : 0.0) << "\n";
  std::cout << "turn tables written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_energy(const std::string& run_dir, const std::string& coeffs_path,
               std::string out_path) {
  const nocsim::RunArtifacts artifacts = nocsim::read_artifacts(run_dir);

  nocsim::EnergyCoefficients coeffs;
  if (!coeffs_path.empty()) {
    coeffs = nocsim::parse_coefficients_csv(
        nocsim::read_text_file(coeffs_path), coeffs_path);
  } else {
    // Stand-in activities; supply a coefficient file for real technology
    // numbers.
    const std::vector<std::string> colors = artifacts.color_names();
    std::vector<nocsim::ColorActivity> activities(colors.size());
    int flit_size = 32;
    if (auto it = artifacts.meta.find("flit_size_bits");
        it != artifacts.meta.end())
      flit_size = std::stoi(it->second);
    coeffs = nocsim::default_table(
        activities,
        nocsim::LinkStateSpace(static_cast<int>(colors.size())).labels(colors),
        flit_size);
  }

  const nocsim::EnergyReport report =
      nocsim::evaluate_energy(artifacts, coeffs);
  if (out_path.empty()) out_path = run_dir + "/report_Energy.csv";
  nocsim::write_text_file(out_path, nocsim::write_energy_csv(report));
  std::cout << "network energy: " << nocsim::fmt_g6(report.total_pj)
            << " pJ (" << nocsim::fmt_g6(report.pj_per_flit)
            << " pJ/flit), written to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-accurate 3D NoC simulator and analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_out = "report";
  std::string sweep_out;
  std::string turns_out = ".";
  std::string energy_out;
  std::string run_dir;
  std::string coeffs_path;
  std::int64_t seed_flag = -1;
  int jobs = 0;

  CLI::App* validate = app.add_subcommand("validate", "check a configuration");
  validate->add_option("--config", config_path, "config.ini path")->required();

  CLI::App* run = app.add_subcommand("run", "run one simulation");
  run->add_option("--config", config_path, "config.ini path")->required();
  run->add_option("--out", run_out, "report directory");
  run->add_option("--seed", seed_flag, "seed override");

  CLI::App* sweep =
      app.add_subcommand("sweep", "injection-rate sweep with restarts");
  sweep->add_option("--config", config_path, "config.ini path")->required();
  sweep->add_option("--out", sweep_out, "sweep output root (default: simDir)");
  sweep->add_option("--seed", seed_flag, "seed override");
  sweep->add_option("--jobs", jobs, "worker count override (numCores)");

  CLI::App* turns =
      app.add_subcommand("turns", "allowed-turn masks and crossbar reduction");
  turns->add_option("--config", config_path, "config.ini path")->required();
  turns->add_option("--out", turns_out, "output directory");

  CLI::App* energy =
      app.add_subcommand("energy", "re-evaluate energy from a run directory");
  energy->add_option("--run", run_dir, "run directory with reports")
      ->required();
  energy->add_option("--coeffs", coeffs_path, "coefficient csv");
  energy->add_option("--out", energy_out, "output csv path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config_path);
    if (run->parsed()) return cmd_run(config_path, run_out, seed_flag);
    if (sweep->parsed())
      return cmd_sweep(config_path, sweep_out, seed_flag, jobs);
    if (turns->parsed()) return cmd_turns(config_path, turns_out);
    if (energy->parsed()) return cmd_energy(run_dir, coeffs_path, energy_out);
  } catch (const nocsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nocsim::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nocsim::SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
