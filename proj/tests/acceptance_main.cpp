// Acceptance suite: one checkable criterion per function, each printing a
// single pass/fail line. Run all or a single one with --criterion N.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "nocsim/report.hpp"
#include "nocsim/routing.hpp"
#include "nocsim/rng.hpp"
#include "nocsim/simulation.hpp"
#include "nocsim/sweep.hpp"

using namespace nocsim;
using namespace testutil;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

std::string fmt(double v) { return fmt_g6(v); }

// --- shared fixtures -------------------------------------------------------

SimulationResult synthetic_run(const NetworkGraph& g, SimTime sim_ns,
                               double rate, int fpp, std::uint64_t seed,
                               SimTime warmup_ns = 0, bool checks = false) {
  SimulationOptions o;
  o.graph = &g;
  o.sim_time_ps = sim_ns * kPsPerNs;
  o.flits_per_packet = fpp;
  o.seed = seed;
  o.schedule.warmup_start = 0;
  o.schedule.warmup_end = warmup_ns * kPsPerNs;
  o.schedule.warmup_rate = rate;
  o.schedule.run_start = warmup_ns * kPsPerNs;
  o.schedule.run_end = o.sim_time_ps;
  o.schedule.run_rate = rate;
  o.measure_from = o.schedule.run_start;
  o.measure_to = o.schedule.run_end;
  o.check_credits = checks;
  o.check_turns = checks;
  return run_simulation(o);
}

// Two merged colored streams through one router onto one link, the matrix
// toy setup: 18-flit packets every 32 ns (0.5625 flits/cycle) and every
// 96 ns (0.1875 flits/cycle), one virtual channel.
struct ToyRun {
  NetworkGraph graph;
  SimulationResult result;
  LinkId merged_link;
};

ToyRun two_stream_toy(SimTime sim_ns, int vcs, std::uint64_t seed) {
  ToyRun toy{make_mesh({2}, {1}, {1.0}, "XY", vcs, 8), SimulationResult{}, -1};
  const std::int64_t n1 = sim_ns / 32 + 2;
  const std::int64_t n2 = sim_ns / 96 + 2;
  static ApplicationSpec app;
  app = make_app({{0, 2, 0, 1, n1, 32}, {1, 2, 1, 1, n2, 96}}, 3, 2);
  static Mapping mapping;
  mapping.clear();
  const auto pes = toy.graph.processing_elements();
  mapping.push_back({0, pes[0]});
  mapping.push_back({1, pes[0]});
  mapping.push_back({2, pes[1]});

  SimulationOptions o;
  o.graph = &toy.graph;
  o.sim_time_ps = sim_ns * kPsPerNs;
  o.flits_per_packet = 18;
  o.seed = seed;
  o.benchmark = BenchmarkKind::Task;
  o.app = &app;
  o.mapping = &mapping;
  toy.result = run_simulation(o);
  for (const LinkRecord& l : toy.result.links)
    if (l.driver == 0 && l.driver_dir == Direction::East) toy.merged_link = l.id;
  return toy;
}

double zero_load_baseline_444(int fpp, std::uint64_t seed) {
  const NetworkGraph g =
      make_mesh({4, 4, 4}, {4, 4, 4}, {1.0, 1.0, 1.0}, "XYZ", 4, 4);
  const SimulationResult r = synthetic_run(g, 20000, 0.002, fpp, seed, 2000);
  require(r.monitors.latencies().flit.count() > 100,
          "zero-load baseline needs delivered flits");
  return r.monitors.latencies().flit.mean_ns();
}

// --- criteria --------------------------------------------------------------

std::string criterion_1_saturation() {
  const NetworkGraph g =
      make_mesh({4, 4, 4}, {4, 4, 4}, {1.0, 1.0, 1.0}, "XYZ", 4, 4);
  const double zero_load = zero_load_baseline_444(32, 41);

  const SimulationResult below =
      synthetic_run(g, 60000, 0.05, 32, 42, 10000);
  const double lat_005 = below.monitors.latencies().flit.mean_ns();

  const SimulationResult above =
      synthetic_run(g, 60000, 0.08, 32, 43, 10000);
  const double lat_008 = above.monitors.latencies().flit.mean_ns();

  require(lat_005 <= 3.0 * zero_load,
          "flit latency at 0.05 is " + fmt(lat_005) + " ns, above 3x zero-load " +
              fmt(zero_load));
  if (lat_008 < 10.0 * zero_load) {
    // Report where the implemented router actually saturates so the curve
    // shape is visible alongside the failed threshold.
    const SimulationResult deep =
        synthetic_run(g, 60000, 0.65, 32, 44, 10000);
    const double lat_065 = deep.monitors.latencies().flit.mean_ns();
    require(false,
            "flit latency at 0.08 is " + fmt(lat_008) +
                " ns, below 10x zero-load (" + fmt(10.0 * zero_load) +
                " ns); this single-cycle separable-allocation router "
                "saturates near 0.6 flits/cycle instead (measured 0.65 -> " +
                fmt(lat_065) + " ns)");
  }
  return "zero-load " + fmt(zero_load) + " ns, 0.05 -> " + fmt(lat_005) +
         " ns (<= 3x), 0.08 -> " + fmt(lat_008) + " ns (>= 10x)";
}

std::string criterion_2_two_stream_matrix() {
  const ToyRun toy = two_stream_toy(100000, 1, 7);
  const LinkMonitor& mon =
      toy.result.monitors.links()[static_cast<std::size_t>(toy.merged_link)];
  const LinkStateSpace& space = mon.space();
  const int states = space.size();
  const auto normalized = mon.normalized();
  auto at = [&](int i, int j) {
    return normalized[static_cast<std::size_t>(i) *
                          static_cast<std::size_t>(states) +
                      static_cast<std::size_t>(j)];
  };

  double mass0 = 0.0, mass1 = 0.0;
  for (int from = 0; from < states; ++from) {
    mass0 += at(from, space.color_active(0));
    mass1 += at(from, space.color_active(1));
  }
  const double ratio = mass0 / mass1;
  require(std::abs(ratio - 3.0) <= 0.15,
          "active-state mass ratio " + fmt(ratio) + " outside 3:1 +-5%");

  const double dominant = at(space.color_active(0), space.color_active(0));
  for (int i = 0; i < states; ++i)
    for (int j = 0; j < states; ++j)
      if (!(i == space.color_active(0) && j == space.color_active(0)))
        require(dominant >= at(i, j),
                "matrix not dominated by the first color's self transition");
  return "mass ratio " + fmt(ratio) + ":1, dominant self-transition " +
         fmt(dominant);
}

std::string criterion_3_matrix_stochasticity() {
  // Every emitted matrix of two 1-VC runs: the colored toy and a uniform
  // random 2x2.
  std::vector<const LinkMonitor*> monitors;
  const ToyRun toy = two_stream_toy(30000, 1, 11);
  for (const LinkMonitor& m : toy.result.monitors.links())
    monitors.push_back(&m);
  const NetworkGraph mesh22 = make_mesh({2}, {2}, {1.0}, "XY", 1, 4);
  const SimulationResult uniform =
      synthetic_run(mesh22, 20000, 0.2, 4, 13);
  for (const LinkMonitor& m : uniform.monitors.links()) monitors.push_back(&m);

  for (const LinkMonitor* m : monitors) {
    const int states = m->space().size();
    const auto normalized = m->normalized();
    double total = 0.0;
    for (double v : normalized) total += v;
    require(std::abs(total - 1.0) <= 1e-9,
            "normalized matrix sums to " + fmt(total));
    for (int s = 0; s < states; ++s) {
      std::int64_t row = 0, col = 0;
      for (int t = 0; t < states; ++t) {
        row += m->count(s, t);
        col += m->count(t, s);
      }
      require(std::llabs(row - col) <= 1, "chain balance broken");
    }
    // Structural zeros with one VC: no color switches without a head.
    for (int a = 0; a < m->space().colors(); ++a)
      for (int b = 0; b < m->space().colors(); ++b)
        if (a != b)
          require(m->count(m->space().color_active(a),
                           m->space().color_active(b)) == 0,
                  "structural zero violated");
  }
  return std::to_string(monitors.size()) + " matrices: sum 1 +-1e-9, " +
         "balance <= 1, structural zeros exact";
}

std::string criterion_4_conservation() {
  Rng rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const int z = 1 + static_cast<int>(rng.below(2));
    const int x = 1 + static_cast<int>(rng.below(3));
    const int y = 1 + static_cast<int>(rng.below(3));
    std::vector<int> xs(static_cast<std::size_t>(z), x);
    std::vector<int> ys(static_cast<std::size_t>(z), y);
    std::vector<double> clocks;
    for (int l = 0; l < z; ++l)
      clocks.push_back(1.0 + static_cast<double>(rng.below(3)));
    const NetworkGraph g = make_mesh(xs, ys, clocks, z > 1 ? "XYZ" : "XY",
                                     1 + static_cast<int>(rng.below(4)),
                                     1 + static_cast<int>(rng.below(8)));
    SimulationOptions o;
    o.graph = &g;
    o.sim_time_ps = (300 + static_cast<SimTime>(rng.below(1200))) * kPsPerNs;
    o.flits_per_packet = 1 + static_cast<int>(rng.below(8));
    o.seed = rng.next_u64();
    o.schedule.run_start = 0;
    o.schedule.run_end = o.sim_time_ps;
    o.schedule.run_rate = 0.4 * rng.real01();
    const SimulationResult r = run_simulation(o);
    require(r.monitors.flits_injected() ==
                r.monitors.flits_ejected() + r.resident_flits,
            "conservation broken in randomized trial " + std::to_string(trial));
  }
  return "100 randomized configurations, injected = ejected + resident exact";
}

std::string criterion_5_credit_soundness() {
  const NetworkGraph g = make_mesh({2}, {2}, {1.0}, "XY", 2, 4);
  SimulationOptions o;
  o.graph = &g;
  o.sim_time_ps = 10000 * kPsPerNs;
  o.flits_per_packet = 8;
  o.seed = 5;
  o.schedule.run_start = 0;
  o.schedule.run_end = o.sim_time_ps;
  o.schedule.run_rate = 0.3;
  o.check_credits = true;  // throws on the first violated cycle
  const SimulationResult r = run_simulation(o);
  require(r.monitors.flits_injected() > 1000, "run carried too little traffic");
  return "occupancy + credits + in-flight = depth on every (link, vc) over "
         "10k cycles";
}

std::string criterion_6_zero_load_oracle() {
  const NetworkGraph g = make_mesh({2}, {1}, {1.0}, "XY", 1, 4);
  const ApplicationSpec app = make_app({{0, 1, 0, 1, 1, 0}}, 2, 1);
  Mapping mapping;
  mapping.push_back({0, g.processing_elements()[0]});
  mapping.push_back({1, g.processing_elements()[1]});
  SimulationOptions o;
  o.graph = &g;
  o.sim_time_ps = 100 * kPsPerNs;
  o.flits_per_packet = 1;
  o.seed = 3;
  o.benchmark = BenchmarkKind::Task;
  o.app = &app;
  o.mapping = &mapping;
  const SimulationResult r = run_simulation(o);
  require(r.monitors.latencies().network.count() == 1, "expected one packet");
  const double measured = r.monitors.latencies().network.mean_ns();
  const double closed_form =
      static_cast<double>(zero_load_network_latency(2, 1, 1000)) / kPsPerNs;
  require(measured == closed_form,
          "head latency " + fmt(measured) + " ns != closed form " +
              fmt(closed_form) + " ns");
  return "measured head latency " + fmt(measured) +
         " ns equals 2 hops x (2 router cycles + 1 link cycle) exactly";
}

TurnMask analytic_xyz_mask(const NetworkGraph& g, NodeId router) {
  const NodeRecord& n = g.node(router);
  auto has = [&](Direction d) { return n.port(d) != nullptr; };
  TurnMask mask;
  auto allow = [&](Direction in, Direction out) {
    if (in != Direction::Local && !has(in)) return;
    if (out != Direction::Local && !has(out)) return;
    if (in == out) return;
    mask.allow(in, out);
  };
  // Injection reaches any populated direction.
  for (Direction d : {Direction::East, Direction::West, Direction::North,
                      Direction::South, Direction::Up, Direction::Down})
    allow(Direction::Local, d);
  // x phase continues or turns to y, z, or ejects.
  for (Direction in : {Direction::East, Direction::West})
    for (Direction out :
         {opposite(in), Direction::North, Direction::South, Direction::Up,
          Direction::Down, Direction::Local})
      allow(in, out);
  // y phase continues or turns to z, or ejects.
  for (Direction in : {Direction::North, Direction::South})
    for (Direction out :
         {opposite(in), Direction::Up, Direction::Down, Direction::Local})
      allow(in, out);
  // z phase only continues or ejects.
  for (Direction in : {Direction::Up, Direction::Down})
    for (Direction out : {opposite(in), Direction::Local}) allow(in, out);
  return mask;
}

std::string criterion_7_turn_analysis() {
  const NetworkGraph g =
      make_mesh({4, 4, 4}, {4, 4, 4}, {1.0, 1.0, 1.0}, "XYZ", 1, 2);
  const auto xyz = allowed_turns_all(RoutingAlgorithm::XYZ, g);
  const auto zfirst = allowed_turns_all(RoutingAlgorithm::ZPlusXYZMinus, g);
  for (NodeId r : g.routers()) {
    const TurnMask analytic = analytic_xyz_mask(g, r);
    const TurnMask& enumerated = xyz[static_cast<std::size_t>(r)];
    for (Direction in : kAllDirections)
      for (Direction out : kAllDirections)
        require(enumerated.allowed(in, out) == analytic.allowed(in, out),
                "XYZ mask mismatch at router " + std::to_string(r) + " " +
                    std::string(to_string(in)) + "->" + to_string(out));
    require(zfirst[static_cast<std::size_t>(r)].count() <=
                enumerated.count(),
            "vertical-first mask larger than XYZ at router " +
                std::to_string(r));
  }
  // Table 2's absolute uW/um^2 need synthesis; the mask ordering stands in.
  return "XYZ enumeration == analytic rule on all 64 routers; |Z+(XY)Z-| <= "
         "|XYZ| per router";
}

std::string criterion_8_energy() {
  // Exact linearity.
  RouterEventCounts counts;
  counts.counts = {10, 10, 10, 2, 10};
  EnergyCoefficients unit;
  unit.event_pj.fill(1.0);
  unit.state_labels = LinkStateSpace(1).labels({"data"});
  unit.transition_pj.assign(25, 0.0);
  require(router_energy(counts, unit) == 42.0, "hand-computed sum mismatch");

  // Post-hoc evaluation: two tables over one run directory change energy
  // without touching any matrix bytes.
  TempDir dir("accept_energy");
  const ToyRun toy = two_stream_toy(20000, 1, 17);
  WriteInfo info;
  info.simulation_time_ns = 20000;
  info.seed = 17;
  write_bundle(toy.result, toy.graph, info, dir.str());
  const std::string links_before = read_file(dir.path / "report_Links.csv");

  const RunArtifacts art = read_artifacts(dir.str());
  std::vector<ColorActivity> act_a{{0.5, 0.0}, {0.5, 0.0}};
  std::vector<ColorActivity> act_b{{0.1, 2.0}, {0.9, 0.5}};
  const EnergyCoefficients table_a =
      default_table(act_a, art.state_labels, 32);
  const EnergyCoefficients table_b =
      default_table(act_b, art.state_labels, 32);
  const EnergyReport report_a = evaluate_energy(art, table_a);
  const EnergyReport report_b = evaluate_energy(art, table_b);
  require(report_a.total_pj != report_b.total_pj,
          "different tables gave identical energy");
  require(read_file(dir.path / "report_Links.csv") == links_before,
          "matrix file changed by energy evaluation");

  // Interleaving sensitivity: with four VCs two colored streams interleave
  // on the shared links, so cross-color transitions appear and a table
  // that charges them yields strictly more energy per flit than the 1-VC
  // run of the same workload (direction of Table 3).
  auto pj_per_flit = [&](int vcs) {
    const ToyRun run = two_stream_toy(30000, vcs, 23);
    EnergyCoefficients cross;
    cross.event_pj.fill(0.0);
    cross.state_labels = LinkStateSpace(2).labels({"c0", "c1"});
    const int states = static_cast<int>(cross.state_labels.size());
    cross.transition_pj.assign(
        static_cast<std::size_t>(states) * static_cast<std::size_t>(states),
        0.0);
    const LinkStateSpace space(2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (a != b)
          cross.transition_pj[static_cast<std::size_t>(space.color_active(a)) *
                                  static_cast<std::size_t>(states) +
                              static_cast<std::size_t>(space.color_active(b))] =
              10.0;
    double total = 0.0;
    for (const LinkMonitor& m : run.result.monitors.links())
      total += link_energy(m.counts(), states, cross);
    return total / static_cast<double>(run.result.monitors.flits_ejected());
  };
  const double one_vc = pj_per_flit(1);
  const double four_vc = pj_per_flit(4);
  require(four_vc > one_vc,
          "4-VC energy/flit " + fmt(four_vc) + " not above 1-VC " + fmt(one_vc));
  return "linear sum exact; post-hoc tables change energy, matrices "
         "byte-identical; 4-VC " +
         fmt(four_vc) + " pJ/flit > 1-VC " + fmt(one_vc) + " pJ/flit";
}

std::string criterion_9_sweep_determinism() {
  ParsedConfig cfg;
  cfg.sim.simulation_time_ns = 2000;
  cfg.sim.flits_per_packet = 4;
  cfg.sim.benchmark = BenchmarkKind::Synthetic;
  cfg.sim.seed = 12;
  cfg.sim.synthetic.restarts = 2;
  cfg.sim.synthetic.run_rate_min = 0.05;
  cfg.sim.synthetic.run_rate_max = 0.10;
  cfg.sim.synthetic.run_rate_step = 0.05;
  cfg.sim.synthetic.run_duration_ns = 2000;
  cfg.sim.synthetic.num_cores = 2;
  const NetworkGraph g = make_mesh({2}, {2}, {1.0}, "XY", 2, 4);

  TempDir a("sweep_a"), b("sweep_b");
  const RunPlan plan = build_plan(cfg.sim, cfg.sim.seed, 2);
  require(plan.jobs.size() == 4, "expected 2 rates x 2 restarts");
  run_sweep(cfg, g, plan, a.str());
  run_sweep(cfg, g, plan, b.str());
  require(trees_identical(a.path, b.path),
          "sweep trees differ between identical runs");
  return "two parallel sweeps (4 jobs, 2 workers) byte-identical, "
         "sweep.csv included";
}

std::string criterion_10_heterogeneous_clocks() {
  const NetworkGraph g = make_mesh({2, 2}, {2, 2}, {1.0, 2.0}, "XYZ", 2, 4);
  // Task flood straight up through one vertical link.
  const SimTime sim_ns = 10000;
  static ApplicationSpec app;
  app = make_app({{0, 1, 0, 1, sim_ns / 8 + 4, 8}}, 2, 1);
  static Mapping mapping;
  mapping.clear();
  const auto pes = g.processing_elements();
  mapping.push_back({0, pes[0]});  // PE above router (0,0,0)
  mapping.push_back({1, pes[4]});  // PE above router (0,0,1)

  SimulationOptions o;
  o.graph = &g;
  o.sim_time_ps = sim_ns * kPsPerNs;
  o.flits_per_packet = 8;
  o.seed = 29;
  o.benchmark = BenchmarkKind::Task;
  o.app = &app;
  o.mapping = &mapping;
  o.check_credits = true;
  const SimulationResult r = run_simulation(o);

  LinkId up_link = -1;
  for (const LinkRecord& l : r.links)
    if (l.driver == 0 && l.driver_dir == Direction::Up) up_link = l.id;
  require(up_link >= 0, "no vertical link found");
  const LinkMonitor& mon =
      r.monitors.links()[static_cast<std::size_t>(up_link)];
  const double throughput =
      static_cast<double>(mon.flits_crossed()) /
      static_cast<double>(mon.cycles_recorded());
  require(throughput <= 0.5 * 1.02,
          "cross-boundary throughput " + fmt(throughput) +
              " above 0.5 flits/fast-cycle + 2%");
  require(throughput >= 0.4, "flood failed to load the vertical link");
  return "cross-boundary throughput " + fmt(throughput) +
         " flits/fast-cycle <= 0.51; credit and conservation checks on";
}

std::string criterion_11_performance() {
  const NetworkGraph g = make_mesh({4}, {4}, {1.0}, "XY", 4, 4);
  const auto start = std::chrono::steady_clock::now();
  const SimulationResult r = synthetic_run(g, 100000, 0.08, 32, 31);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(r.monitors.flits_ejected() > 100000, "run carried too little traffic");
  require(seconds <= 60.0,
          "4x4 100k-cycle run took " + fmt(seconds) + " s, budget 60 s");
  return "4x4, 100k cycles at 0.08 flits/cycle in " + fmt(seconds) +
         " s single-threaded";
}

struct Criterion {
  int id;
  const char* name;
  std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);
  }

  const std::vector<Criterion> criteria = {
      {1, "saturation curve", criterion_1_saturation},
      {2, "two-stream toy matrix", criterion_2_two_stream_matrix},
      {3, "matrix stochasticity", criterion_3_matrix_stochasticity},
      {4, "flit conservation", criterion_4_conservation},
      {5, "credit soundness", criterion_5_credit_soundness},
      {6, "zero-load latency oracle", criterion_6_zero_load_oracle},
      {7, "turn analysis", criterion_7_turn_analysis},
      {8, "energy linearity and post-hoc evaluation", criterion_8_energy},
      {9, "sweep determinism", criterion_9_sweep_determinism},
      {10, "heterogeneous clocks", criterion_10_heterogeneous_clocks},
      {11, "simulation performance", criterion_11_performance},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    try {
      const std::string detail = c.run();
      std::cout << "[PASS] criterion " << c.id << " (" << c.name << "): "
                << detail << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] criterion " << c.id << " (" << c.name << "): "
                << e.what() << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}
