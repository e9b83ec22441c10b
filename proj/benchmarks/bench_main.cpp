#include <benchmark/benchmark.h>

#include "nocsim/config.hpp"
#include "nocsim/monitor.hpp"
#include "nocsim/routing.hpp"
#include "nocsim/simulation.hpp"

namespace {

using namespace nocsim;

NetworkGraph mesh(std::vector<int> x, std::vector<int> y) {
  NetworkShorthand sh;
  sh.z = static_cast<int>(x.size());
  sh.x = std::move(x);
  sh.y = std::move(y);
  sh.clock_delay_ns.assign(static_cast<std::size_t>(sh.z), 1.0);
  sh.routing = sh.z > 1 ? "XYZ" : "XY";
  sh.vc_count = 4;
  sh.buffer_depth = 4;
  return expand_mesh(sh);
}

SimulationResult run(const NetworkGraph& g, SimTime sim_ns, double rate,
                     int fpp, std::uint64_t seed) {
  SimulationOptions o;
  o.graph = &g;
  o.sim_time_ps = sim_ns * kPsPerNs;
  o.flits_per_packet = fpp;
  o.seed = seed;
  o.schedule.run_start = 0;
  o.schedule.run_end = o.sim_time_ps;
  o.schedule.run_rate = rate;
  return run_simulation(o);
}

void BM_Mesh4x4Uniform(benchmark::State& state) {
  const NetworkGraph g = mesh({4}, {4});
  const double rate = static_cast<double>(state.range(0)) / 100.0;
  const SimTime sim_ns = 10000;
  std::uint64_t seed = 1;
  std::int64_t cycles = 0;
  for (auto _ : state) {
    const SimulationResult r = run(g, sim_ns, rate, 32, seed++);
    benchmark::DoNotOptimize(r.monitors.flits_ejected());
    cycles += sim_ns;
  }
  state.counters["router_cycles_per_s"] = benchmark::Counter(
      static_cast<double>(cycles) * static_cast<double>(g.routers().size()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Mesh4x4Uniform)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Mesh4x4x4Uniform(benchmark::State& state) {
  const NetworkGraph g = mesh({4, 4, 4}, {4, 4, 4});
  const SimTime sim_ns = 2000;
  std::uint64_t seed = 1;
  std::int64_t cycles = 0;
  for (auto _ : state) {
    const SimulationResult r = run(g, sim_ns, 0.08, 32, seed++);
    benchmark::DoNotOptimize(r.monitors.flits_ejected());
    cycles += sim_ns;
  }
  state.counters["router_cycles_per_s"] = benchmark::Counter(
      static_cast<double>(cycles) * static_cast<double>(g.routers().size()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Mesh4x4x4Uniform)->Unit(benchmark::kMillisecond);

void BM_TurnEnumeration(benchmark::State& state) {
  const NetworkGraph g = mesh({4, 4, 4}, {4, 4, 4});
  for (auto _ : state) {
    const auto masks = allowed_turns_all(RoutingAlgorithm::XYZ, g);
    benchmark::DoNotOptimize(masks.size());
  }
}
BENCHMARK(BM_TurnEnumeration)->Unit(benchmark::kMillisecond);

void BM_LinkMonitorTick(benchmark::State& state) {
  LinkMonitor mon(0, 2, 1);
  Flit body;
  body.kind = FlitKind::Head;
  std::uint32_t pid = 0;
  body.packet_id = pid;
  std::int64_t ticks = 0;
  for (auto _ : state) {
    // Alternate short packets and idle cycles.
    Flit head;
    head.kind = FlitKind::Head;
    head.packet_id = ++pid;
    mon.tick(&head);
    Flit tail;
    tail.kind = FlitKind::Tail;
    tail.packet_id = pid;
    tail.sequence = 1;
    tail.color = 1;
    mon.tick(&tail);
    mon.tick(nullptr);
    ticks += 3;
  }
  state.counters["ticks_per_s"] =
      benchmark::Counter(static_cast<double>(ticks), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_LinkMonitorTick);

}  // namespace

BENCHMARK_MAIN();
