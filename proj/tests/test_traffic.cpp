#include <doctest.h>

#include <cmath>

#include "nocsim/traffic.hpp"

using namespace nocsim;

namespace {

InjectionSchedule always(double rate) {
  InjectionSchedule s;
  s.run_start = 0;
  s.run_end = std::int64_t{1} << 60;
  s.run_rate = rate;
  return s;
}

ApplicationSpec two_task_app(std::int64_t repeat, std::int64_t count,
                             std::int64_t interval, std::int64_t delay_max) {
  ApplicationSpec app;
  app.data_types.push_back({0, "data"});
  AppTaskSpec sender;
  sender.id = 0;
  sender.start = {0, 0};
  sender.duration = {100, 100};
  sender.repeat = {repeat, repeat};
  PossibilitySpec p;
  p.probability = 1.0;
  DestinationSpec d;
  d.delay = {0, delay_max};
  d.interval = {interval, interval};
  d.count = {count, count};
  d.type = 0;
  d.task = 1;
  p.destinations.push_back(d);
  sender.possibilities.push_back(p);
  app.tasks.push_back(sender);
  AppTaskSpec sink;
  sink.id = 1;
  app.tasks.push_back(sink);
  return app;
}

}  // namespace

TEST_CASE("uniform source: zero rate never injects") {
  UniformRandomSource src(0, {0, 1, 2, 3}, 4, always(0.0), 42);
  std::vector<PendingPacket> out;
  for (SimTime t = 0; t < 10000000; t += 1000) src.step(t, out);
  CHECK(out.empty());
}

TEST_CASE("uniform source: packet count within binomial bounds") {
  // rate 0.08, 32-flit packets over 100k cycles: mean 250 packets,
  // sigma ~15.8; three sigma on both sides.
  const double rate = 0.08;
  const int fpp = 32;
  const int cycles = 100000;
  std::vector<NodeId> pes;
  for (NodeId n = 0; n < 16; ++n) pes.push_back(n);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    UniformRandomSource src(0, pes, fpp, always(rate), seed);
    std::vector<PendingPacket> out;
    for (SimTime t = 0; t < cycles * 1000; t += 1000) src.step(t, out);
    const double p = rate / fpp;
    const double mean = cycles * p;
    const double sigma = std::sqrt(cycles * p * (1 - p));
    CHECK(static_cast<double>(out.size()) > mean - 3 * sigma);
    CHECK(static_cast<double>(out.size()) < mean + 3 * sigma);
    for (const PendingPacket& pkt : out) {
      CHECK(pkt.dst != 0);
      CHECK(pkt.length == fpp);
    }
  }
}

TEST_CASE("uniform source: destinations cover all other PEs") {
  std::vector<NodeId> pes{0, 1, 2, 3};
  UniformRandomSource src(2, pes, 1, always(1.0), 9);
  std::vector<PendingPacket> out;
  for (SimTime t = 0; t < 1000000; t += 1000) src.step(t, out);
  std::array<int, 4> seen{};
  for (const PendingPacket& p : out)
    seen[static_cast<std::size_t>(p.dst)] += 1;
  CHECK(seen[2] == 0);
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[3] > 0);
}

TEST_CASE("task runtime: repeated firing sends count packets at intervals") {
  // Two repetitions, three packets each, spaced 10 ns, delay fixed at 0.
  const ApplicationSpec app = two_task_app(2, 3, 10, 0);
  const Mapping mapping{{0, 0}, {1, 1}};
  Rng rng(5);
  TaskRuntime task(app.tasks[0], app, mapping, 4, 0, &rng);

  std::vector<std::pair<SimTime, PendingPacket>> sent;
  std::vector<PendingPacket> out;
  for (SimTime t = 0; t <= 200 * kPsPerNs; t += kPsPerNs) {
    out.clear();
    task.step(t, out);
    for (const PendingPacket& p : out) sent.emplace_back(t, p);
  }
  REQUIRE(sent.size() == 6);
  CHECK(task.firings() == 2);
  // Within one firing, sends are spaced by the interval.
  CHECK(sent[1].first - sent[0].first == 10 * kPsPerNs);
  CHECK(sent[2].first - sent[1].first == 10 * kPsPerNs);
  for (const auto& [t, p] : sent) {
    CHECK(p.dst == 1);
    CHECK(p.src_task == 0);
    CHECK(p.dst_task == 1);
  }
}

TEST_CASE("task runtime: no firing outside the start+duration window") {
  ApplicationSpec app = two_task_app(100, 1, 0, 0);
  app.tasks[0].start = {10, 10};
  app.tasks[0].duration = {5, 5};
  const Mapping mapping{{0, 0}, {1, 1}};
  Rng rng(5);
  TaskRuntime task(app.tasks[0], app, mapping, 4, 0, &rng);
  std::vector<PendingPacket> out;
  for (SimTime t = 0; t <= 200 * kPsPerNs; t += kPsPerNs) task.step(t, out);
  // Window [10, 15]: at most 6 one-cycle firings fit; none after.
  CHECK(task.firings() <= 6);
  CHECK(task.firings() > 0);
  for (const PendingPacket& p : out) {
    CHECK(p.created_at >= 10 * kPsPerNs);
    CHECK(p.created_at <= 15 * kPsPerNs);
  }
}

TEST_CASE("task runtime: repeat exhaustion makes the task inert") {
  const ApplicationSpec app = two_task_app(3, 1, 0, 0);
  const Mapping mapping{{0, 0}, {1, 1}};
  Rng rng(5);
  TaskRuntime task(app.tasks[0], app, mapping, 4, 0, &rng);
  std::vector<PendingPacket> out;
  for (SimTime t = 0; t <= 100 * kPsPerNs; t += kPsPerNs) task.step(t, out);
  CHECK(task.firings() == 3);
  CHECK(out.size() == 3);
}

TEST_CASE("task runtime: requirements gate firing on tokens") {
  ApplicationSpec app = two_task_app(2, 1, 0, 0);
  RequirementSpec req;
  req.type = 0;
  req.source_task = 1;
  req.count = {2, 2};
  app.tasks[0].requirements.push_back(req);
  const Mapping mapping{{0, 0}, {1, 1}};
  Rng rng(5);
  TaskRuntime task(app.tasks[0], app, mapping, 4, 0, &rng);

  std::vector<PendingPacket> out;
  task.step(0, out);
  CHECK(out.empty());  // no tokens yet
  task.add_token(0, 1);
  task.step(kPsPerNs, out);
  CHECK(out.empty());  // needs two
  task.add_token(0, 1);
  task.step(2 * kPsPerNs, out);
  CHECK(out.size() == 1);  // consumed both, fired
  CHECK(task.tokens_consumed() == 2);
  CHECK(task.tokens_held() == 0);
  // Requirements re-consumed per repetition.
  task.step(3 * kPsPerNs, out);
  CHECK(out.size() == 1);
  task.add_token(0, 1);
  task.add_token(0, 1);
  task.step(4 * kPsPerNs, out);
  CHECK(out.size() == 2);
  CHECK(task.firings() == 2);
}

TEST_CASE("task host: possibility selection follows probabilities") {
  ApplicationSpec app;
  app.data_types.push_back({0, "d"});
  AppTaskSpec sender;
  sender.id = 0;
  sender.start = {0, 0};
  sender.duration = {std::int64_t{1} << 40, std::int64_t{1} << 40};
  sender.repeat = {4000, 4000};
  for (int i = 0; i < 2; ++i) {
    PossibilitySpec p;
    p.probability = i == 0 ? 0.25 : 0.75;
    DestinationSpec d;
    d.count = {1, 1};
    d.type = 0;
    d.task = i + 1;
    p.destinations.push_back(d);
    sender.possibilities.push_back(p);
  }
  app.tasks.push_back(sender);
  AppTaskSpec sink1, sink2;
  sink1.id = 1;
  sink2.id = 2;
  app.tasks.push_back(sink1);
  app.tasks.push_back(sink2);
  const Mapping mapping{{0, 0}, {1, 1}, {2, 2}};

  TaskHostSource host(0, app, mapping, 1, 77);
  std::vector<PendingPacket> out;
  for (SimTime t = 0; t < 4000 * kPsPerNs; t += kPsPerNs) host.step(t, out);
  int to1 = 0, to2 = 0;
  for (const PendingPacket& p : out) (p.dst_task == 1 ? to1 : to2) += 1;
  const double frac = static_cast<double>(to1) / (to1 + to2);
  // 4000 draws at p=0.25: three sigma is about 0.021.
  CHECK(frac > 0.25 - 0.021);
  CHECK(frac < 0.25 + 0.021);
}

TEST_CASE("task engine: identical seeds reproduce the schedule exactly") {
  const ApplicationSpec app = two_task_app(5, 2, 7, 50);
  const Mapping mapping{{0, 0}, {1, 1}};
  auto run_batch = [&] {
    TaskHostSource host(0, app, mapping, 4, 123);
    std::vector<std::pair<SimTime, NodeId>> log;
    std::vector<PendingPacket> out;
    for (SimTime t = 0; t < 500 * kPsPerNs; t += kPsPerNs) {
      out.clear();
      host.step(t, out);
      for (const PendingPacket& p : out) log.emplace_back(t, p.dst);
    }
    return log;
  };
  CHECK(run_batch() == run_batch());
}
