#include <doctest.h>

#include <vector>

#include "nocsim/kernel.hpp"

using namespace nocsim;

namespace {

class Probe : public ClockedNode {
 public:
  explicit Probe(std::vector<std::pair<SimTime, int>>* log, int tag)
      : log_(log), tag_(tag) {}
  void on_edge(SimTime now) override { log_->emplace_back(now, tag_); }

 private:
  std::vector<std::pair<SimTime, int>>* log_;
  int tag_;
};

}  // namespace

TEST_CASE("scheduler: per-node periodic edges in global order") {
  std::vector<std::pair<SimTime, int>> log;
  Probe a(&log, 0), b(&log, 1);
  Scheduler s;
  s.register_node(&a, 1000);   // 1 ns
  s.register_node(&b, 2000);   // 2 ns
  const SimulationOutcome outcome = s.run(4000);

  // A fires at 0..4 ns, B at 0, 2, 4 ns; ties break by registration id.
  const std::vector<std::pair<SimTime, int>> expected = {
      {0, 0},    {0, 1},    {1000, 0}, {2000, 0},
      {2000, 1}, {3000, 0}, {4000, 0}, {4000, 1}};
  CHECK(log == expected);
  CHECK(outcome.edges[0] == 5);
  CHECK(outcome.edges[1] == 3);
}

TEST_CASE("scheduler: until=0 fires every node exactly once") {
  std::vector<std::pair<SimTime, int>> log;
  Probe a(&log, 0), b(&log, 1);
  Scheduler s;
  s.register_node(&a, 700);
  s.register_node(&b, 1300);
  const SimulationOutcome outcome = s.run(0);
  CHECK(outcome.edges == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("scheduler: timestamp hook fires once per distinct time") {
  std::vector<std::pair<SimTime, int>> log;
  Probe a(&log, 0), b(&log, 1);
  Scheduler s;
  s.register_node(&a, 1000);
  s.register_node(&b, 1000);
  std::vector<SimTime> hooks;
  s.set_timestamp_hook([&](SimTime t) { hooks.push_back(t); });
  s.run(3000);
  CHECK(hooks == std::vector<SimTime>{0, 1000, 2000, 3000});
}

TEST_CASE("cycles_elapsed closed form") {
  CHECK(cycles_elapsed(1000, 10000 * kPsPerNs) == 10001);
  CHECK(cycles_elapsed(2000, 10000 * kPsPerNs) == 5001);
  CHECK(cycles_elapsed(1000, 0) == 1);
}

TEST_CASE("link register: cross-domain sampling rule") {
  LinkRegister reg;
  reg.configure(1000, 2000);  // 1 ns driver into a 2 ns sink
  Flit f;
  reg.write(f, 0, 3000);
  // Sink edges at 0, 2, 4 ns: nothing strictly after 3 ns until 4 ns.
  CHECK_FALSE(reg.sample(2000).has_value());
  auto got = reg.sample(4000);
  REQUIRE(got.has_value());
  CHECK(got->written_at == 3000);
  CHECK(reg.flits_in_flight() == 0);
}

TEST_CASE("link register: same-domain streaming never blocks") {
  LinkRegister reg;
  reg.configure(1000, 1000);
  Flit f;
  // Writes land one period after each grant; a sink edge consumes one
  // flit per cycle, so the wire sustains one flit per cycle.
  SimTime now = 0;
  for (int k = 0; k < 8; ++k, now += 1000) {
    CHECK(reg.can_write(now));
    reg.write(f, 0, now + 1000);
    // A flit written at t is latched at t+1; from cycle 2 on the sink
    // consumes one flit per cycle.
    if (k >= 2) CHECK(reg.sample(now).has_value());
  }
}

TEST_CASE("link register: fast driver throttled into a slow sink") {
  LinkRegister reg;
  reg.configure(1000, 2000);
  Flit f;
  CHECK(reg.can_write(0));
  reg.write(f, 0, 1000);  // latched at the 2 ns sink edge
  // A write at 1 ns lands at 2 ns, exactly when the first one is latched:
  // still legal. The next driver edge must hold off.
  CHECK(reg.can_write(1000));
  reg.write(f, 0, 2000);  // latched at 4 ns
  CHECK_FALSE(reg.can_write(2000));
  CHECK(reg.can_write(3000));
}

TEST_CASE("link register: credits queue across domains") {
  LinkRegister reg;
  reg.configure(2000, 1000);
  reg.push_credit(0, 1000);
  reg.push_credit(1, 1500);
  reg.push_credit(0, 3999);
  int got = 0;
  reg.take_credits(4000, [&](int) { ++got; });
  CHECK(got == 3);
  CHECK(reg.credits_in_flight() == 0);
}

TEST_CASE("link register: out-of-order writes are a hard failure") {
  LinkRegister reg;
  reg.configure(1000, 1000);
  Flit f;
  reg.write(f, 0, 2000);
  CHECK_THROWS_AS(reg.write(f, 0, 1500), SimulationError);
}
