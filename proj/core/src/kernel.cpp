#include "nocsim/kernel.hpp"

namespace nocsim {

int Scheduler::register_node(ClockedNode* node, SimTime period_ps) {
  if (period_ps <= 0)
    throw ConfigError("clock period must be positive picoseconds");
  nodes_.push_back(node);
  periods_.push_back(period_ps);
  return static_cast<int>(nodes_.size()) - 1;
}

SimulationOutcome Scheduler::run(SimTime until) {
  if (until < 0) throw ConfigError("simulation end time must be >= 0");
  SimulationOutcome outcome;
  outcome.until = until;
  outcome.periods = periods_;
  outcome.edges.assign(nodes_.size(), 0);

  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    queue.push(Entry{0, static_cast<int>(i)});

  SimTime last_time = -1;
  while (!queue.empty() && queue.top().time <= until) {
    const Entry e = queue.top();
    queue.pop();
    if (e.time < last_time)
      throw SimulationError("event scheduled in the past");
    if (hook_ && last_time != e.time && last_time >= 0) hook_(last_time);
    last_time = e.time;
    nodes_[static_cast<std::size_t>(e.id)]->on_edge(e.time);
    ++outcome.edges[static_cast<std::size_t>(e.id)];
    queue.push(Entry{e.time + periods_[static_cast<std::size_t>(e.id)], e.id});
  }
  if (hook_ && last_time >= 0) hook_(last_time);
  return outcome;
}

}  // namespace nocsim
