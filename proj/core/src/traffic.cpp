#include "nocsim/traffic.hpp"

#include <algorithm>

namespace nocsim {

UniformRandomSource::UniformRandomSource(NodeId self,
                                         std::vector<NodeId> destinations,
                                         int flits_per_packet,
                                         InjectionSchedule schedule,
                                         std::uint64_t seed)
    : self_(self),
      destinations_(std::move(destinations)),
      flits_per_packet_(flits_per_packet),
      schedule_(schedule),
      rng_(seed) {
  destinations_.erase(
      std::remove(destinations_.begin(), destinations_.end(), self_),
      destinations_.end());
}

void UniformRandomSource::step(SimTime now, std::vector<PendingPacket>& out) {
  if (destinations_.empty()) return;
  const double rate = schedule_.rate_at(now);
  if (rate <= 0.0) return;
  if (!rng_.bernoulli(rate / static_cast<double>(flits_per_packet_))) return;
  PendingPacket p;
  p.dst = destinations_[rng_.below(destinations_.size())];
  p.color = 0;
  p.length = flits_per_packet_;
  p.created_at = now;
  out.push_back(p);
}

namespace {

std::int64_t sample_range(const IntRange& r, Rng& rng) {
  if (r.min == r.max) return r.min;
  return rng.range(r.min, r.max);
}

}  // namespace

TaskRuntime::TaskRuntime(const AppTaskSpec& spec, const ApplicationSpec& app,
                         const Mapping& mapping, int flits_per_packet,
                         NodeId self, Rng* rng)
    : spec_(&spec),
      app_(&app),
      flits_per_packet_(flits_per_packet),
      self_(self),
      rng_(rng) {
  window_start_ = sample_range(spec.start, *rng_) * kPsPerNs;
  window_end_ = window_start_ + sample_range(spec.duration, *rng_) * kPsPerNs;
  repeats_max_ = sample_range(spec.repeat, *rng_);

  for (const RequirementSpec& r : spec.requirements) {
    Need n;
    n.color = app.color_index(r.type);
    n.source = r.source_task;
    n.required = sample_range(r.count, *rng_);
    needs_.push_back(n);
  }
  // Resolve destination tasks to nodes once.
  for (const PossibilitySpec& p : spec.possibilities) {
    for (const DestinationSpec& d : p.destinations) {
      NodeId node = kInvalidNode;
      for (const MappingEntry& e : mapping)
        if (e.task == d.task) node = e.node;
      if (node == kInvalidNode)
        throw ConfigError("task " + std::to_string(d.task) + " is not mapped");
      dst_nodes_[{app.color_index(d.type), d.task}] = node;
    }
  }
}

bool TaskRuntime::requirements_met() const {
  for (const Need& n : needs_)
    if (n.have < n.required) return false;
  return true;
}

void TaskRuntime::consume_requirements() {
  for (Need& n : needs_) {
    n.have -= n.required;
    tokens_consumed_ += n.required;
  }
}

void TaskRuntime::begin_firing(SimTime now) {
  consume_requirements();

  // One possibility per repetition, drawn by its probability.
  const PossibilitySpec* chosen = nullptr;
  if (!spec_->possibilities.empty()) {
    const double draw = rng_->real01();
    double cumulative = 0.0;
    for (const PossibilitySpec& p : spec_->possibilities) {
      cumulative += p.probability;
      if (draw < cumulative) {
        chosen = &p;
        break;
      }
    }
    if (!chosen) chosen = &spec_->possibilities.back();
  }

  if (chosen) {
    for (const DestinationSpec& d : chosen->destinations) {
      const std::int64_t delay = sample_range(d.delay, *rng_) * kPsPerNs;
      const std::int64_t interval = sample_range(d.interval, *rng_) * kPsPerNs;
      const std::int64_t count = sample_range(d.count, *rng_);
      const int color = app_->color_index(d.type);
      const NodeId dst_node = dst_nodes_.at({color, d.task});
      for (std::int64_t k = 0; k < count; ++k) {
        SendJob job;
        job.due = now + delay + k * interval;
        job.dst_node = dst_node;
        job.dst_task = d.task;
        job.color = color;
        pending_sends_.push_back(job);
      }
    }
  }
  firing_active_ = true;

  // Next repetition samples fresh requirement counts.
  std::size_t i = 0;
  for (const RequirementSpec& r : spec_->requirements)
    needs_[i++].required = sample_range(r.count, *rng_);
}

void TaskRuntime::step(SimTime now, std::vector<PendingPacket>& out) {
  if (!firing_active_) {
    if (repeats_done_ >= repeats_max_) return;
    if (now < window_start_ || now > window_end_) return;
    if (!requirements_met()) return;
    begin_firing(now);
  }

  // Emit due sends; a firing completes once all its sends are dispatched.
  bool all_done = true;
  for (SendJob& job : pending_sends_) {
    if (job.due > now) {
      all_done = false;
      continue;
    }
    if (job.due >= 0) {
      PendingPacket p;
      p.dst = job.dst_node;
      p.color = job.color;
      p.length = flits_per_packet_;
      p.created_at = now;
      p.src_task = spec_->id;
      p.dst_task = job.dst_task;
      out.push_back(p);
      job.due = -1;  // dispatched
    }
  }
  if (firing_active_ && all_done) {
    pending_sends_.clear();
    firing_active_ = false;
    ++repeats_done_;
  }
}

void TaskRuntime::add_token(int color, std::int32_t src_task) {
  for (Need& n : needs_) {
    if (n.color == color && n.source == src_task) {
      ++n.have;
      return;
    }
  }
  // Tokens no requirement asks for accumulate unused.
  Need n;
  n.color = color;
  n.source = src_task;
  n.required = std::int64_t{1} << 62;
  n.have = 1;
  needs_.push_back(n);
}

std::int64_t TaskRuntime::tokens_held() const {
  std::int64_t total = 0;
  for (const Need& n : needs_) total += n.have;
  return total;
}

TaskHostSource::TaskHostSource(NodeId self, const ApplicationSpec& app,
                               const Mapping& mapping, int flits_per_packet,
                               std::uint64_t seed)
    : rng_(seed) {
  for (const MappingEntry& e : mapping) {
    if (e.node != self) continue;
    const AppTaskSpec* spec = app.task(e.task);
    tasks_.emplace_back(*spec, app, mapping, flits_per_packet, self, &rng_);
  }
}

void TaskHostSource::step(SimTime now, std::vector<PendingPacket>& out) {
  for (TaskRuntime& t : tasks_) t.step(now, out);
}

void TaskHostSource::deliver_token(std::int32_t dst_task, int color,
                                   std::int32_t src_task) {
  for (TaskRuntime& t : tasks_) {
    if (t.task_id() == dst_task) {
      t.add_token(color, src_task);
      ++tokens_delivered_;
      return;
    }
  }
  throw SimulationError("token for task " + std::to_string(dst_task) +
                        " delivered to a node that does not host it");
}

std::int64_t TaskHostSource::tokens_held() const {
  std::int64_t total = 0;
  for (const TaskRuntime& t : tasks_) total += t.tokens_held();
  return total;
}

std::int64_t TaskHostSource::tokens_consumed() const {
  std::int64_t total = 0;
  for (const TaskRuntime& t : tasks_) total += t.tokens_consumed();
  return total;
}

}  // namespace nocsim
