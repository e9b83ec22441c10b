#pragma once

#include <map>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/rng.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

// A packet the traffic model wants to send, before flit segmentation.
struct PendingPacket {
  NodeId dst = kInvalidNode;
  int color = 0;
  int length = 1;
  SimTime created_at = 0;
  std::int32_t src_task = -1;
  std::int32_t dst_task = -1;
};

class TrafficSource {
 public:
  virtual ~TrafficSource() = default;
  // Called once per PE clock edge; appends the packets created this cycle.
  virtual void step(SimTime now, std::vector<PendingPacket>& out) = 0;
};

// Delivery callback for completed packets (one token per packet).
class TokenSink {
 public:
  virtual ~TokenSink() = default;
  virtual void deliver_token(std::int32_t dst_task, int color,
                             std::int32_t src_task) = 0;
};

// Injection phases of the synthetic benchmark.
struct InjectionSchedule {
  SimTime warmup_start = 0;
  SimTime warmup_end = 0;
  double warmup_rate = 0.0;
  SimTime run_start = 0;
  SimTime run_end = 0;
  double run_rate = 0.0;

  double rate_at(SimTime now) const {
    if (now >= warmup_start && now < warmup_end) return warmup_rate;
    if (now >= run_start && now < run_end) return run_rate;
    return 0.0;
  }
};

// Uniform random traffic: per PE cycle, with probability rate/flits_per_
// packet, one full packet toward a uniformly drawn other PE. The expected
// flit injection per cycle equals the configured rate.
class UniformRandomSource : public TrafficSource {
 public:
  UniformRandomSource(NodeId self, std::vector<NodeId> destinations,
                      int flits_per_packet, InjectionSchedule schedule,
                      std::uint64_t seed);

  void step(SimTime now, std::vector<PendingPacket>& out) override;

 private:
  NodeId self_;
  std::vector<NodeId> destinations_;  // all other PEs
  int flits_per_packet_;
  InjectionSchedule schedule_;
  Rng rng_;
};

// One mapped task: a Petri-net place with a retention window, token
// requirements and probabilistic send possibilities.
class TaskRuntime {
 public:
  TaskRuntime(const AppTaskSpec& spec, const ApplicationSpec& app,
              const Mapping& mapping, int flits_per_packet, NodeId self,
              Rng* rng);

  // Fires when tokens suffice, then emits the scheduled sends of the active
  // firing as they come due.
  void step(SimTime now, std::vector<PendingPacket>& out);

  void add_token(int color, std::int32_t src_task);
  int task_id() const { return spec_->id; }
  std::int64_t tokens_held() const;
  std::int64_t tokens_consumed() const { return tokens_consumed_; }
  std::int64_t firings() const { return repeats_done_; }

 private:
  bool requirements_met() const;
  void consume_requirements();
  void begin_firing(SimTime now);

  struct SendJob {
    SimTime due;
    NodeId dst_node;
    std::int32_t dst_task;
    int color;
  };

  const AppTaskSpec* spec_;
  const ApplicationSpec* app_;
  int flits_per_packet_;
  NodeId self_;
  Rng* rng_;

  SimTime window_start_ = 0;
  SimTime window_end_ = 0;
  std::int64_t repeats_max_ = 0;
  std::int64_t repeats_done_ = 0;
  bool firing_active_ = false;
  std::vector<SendJob> pending_sends_;

  // Required counts for the next firing, sampled once per repetition.
  struct Need {
    int color;
    std::int32_t source;
    std::int64_t required;
    std::int64_t have = 0;
  };
  std::vector<Need> needs_;
  std::int64_t tokens_consumed_ = 0;
  std::map<std::pair<int, std::int32_t>, NodeId> dst_nodes_;
};

// The per-PE task host: steps every mapped task and accepts their tokens.
class TaskHostSource : public TrafficSource, public TokenSink {
 public:
  TaskHostSource(NodeId self, const ApplicationSpec& app,
                 const Mapping& mapping, int flits_per_packet,
                 std::uint64_t seed);

  void step(SimTime now, std::vector<PendingPacket>& out) override;
  void deliver_token(std::int32_t dst_task, int color,
                     std::int32_t src_task) override;

  std::int64_t tokens_held() const;
  std::int64_t tokens_consumed() const;
  std::int64_t tokens_delivered() const { return tokens_delivered_; }

 private:
  Rng rng_;
  std::vector<TaskRuntime> tasks_;
  std::int64_t tokens_delivered_ = 0;
};

}  // namespace nocsim
