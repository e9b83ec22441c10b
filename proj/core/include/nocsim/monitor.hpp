#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nocsim/rng.hpp"
#include "nocsim/topology.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

// Link-state space of the data-flow matrices: one initial state, head
// active/idle, and active/idle per color. 2n+3 states for n colors.
class LinkStateSpace {
 public:
  explicit LinkStateSpace(int colors) : colors_(colors) {}

  int colors() const { return colors_; }
  int size() const { return 2 * colors_ + 3; }

  static constexpr int initial() { return 0; }
  static constexpr int head_active() { return 1; }
  static constexpr int head_idle() { return 2; }
  int color_active(int color) const { return 3 + 2 * color; }
  int color_idle(int color) const { return 4 + 2 * color; }

  bool is_active(int state) const {
    return state == head_active() ||
           (state >= 3 && (state - 3) % 2 == 0 && state < size());
  }

  // Active state for a crossing flit: head flits map to the head state,
  // body/tail flits to their color.
  int state_of(const Flit& flit) const;

  // Idle counterpart of a state; the initial state persists.
  int idle_of(int state) const;

  // Stable labels used by csv headers and coefficient files.
  std::vector<std::string> labels(
      const std::vector<std::string>& color_names) const;

 private:
  int colors_;
};

// Per-link transition counting, recorded once per driver clock cycle.
class LinkMonitor {
 public:
  LinkMonitor() = default;
  LinkMonitor(LinkId link, int colors, int vc_count)
      : link_(link),
        space_(colors),
        counts_(static_cast<std::size_t>(space_.size()) *
                static_cast<std::size_t>(space_.size())),
        vc_active_packet_(static_cast<std::size_t>(vc_count), -1),
        vc_next_sequence_(static_cast<std::size_t>(vc_count), 0) {}

  // One observation per driver cycle; flit == nullptr records an idle cycle.
  void tick(const Flit* flit);

  // Wormhole integrity on this link's VC: sequences contiguous, no packet
  // interleaving. Called on every write.
  void check_wormhole(const Flit& flit, int vc);

  LinkId link() const { return link_; }
  const LinkStateSpace& space() const { return space_; }
  std::int64_t cycles_recorded() const { return cycles_; }
  std::int64_t flits_crossed() const { return flits_; }
  std::int64_t count(int from, int to) const {
    return counts_[static_cast<std::size_t>(from) *
                       static_cast<std::size_t>(space_.size()) +
                   static_cast<std::size_t>(to)];
  }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  // Entries divided by cycles_recorded; the sum is 1 within 1e-9.
  std::vector<double> normalized() const;

 private:
  LinkId link_ = -1;
  LinkStateSpace space_{0};
  int state_ = LinkStateSpace::initial();
  std::int64_t cycles_ = 0;
  std::int64_t flits_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<std::int32_t> vc_active_packet_;
  std::vector<std::uint16_t> vc_next_sequence_;
};

// Running latency statistics with a bounded reservoir for the median.
class LatencyAccumulator {
 public:
  explicit LatencyAccumulator(std::uint64_t reservoir_seed = 0,
                              std::size_t reservoir_capacity = 4096)
      : rng_(reservoir_seed), capacity_(reservoir_capacity) {}

  void add(SimTime latency_ps);

  std::int64_t count() const { return count_; }
  double mean_ns() const;
  double std_ns() const;
  double median_ns() const;

 private:
  Rng rng_;
  std::size_t capacity_;
  std::int64_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::vector<SimTime> reservoir_;
};

// Per-router VC and buffer occupancy histograms, sampled once per router
// clock edge.
class UsageMonitor {
 public:
  UsageMonitor() = default;
  UsageMonitor(const NodeRecord& router);

  void sample_port(int port_slot, int occupied_vcs,
                   const std::vector<int>& vc_occupancy);

  struct PortUsage {
    Direction dir = Direction::Local;
    std::vector<std::int64_t> vc_hist;                 // index: #occupied VCs
    std::vector<std::vector<std::int64_t>> slot_hist;  // [vc][depth slot]
  };
  const std::vector<PortUsage>& ports() const { return ports_; }

 private:
  std::vector<PortUsage> ports_;
};

struct LatencySet {
  LatencyAccumulator flit;
  LatencyAccumulator packet;
  LatencyAccumulator network;
};

// All observation state of one simulation instance.
class Monitors {
 public:
  Monitors() = default;
  Monitors(const NetworkGraph& graph, int colors,
           std::vector<std::string> color_names, std::uint64_t seed);

  LinkMonitor& link(LinkId id) { return links_[static_cast<std::size_t>(id)]; }
  const std::vector<LinkMonitor>& links() const { return links_; }
  UsageMonitor& usage(NodeId router) {
    return usage_[static_cast<std::size_t>(router)];
  }
  const std::vector<UsageMonitor>& usage() const { return usage_; }

  // Latency stats only cover packets created inside the measurement window
  // (the run phase for synthetic traffic).
  void set_measurement_window(SimTime from_ps, SimTime to_ps) {
    measure_from_ = from_ps;
    measure_to_ = to_ps;
  }
  bool in_window(SimTime created_at) const {
    return created_at >= measure_from_ && created_at < measure_to_;
  }

  void on_flit_ejected(const Flit& flit);
  void on_packet_ejected(SimTime head_injected_at, const Flit& tail);
  void on_flit_injected() { ++injected_; }

  const LatencySet& latencies() const { return lat_; }
  std::int64_t flits_injected() const { return injected_; }
  std::int64_t flits_ejected() const { return ejected_; }

  const std::vector<std::string>& color_names() const { return color_names_; }
  int colors() const { return colors_; }

 private:
  int colors_ = 1;
  std::vector<std::string> color_names_;
  std::vector<LinkMonitor> links_;
  std::vector<UsageMonitor> usage_;
  LatencySet lat_;
  SimTime measure_from_ = 0;
  SimTime measure_to_ = std::int64_t{1} << 62;
  std::int64_t injected_ = 0;
  std::int64_t ejected_ = 0;
};

}  // namespace nocsim
