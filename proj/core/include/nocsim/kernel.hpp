#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "nocsim/types.hpp"

namespace nocsim {

// A network participant driven by its own periodic clock.
class ClockedNode {
 public:
  virtual ~ClockedNode() = default;
  virtual void on_edge(SimTime now) = 0;
};

struct SimulationOutcome {
  SimTime until = 0;
  std::vector<SimTime> periods;     // indexed by registration order
  std::vector<std::int64_t> edges;  // edges fired per node
};

// Edges fired by a node with the given period in [0, until].
inline std::int64_t cycles_elapsed(SimTime period, SimTime until) {
  return until / period + 1;
}

// Fires every node once per clock edge in global time order; ties at equal
// timestamps resolve by ascending registration id. Stops after the last
// edge <= until.
class Scheduler {
 public:
  int register_node(ClockedNode* node, SimTime period_ps);

  // Invoked after all nodes at one timestamp have fired.
  void set_timestamp_hook(std::function<void(SimTime)> hook) {
    hook_ = std::move(hook);
  }

  SimulationOutcome run(SimTime until);

  std::int64_t cycles_of(int id, const SimulationOutcome& outcome) const {
    return outcome.edges[static_cast<std::size_t>(id)];
  }

 private:
  struct Entry {
    SimTime time;
    int id;
    bool operator>(const Entry& o) const {
      return std::tie(time, id) > std::tie(o.time, o.id);
    }
  };
  std::vector<ClockedNode*> nodes_;
  std::vector<SimTime> periods_;
  std::function<void(SimTime)> hook_;
};

// One unidirectional link: a phit-wide data path forward plus a credit
// backchannel. A value written at time t is visible to the sink at its
// first clock edge strictly after t; the sink accepts at most one flit per
// edge, so a driver may only launch a new flit once every pending flit will
// have been latched by the time the new one lands.
class LinkRegister {
 public:
  void configure(SimTime driver_period, SimTime sink_period) {
    driver_period_ = driver_period;
    sink_period_ = sink_period;
  }

  SimTime driver_period() const { return driver_period_; }

  // First sink edge strictly after t.
  SimTime sink_sample_time(SimTime t) const {
    return (t / sink_period_ + 1) * sink_period_;
  }

  // True when a flit launched at this driver edge (landing at
  // now + driver_period) will not collide with an unlatched predecessor.
  bool can_write(SimTime now) const {
    if (data_.empty()) return true;
    return sink_sample_time(data_.back().written_at) <= now + driver_period_;
  }

  void write(const Flit& flit, int vc, SimTime written_at) {
    if (!data_.empty() && data_.back().written_at >= written_at)
      throw SimulationError("link register written out of order");
    data_.push_back(Entry{flit, vc, written_at});
  }

  struct Entry {
    Flit flit;
    int vc;
    SimTime written_at;
  };

  // The flit latched at this sink edge, if any.
  std::optional<Entry> sample(SimTime now) {
    if (data_.empty() || data_.front().written_at >= now) return std::nullopt;
    Entry e = data_.front();
    data_.pop_front();
    return e;
  }

  void push_credit(int vc, SimTime written_at) {
    credits_.push_back(Credit{vc, written_at});
  }

  // Pops every credit visible at this driver edge; multiple credits may
  // arrive at once across clock-domain boundaries.
  template <typename Fn>
  void take_credits(SimTime now, Fn&& fn) {
    while (!credits_.empty() && credits_.front().written_at < now) {
      fn(credits_.front().vc);
      credits_.pop_front();
    }
  }

  std::size_t flits_in_flight() const { return data_.size(); }
  std::size_t credits_in_flight() const { return credits_.size(); }
  int flits_in_flight_for_vc(int vc) const {
    int n = 0;
    for (const Entry& e : data_) n += e.vc == vc ? 1 : 0;
    return n;
  }
  int credits_in_flight_for_vc(int vc) const {
    int n = 0;
    for (const Credit& c : credits_) n += c.vc == vc ? 1 : 0;
    return n;
  }
  const std::deque<Entry>& pending() const { return data_; }

 private:
  struct Credit {
    int vc;
    SimTime written_at;
  };
  std::deque<Entry> data_;
  std::deque<Credit> credits_;
  SimTime driver_period_ = 1000;
  SimTime sink_period_ = 1000;
};

}  // namespace nocsim
