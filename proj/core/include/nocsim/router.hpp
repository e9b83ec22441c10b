#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "nocsim/kernel.hpp"
#include "nocsim/monitor.hpp"
#include "nocsim/power.hpp"
#include "nocsim/routing.hpp"
#include "nocsim/topology.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

// Wormhole VC router. Each clock edge runs five phases in order: sample
// incoming flits and credits, route computation for buffer-front heads,
// output-VC allocation, separable input-first switch allocation, and
// crossbar traversal with credit return. Route computation and VC
// allocation complete in a flit's arrival cycle; switch allocation and
// traversal happen no earlier than the next cycle, which with the one-cycle
// link register gives 2 router cycles + 1 link cycle per hop at zero load.
class RouterNode : public ClockedNode {
 public:
  RouterNode(const NodeRecord& record, const std::vector<Vec3>& positions,
             NodeId local_pe, Monitors* monitors, RouterEventCounts* events);

  // Wires one port: the inbound register (sampled here, credits pushed
  // upstream through it) and the outbound register (written here, credits
  // taken from it). Downstream buffer geometry comes from the peer port.
  void bind_port(Direction dir, LinkRegister* inbound, LinkRegister* outbound,
                 LinkMonitor* outbound_monitor, const PortRecord& own,
                 const PortRecord& peer);

  // Optional allowed-turn check on every traversal.
  void set_turn_mask(const TurnMask* mask) { turn_mask_ = mask; }

  void on_edge(SimTime now) override;

  // Inspection used by invariant checks and tests.
  int occupancy(Direction dir, int vc) const;
  int credits(Direction dir, int vc) const;
  std::int64_t buffered_flits() const;

  NodeId id() const { return id_; }

 private:
  struct FlitSlot {
    Flit flit;
    SimTime eligible_at;  // earliest switch-allocation cycle
  };

  struct VcState {
    std::deque<FlitSlot> q;
    int capacity = 1;
    bool has_route = false;
    int out_port = -1;  // index into ports_
    int out_vc = -1;    // -1 until VC allocation
    // Arrival-side wormhole state.
    std::int32_t receiving_packet = -1;
  };

  struct Port {
    Direction dir = Direction::Local;
    LinkRegister* in = nullptr;
    LinkRegister* out = nullptr;
    LinkMonitor* out_monitor = nullptr;
    std::vector<VcState> vcs;        // input buffers (own geometry)
    std::vector<int> credits;        // per downstream VC (peer geometry)
    std::vector<int> credit_cap;     // downstream depths
    std::vector<int> owner_port;     // per downstream VC: input port or -1
    std::vector<int> owner_vc;
    int rr_va = 0;                   // VC-allocation round robin
    int rr_sa_vc = 0;                // input nomination round robin
    int rr_sa_input = 0;             // output grant round robin
    bool sent = false;               // traversal happened this cycle
    Flit sent_flit;
  };

  int port_index(Direction d) const {
    return port_index_[static_cast<std::size_t>(d)];
  }

  void phase_sample(SimTime now);
  void phase_route(SimTime now);
  void phase_vc_allocate(SimTime now);
  void phase_switch_allocate(SimTime now);
  void sample_usage();

  NodeId id_;
  Vec3 position_;
  SimTime period_;
  RoutingAlgorithm algorithm_;
  NodeId local_pe_;
  const std::vector<Vec3>& positions_;
  Monitors* monitors_;
  RouterEventCounts* events_;
  const TurnMask* turn_mask_ = nullptr;

  std::vector<Port> ports_;
  std::array<int, kDirectionCount> port_index_;
  // Per-cycle scratch, reused to keep the hot path allocation-free.
  std::vector<int> nominated_vc_;
  std::vector<int> nominated_out_;
  std::vector<int> occupancy_scratch_;
};

}  // namespace nocsim
