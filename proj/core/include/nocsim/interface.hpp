#pragma once

#include <deque>
#include <unordered_map>
#include <vector>

#include "nocsim/kernel.hpp"
#include "nocsim/monitor.hpp"
#include "nocsim/topology.hpp"
#include "nocsim/traffic.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

// Tile-side endpoint: hosts the traffic source, segments packets into
// flits, injects them over the local link with the same VC/credit protocol
// routers use, and ejects arriving flits. Packets addressed to the own node
// never enter the network; they are delivered internally.
class NetworkInterface : public ClockedNode {
 public:
  NetworkInterface(NodeId id, SimTime period, Monitors* monitors,
                   std::uint32_t* next_packet_id);

  void bind(LinkRegister* to_router, LinkRegister* from_router,
            LinkMonitor* to_router_monitor, const PortRecord& router_local_port);
  void set_source(TrafficSource* source) { source_ = source; }
  void set_token_sink(TokenSink* sink) { token_sink_ = sink; }

  void on_edge(SimTime now) override;

  NodeId id() const { return id_; }
  std::int64_t staged_flits() const;
  int credits(int vc) const { return credits_[static_cast<std::size_t>(vc)]; }

 private:
  void eject(SimTime now);
  void stage_new_packet(SimTime now);
  void send(SimTime now);

  NodeId id_;
  SimTime period_;
  Monitors* monitors_;
  std::uint32_t* next_packet_id_;
  TrafficSource* source_ = nullptr;
  TokenSink* token_sink_ = nullptr;

  LinkRegister* to_router_ = nullptr;
  LinkRegister* from_router_ = nullptr;
  LinkMonitor* out_monitor_ = nullptr;

  int vc_count_ = 1;
  std::vector<int> credits_;
  std::vector<int> credit_cap_;
  std::vector<std::deque<Flit>> staged_;  // per VC, current packet's flits
  int rr_vc_ = 0;

  std::deque<PendingPacket> source_queue_;
  std::vector<PendingPacket> scratch_;
  std::unordered_map<std::uint32_t, SimTime> head_injected_;
};

}  // namespace nocsim
