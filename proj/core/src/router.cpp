#include "nocsim/router.hpp"

namespace nocsim {

RouterNode::RouterNode(const NodeRecord& record,
                       const std::vector<Vec3>& positions, NodeId local_pe,
                       Monitors* monitors, RouterEventCounts* events)
    : id_(record.id),
      position_(record.position),
      period_(record.clock_period_ps),
      algorithm_(routing_from_string(record.routing)),
      local_pe_(local_pe),
      positions_(positions),
      monitors_(monitors),
      events_(events) {
  port_index_.fill(-1);
}

void RouterNode::bind_port(Direction dir, LinkRegister* inbound,
                           LinkRegister* outbound,
                           LinkMonitor* outbound_monitor,
                           const PortRecord& own, const PortRecord& peer) {
  if (own.vc_count > 64 || peer.vc_count > 64)
    throw ConfigError("vcCount above 64 is not supported");
  Port p;
  p.dir = dir;
  p.in = inbound;
  p.out = outbound;
  p.out_monitor = outbound_monitor;
  p.vcs.resize(static_cast<std::size_t>(own.vc_count));
  for (int vc = 0; vc < own.vc_count; ++vc)
    p.vcs[static_cast<std::size_t>(vc)].capacity =
        own.vc_depths[static_cast<std::size_t>(vc)];
  // Credits mirror the downstream input buffers.
  p.credits = peer.vc_depths;
  p.credit_cap = peer.vc_depths;
  p.owner_port.assign(static_cast<std::size_t>(peer.vc_count), -1);
  p.owner_vc.assign(static_cast<std::size_t>(peer.vc_count), -1);
  port_index_[static_cast<std::size_t>(dir)] = static_cast<int>(ports_.size());
  ports_.push_back(std::move(p));
}

void RouterNode::on_edge(SimTime now) {
  for (Port& p : ports_) p.sent = false;

  phase_sample(now);
  phase_route(now);
  phase_vc_allocate(now);
  phase_switch_allocate(now);

  // Link-state recording happens in the driver's clock domain, once per
  // driver cycle, idle cycles included.
  for (Port& p : ports_)
    if (p.out_monitor) p.out_monitor->tick(p.sent ? &p.sent_flit : nullptr);
  sample_usage();
}

void RouterNode::phase_sample(SimTime now) {
  for (Port& p : ports_) {
    // Credits returned by the downstream node.
    p.out->take_credits(now, [&](int vc) {
      int& c = p.credits[static_cast<std::size_t>(vc)];
      if (++c > p.credit_cap[static_cast<std::size_t>(vc)])
        throw SimulationError("credit overflow at router " +
                              std::to_string(id_) + " port " +
                              to_string(p.dir));
    });
    // At most one flit lands per edge by the register's write discipline.
    if (auto entry = p.in->sample(now)) {
      const int vc = entry->vc;
      if (vc < 0 || vc >= static_cast<int>(p.vcs.size()))
        throw SimulationError("router " + std::to_string(id_) +
                              ": flit arrived on unknown vc " +
                              std::to_string(vc));
      VcState& buf = p.vcs[static_cast<std::size_t>(vc)];
      if (static_cast<int>(buf.q.size()) >= buf.capacity)
        throw SimulationError("router " + std::to_string(id_) + " port " +
                              to_string(p.dir) + " vc " + std::to_string(vc) +
                              ": flit arrived into a full buffer");
      Flit flit = entry->flit;
      if (is_head(flit.kind)) {
        if (buf.receiving_packet != -1)
          throw SimulationError("router " + std::to_string(id_) +
                                ": head interleaves an open packet on vc " +
                                std::to_string(vc));
        buf.receiving_packet = static_cast<std::int32_t>(flit.packet_id);
      } else if (buf.receiving_packet !=
                 static_cast<std::int32_t>(flit.packet_id)) {
        throw SimulationError("router " + std::to_string(id_) +
                              ": body/tail without an active packet on vc " +
                              std::to_string(vc));
      }
      if (is_tail(flit.kind)) buf.receiving_packet = -1;
      if (p.dir == Direction::Local) {
        flit.injected_at = now;
        monitors_->on_flit_injected();
      }
      buf.q.push_back(FlitSlot{flit, now + period_});
      events_->add(RouterEvent::BufferWrite);
    }
  }
}

void RouterNode::phase_route(SimTime) {
  for (Port& p : ports_) {
    for (VcState& vc : p.vcs) {
      if (vc.q.empty() || vc.has_route) continue;
      const Flit& front = vc.q.front().flit;
      if (!is_head(front.kind)) continue;
      const Direction out_dir =
          route(algorithm_, position_,
                positions_[static_cast<std::size_t>(front.dst)]);
      const int out_idx = port_index(out_dir);
      if (out_idx < 0)
        throw SimulationError("router " + std::to_string(id_) +
                              ": destination unreachable, no port " +
                              std::string(to_string(out_dir)));
      vc.has_route = true;
      vc.out_port = out_idx;
      events_->add(RouterEvent::RoutingCalc);
    }
  }
}

void RouterNode::phase_vc_allocate(SimTime) {
  constexpr int kVcStride = 64;
  const int key_space = kVcStride * static_cast<int>(ports_.size());
  for (std::size_t out_idx = 0; out_idx < ports_.size(); ++out_idx) {
    Port& out = ports_[out_idx];
    // Lowest-numbered free downstream VC; while all are owned, heads wait.
    int free_vc = -1;
    for (std::size_t vc = 0; vc < out.owner_port.size(); ++vc) {
      if (out.owner_port[vc] == -1) {
        free_vc = static_cast<int>(vc);
        break;
      }
    }
    if (free_vc == -1) continue;

    // Requesters: buffer-front heads routed here that hold no output VC.
    // Round robin over flattened (input port, vc) keys, one grant per
    // output port per cycle.
    int chosen = -1;
    int best_rank = key_space;
    for (std::size_t in_idx = 0; in_idx < ports_.size(); ++in_idx) {
      Port& in = ports_[in_idx];
      for (std::size_t vc = 0; vc < in.vcs.size(); ++vc) {
        VcState& state = in.vcs[vc];
        if (state.q.empty() || !state.has_route || state.out_vc != -1)
          continue;
        if (state.out_port != static_cast<int>(out_idx)) continue;
        if (!is_head(state.q.front().flit.kind)) continue;
        const int key =
            static_cast<int>(in_idx) * kVcStride + static_cast<int>(vc);
        const int rank = (key - out.rr_va + key_space) % key_space;
        if (rank < best_rank) {
          best_rank = rank;
          chosen = key;
        }
      }
    }
    if (chosen == -1) continue;
    const int in_idx = chosen / kVcStride;
    const int in_vc = chosen % kVcStride;
    out.rr_va = (chosen + 1) % key_space;
    out.owner_port[static_cast<std::size_t>(free_vc)] = in_idx;
    out.owner_vc[static_cast<std::size_t>(free_vc)] = in_vc;
    ports_[static_cast<std::size_t>(in_idx)]
        .vcs[static_cast<std::size_t>(in_vc)]
        .out_vc = free_vc;
  }
}

void RouterNode::phase_switch_allocate(SimTime now) {
  // Input-first: each input nominates one sendable VC by round robin.
  // Sendable: route known, output VC owned, at least one credit, past its
  // arrival cycle.
  nominated_vc_.assign(ports_.size(), -1);
  nominated_out_.assign(ports_.size(), -1);
  for (std::size_t in_idx = 0; in_idx < ports_.size(); ++in_idx) {
    Port& in = ports_[in_idx];
    const int vcs = static_cast<int>(in.vcs.size());
    for (int off = 0; off < vcs; ++off) {
      const int vc = (in.rr_sa_vc + off) % vcs;
      VcState& state = in.vcs[static_cast<std::size_t>(vc)];
      if (state.q.empty() || !state.has_route || state.out_vc == -1) continue;
      if (state.q.front().eligible_at > now) continue;
      Port& out = ports_[static_cast<std::size_t>(state.out_port)];
      if (out.credits[static_cast<std::size_t>(state.out_vc)] < 1) continue;
      nominated_vc_[in_idx] = vc;
      nominated_out_[in_idx] = state.out_port;
      break;
    }
  }

  // Output arbitration: one grant per output, round robin over inputs. A
  // busy outbound wire (a slower sink has not latched the last phit yet)
  // grants nothing this cycle.
  const int n_ports = static_cast<int>(ports_.size());
  for (int out_idx = 0; out_idx < n_ports; ++out_idx) {
    Port& out = ports_[static_cast<std::size_t>(out_idx)];
    if (!out.out->can_write(now)) continue;
    int chosen = -1;
    int best_rank = n_ports;
    for (int in_idx = 0; in_idx < n_ports; ++in_idx) {
      if (nominated_out_[static_cast<std::size_t>(in_idx)] != out_idx)
        continue;
      const int rank = (in_idx - out.rr_sa_input + n_ports) % n_ports;
      if (rank < best_rank) {
        best_rank = rank;
        chosen = in_idx;
      }
    }
    if (chosen == -1) continue;
    out.rr_sa_input = (chosen + 1) % n_ports;

    Port& in = ports_[static_cast<std::size_t>(chosen)];
    const int in_vc = nominated_vc_[static_cast<std::size_t>(chosen)];
    VcState& state = in.vcs[static_cast<std::size_t>(in_vc)];
    in.rr_sa_vc = (in_vc + 1) % static_cast<int>(in.vcs.size());

    // Traversal.
    FlitSlot slot = state.q.front();
    state.q.pop_front();
    events_->add(RouterEvent::BufferRead);
    events_->add(RouterEvent::BufferPop);
    events_->add(RouterEvent::CrossbarTraversal);

    if (turn_mask_ && !turn_mask_->allowed(in.dir, out.dir))
      throw SimulationError("router " + std::to_string(id_) + ": traversal " +
                            std::string(to_string(in.dir)) + "->" +
                            to_string(out.dir) +
                            " is outside the allowed turn mask");
    if (out.dir == Direction::Local && slot.flit.dst != local_pe_)
      throw SimulationError("router " + std::to_string(id_) +
                            ": flit for node " +
                            std::to_string(slot.flit.dst) +
                            " ejected at the wrong router");

    const int out_vc = state.out_vc;
    out.credits[static_cast<std::size_t>(out_vc)] -= 1;
    if (out.credits[static_cast<std::size_t>(out_vc)] < 0)
      throw SimulationError("credit underflow at router " +
                            std::to_string(id_));
    // The flit spends the traversal cycle on the wire; the downstream node
    // latches it at its first edge after that.
    out.out->write(slot.flit, out_vc, now + period_);
    if (out.out_monitor) out.out_monitor->check_wormhole(slot.flit, out_vc);
    out.sent = true;
    out.sent_flit = slot.flit;
    // The freed buffer slot becomes a credit toward our upstream.
    in.in->push_credit(in_vc, now + period_);

    if (is_tail(slot.flit.kind)) {
      out.owner_port[static_cast<std::size_t>(out_vc)] = -1;
      out.owner_vc[static_cast<std::size_t>(out_vc)] = -1;
      state.has_route = false;
      state.out_port = -1;
      state.out_vc = -1;
    }
  }
}

void RouterNode::sample_usage() {
  UsageMonitor& usage = monitors_->usage(id_);
  for (std::size_t idx = 0; idx < ports_.size(); ++idx) {
    const Port& p = ports_[idx];
    occupancy_scratch_.clear();
    int occupied = 0;
    for (const VcState& vc : p.vcs) {
      occupancy_scratch_.push_back(static_cast<int>(vc.q.size()));
      if (!vc.q.empty()) ++occupied;
    }
    usage.sample_port(static_cast<int>(idx), occupied, occupancy_scratch_);
  }
}

int RouterNode::occupancy(Direction dir, int vc) const {
  const int idx = port_index(dir);
  if (idx < 0) return 0;
  return static_cast<int>(ports_[static_cast<std::size_t>(idx)]
                              .vcs[static_cast<std::size_t>(vc)]
                              .q.size());
}

int RouterNode::credits(Direction dir, int vc) const {
  const int idx = port_index(dir);
  if (idx < 0) return 0;
  return ports_[static_cast<std::size_t>(idx)]
      .credits[static_cast<std::size_t>(vc)];
}

std::int64_t RouterNode::buffered_flits() const {
  std::int64_t n = 0;
  for (const Port& p : ports_)
    for (const VcState& vc : p.vcs) n += static_cast<std::int64_t>(vc.q.size());
  return n;
}

}  // namespace nocsim
