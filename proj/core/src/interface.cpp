#include "nocsim/interface.hpp"

namespace nocsim {

NetworkInterface::NetworkInterface(NodeId id, SimTime period,
                                   Monitors* monitors,
                                   std::uint32_t* next_packet_id)
    : id_(id),
      period_(period),
      monitors_(monitors),
      next_packet_id_(next_packet_id) {}

void NetworkInterface::bind(LinkRegister* to_router, LinkRegister* from_router,
                            LinkMonitor* to_router_monitor,
                            const PortRecord& router_local_port) {
  to_router_ = to_router;
  from_router_ = from_router;
  out_monitor_ = to_router_monitor;
  vc_count_ = router_local_port.vc_count;
  credits_ = router_local_port.vc_depths;
  credit_cap_ = router_local_port.vc_depths;
  staged_.resize(static_cast<std::size_t>(vc_count_));
}

void NetworkInterface::on_edge(SimTime now) {
  eject(now);
  to_router_->take_credits(now, [&](int vc) {
    int& c = credits_[static_cast<std::size_t>(vc)];
    if (++c > credit_cap_[static_cast<std::size_t>(vc)])
      throw SimulationError("credit overflow at interface " +
                            std::to_string(id_));
  });

  if (source_) {
    scratch_.clear();
    source_->step(now, scratch_);
    for (const PendingPacket& p : scratch_) {
      if (p.dst == id_) {
        // Same-tile transfer: delivered without entering the network.
        if (token_sink_ && p.dst_task >= 0)
          token_sink_->deliver_token(p.dst_task, p.color, p.src_task);
        continue;
      }
      source_queue_.push_back(p);
    }
  }

  stage_new_packet(now);
  send(now);
}

void NetworkInterface::eject(SimTime now) {
  auto entry = from_router_->sample(now);
  if (!entry) return;
  Flit flit = entry->flit;
  if (flit.dst != id_)
    throw SimulationError("interface " + std::to_string(id_) +
                          " received a flit for node " +
                          std::to_string(flit.dst));
  flit.ejected_at = now;
  monitors_->on_flit_ejected(flit);

  if (flit.kind == FlitKind::HeadTail) {
    monitors_->on_packet_ejected(flit.injected_at, flit);
  } else if (is_head(flit.kind)) {
    head_injected_[flit.packet_id] = flit.injected_at;
  } else if (is_tail(flit.kind)) {
    auto it = head_injected_.find(flit.packet_id);
    if (it == head_injected_.end())
      throw SimulationError("tail ejected without a matching head");
    monitors_->on_packet_ejected(it->second, flit);
    head_injected_.erase(it);
  }

  if (is_tail(flit.kind) && token_sink_ && flit.dst_task >= 0)
    token_sink_->deliver_token(flit.dst_task, flit.color, flit.src_task);

  from_router_->push_credit(entry->vc, now + period_);
}

void NetworkInterface::stage_new_packet(SimTime now) {
  if (source_queue_.empty()) return;
  // Lowest free VC, one new packet per cycle.
  int free_vc = -1;
  for (int vc = 0; vc < vc_count_; ++vc) {
    if (staged_[static_cast<std::size_t>(vc)].empty()) {
      free_vc = vc;
      break;
    }
  }
  if (free_vc == -1) return;
  const PendingPacket p = source_queue_.front();
  source_queue_.pop_front();

  const std::uint32_t pid = (*next_packet_id_)++;
  auto& q = staged_[static_cast<std::size_t>(free_vc)];
  for (int i = 0; i < p.length; ++i) {
    Flit f;
    if (p.length == 1) {
      f.kind = FlitKind::HeadTail;
    } else if (i == 0) {
      f.kind = FlitKind::Head;
    } else if (i == p.length - 1) {
      f.kind = FlitKind::Tail;
    } else {
      f.kind = FlitKind::Body;
    }
    f.color = static_cast<std::uint8_t>(p.color);
    f.sequence = static_cast<std::uint16_t>(i);
    f.packet_id = pid;
    f.src = id_;
    f.dst = p.dst;
    f.src_task = p.src_task;
    f.dst_task = p.dst_task;
    f.created_at = p.created_at;
    (void)now;
    q.push_back(f);
  }
}

void NetworkInterface::send(SimTime now) {
  bool sent = false;
  Flit sent_flit;
  if (to_router_->can_write(now)) {
    for (int off = 0; off < vc_count_; ++off) {
      const int vc = (rr_vc_ + off) % vc_count_;
      auto& q = staged_[static_cast<std::size_t>(vc)];
      if (q.empty()) continue;
      if (credits_[static_cast<std::size_t>(vc)] < 1) continue;
      Flit f = q.front();
      q.pop_front();
      credits_[static_cast<std::size_t>(vc)] -= 1;
      to_router_->write(f, vc, now + period_);
      if (out_monitor_) out_monitor_->check_wormhole(f, vc);
      sent = true;
      sent_flit = f;
      rr_vc_ = (vc + 1) % vc_count_;
      break;
    }
  }
  if (out_monitor_) out_monitor_->tick(sent ? &sent_flit : nullptr);
}

std::int64_t NetworkInterface::staged_flits() const {
  std::int64_t n = 0;
  for (const auto& q : staged_) n += static_cast<std::int64_t>(q.size());
  return n;
}

}  // namespace nocsim
