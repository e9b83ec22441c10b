#include "nocsim/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace nocsim {

int LinkStateSpace::state_of(const Flit& flit) const {
  if (is_head(flit.kind)) return head_active();
  const int color = static_cast<int>(flit.color);
  if (color < 0 || color >= colors_)
    throw SimulationError("flit carries undeclared color " +
                          std::to_string(color));
  return color_active(color);
}

int LinkStateSpace::idle_of(int state) const {
  if (state == initial()) return initial();
  if (state == head_active() || state == head_idle()) return head_idle();
  const int color = (state - 3) / 2;
  return color_idle(color);
}

std::vector<std::string> LinkStateSpace::labels(
    const std::vector<std::string>& color_names) const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(size()));
  out.emplace_back("initial");
  out.emplace_back("head_active");
  out.emplace_back("head_idle");
  for (int c = 0; c < colors_; ++c) {
    const std::string base = c < static_cast<int>(color_names.size())
                                 ? color_names[static_cast<std::size_t>(c)]
                                 : "color" + std::to_string(c);
    out.push_back(base + "_active");
    out.push_back(base + "_idle");
  }
  return out;
}

void LinkMonitor::tick(const Flit* flit) {
  const int next = flit ? space_.state_of(*flit) : space_.idle_of(state_);
  counts_[static_cast<std::size_t>(state_) *
              static_cast<std::size_t>(space_.size()) +
          static_cast<std::size_t>(next)] += 1;
  state_ = next;
  ++cycles_;
  if (flit) ++flits_;
}

void LinkMonitor::check_wormhole(const Flit& flit, int vc) {
  auto& active = vc_active_packet_[static_cast<std::size_t>(vc)];
  auto& next_seq = vc_next_sequence_[static_cast<std::size_t>(vc)];
  if (is_head(flit.kind)) {
    if (active != -1)
      throw SimulationError("link " + std::to_string(link_) + " vc " +
                            std::to_string(vc) +
                            ": head of packet " +
                            std::to_string(flit.packet_id) +
                            " interleaves with packet " +
                            std::to_string(active));
    if (flit.sequence != 0)
      throw SimulationError("head flit with nonzero sequence");
    active = static_cast<std::int32_t>(flit.packet_id);
    next_seq = 1;
  } else {
    if (active != static_cast<std::int32_t>(flit.packet_id))
      throw SimulationError("link " + std::to_string(link_) + " vc " +
                            std::to_string(vc) +
                            ": flit of packet " +
                            std::to_string(flit.packet_id) +
                            " without an active head");
    if (flit.sequence != next_seq)
      throw SimulationError("link " + std::to_string(link_) + " vc " +
                            std::to_string(vc) + ": flit sequence " +
                            std::to_string(flit.sequence) +
                            " breaks contiguity");
    ++next_seq;
  }
  if (is_tail(flit.kind)) {
    active = -1;
    next_seq = 0;
  }
}

std::vector<double> LinkMonitor::normalized() const {
  if (cycles_ == 0)
    throw SimulationError("cannot normalize a matrix with zero cycles");
  std::vector<double> out(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i)
    out[i] = static_cast<double>(counts_[i]) / static_cast<double>(cycles_);
  return out;
}

void LatencyAccumulator::add(SimTime latency_ps) {
  if (latency_ps < 0)
    throw SimulationError("negative latency observed: clock bug");
  ++count_;
  const double v = static_cast<double>(latency_ps);
  sum_ += v;
  sum_sq_ += v * v;
  if (reservoir_.size() < capacity_) {
    reservoir_.push_back(latency_ps);
  } else {
    const std::uint64_t j = rng_.below(static_cast<std::uint64_t>(count_));
    if (j < capacity_) reservoir_[static_cast<std::size_t>(j)] = latency_ps;
  }
}

double LatencyAccumulator::mean_ns() const {
  if (count_ == 0) return 0.0;
  return sum_ / static_cast<double>(count_) / static_cast<double>(kPsPerNs);
}

double LatencyAccumulator::std_ns() const {
  if (count_ == 0) return 0.0;
  const double n = static_cast<double>(count_);
  const double mean = sum_ / n;
  const double var = std::max(0.0, sum_sq_ / n - mean * mean);
  return std::sqrt(var) / static_cast<double>(kPsPerNs);
}

double LatencyAccumulator::median_ns() const {
  if (reservoir_.empty()) return 0.0;
  std::vector<SimTime> copy = reservoir_;
  std::sort(copy.begin(), copy.end());
  const std::size_t n = copy.size();
  double median_ps;
  if (n % 2 == 1) {
    median_ps = static_cast<double>(copy[n / 2]);
  } else {
    median_ps =
        (static_cast<double>(copy[n / 2 - 1]) + static_cast<double>(copy[n / 2])) /
        2.0;
  }
  return median_ps / static_cast<double>(kPsPerNs);
}

UsageMonitor::UsageMonitor(const NodeRecord& router) {
  for (Direction d : kAllDirections) {
    const PortRecord* p = router.port(d);
    if (!p) continue;
    PortUsage u;
    u.dir = d;
    u.vc_hist.assign(static_cast<std::size_t>(p->vc_count) + 1, 0);
    u.slot_hist.resize(static_cast<std::size_t>(p->vc_count));
    for (int vc = 0; vc < p->vc_count; ++vc)
      u.slot_hist[static_cast<std::size_t>(vc)].assign(
          static_cast<std::size_t>(p->vc_depths[static_cast<std::size_t>(vc)]),
          0);
    ports_.push_back(std::move(u));
  }
}

void UsageMonitor::sample_port(int port_slot, int occupied_vcs,
                               const std::vector<int>& vc_occupancy) {
  PortUsage& u = ports_[static_cast<std::size_t>(port_slot)];
  u.vc_hist[static_cast<std::size_t>(occupied_vcs)] += 1;
  for (std::size_t vc = 0; vc < vc_occupancy.size(); ++vc) {
    const int occ = vc_occupancy[vc];
    // A buffer filled to depth k occupies slots 0..k-1 this cycle.
    for (int s = 0; s < occ; ++s)
      u.slot_hist[vc][static_cast<std::size_t>(s)] += 1;
  }
}

Monitors::Monitors(const NetworkGraph& graph, int colors,
                   std::vector<std::string> color_names, std::uint64_t seed)
    : colors_(colors),
      color_names_(std::move(color_names)),
      lat_{LatencyAccumulator(derive_seed(seed, 0xF117)),
           LatencyAccumulator(derive_seed(seed, 0xFACE)),
           LatencyAccumulator(derive_seed(seed, 0x0E77))} {
  const std::vector<LinkRecord> links = graph.links_of();
  links_.reserve(links.size());
  for (const LinkRecord& l : links) {
    const PortRecord* p = graph.node(l.driver).port(l.driver_dir);
    links_.emplace_back(l.id, colors_, p->vc_count);
  }
  usage_.resize(graph.nodes().size());
  for (const NodeRecord& n : graph.nodes())
    if (n.kind == NodeKind::Router)
      usage_[static_cast<std::size_t>(n.id)] = UsageMonitor(n);
}

void Monitors::on_flit_ejected(const Flit& flit) {
  ++ejected_;
  if (in_window(flit.created_at))
    lat_.flit.add(flit.ejected_at - flit.created_at);
}

void Monitors::on_packet_ejected(SimTime head_injected_at, const Flit& tail) {
  if (!in_window(tail.created_at)) return;
  lat_.packet.add(tail.ejected_at - tail.created_at);
  lat_.network.add(tail.ejected_at - head_injected_at);
}

}  // namespace nocsim
