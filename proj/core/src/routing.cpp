#include "nocsim/routing.hpp"

#include <map>

namespace nocsim {

RoutingAlgorithm routing_from_string(const std::string& name) {
  if (name == "XY") return RoutingAlgorithm::XY;
  if (name == "XYZ") return RoutingAlgorithm::XYZ;
  if (name == "ZplusXYZminus" || name == "Z+(XY)Z-")
    return RoutingAlgorithm::ZPlusXYZMinus;
  throw ConfigError("unknown routing algorithm '" + name + "'");
}

const char* to_string(RoutingAlgorithm a) {
  switch (a) {
    case RoutingAlgorithm::XY: return "XY";
    case RoutingAlgorithm::XYZ: return "XYZ";
    case RoutingAlgorithm::ZPlusXYZMinus: return "ZplusXYZminus";
  }
  return "?";
}

Direction route(RoutingAlgorithm algorithm, Vec3 current, Vec3 dest) {
  const int dx = dest.x - current.x;
  const int dy = dest.y - current.y;
  const int dz = dest.z - current.z;
  if (dx == 0 && dy == 0 && dz == 0) return Direction::Local;

  switch (algorithm) {
    case RoutingAlgorithm::XY:
      if (dx != 0) return dx > 0 ? Direction::East : Direction::West;
      if (dy != 0) return dy > 0 ? Direction::North : Direction::South;
      throw SimulationError("XY routing cannot resolve a z offset");
    case RoutingAlgorithm::XYZ:
      if (dx != 0) return dx > 0 ? Direction::East : Direction::West;
      if (dy != 0) return dy > 0 ? Direction::North : Direction::South;
      return dz > 0 ? Direction::Up : Direction::Down;
    case RoutingAlgorithm::ZPlusXYZMinus:
      // Vertical resolution first, in-plane at the destination layer.
      // Keeps crossbar usage per router no wider than XYZ while still
      // ascending before in-plane movement.
      if (dz > 0) return Direction::Up;
      if (dz < 0) return Direction::Down;
      if (dx != 0) return dx > 0 ? Direction::East : Direction::West;
      return dy > 0 ? Direction::North : Direction::South;
  }
  throw SimulationError("unhandled routing algorithm");
}

int TurnMask::count() const {
  int n = 0;
  for (const auto& row : mask_)
    for (bool b : row) n += b ? 1 : 0;
  return n;
}

std::vector<std::pair<Direction, Direction>> TurnMask::turns() const {
  std::vector<std::pair<Direction, Direction>> out;
  for (Direction in : kAllDirections)
    for (Direction o : kAllDirections)
      if (allowed(in, o)) out.emplace_back(in, o);
  return out;
}

std::vector<TurnMask> allowed_turns_all(RoutingAlgorithm algorithm,
                                        const NetworkGraph& graph) {
  std::vector<TurnMask> masks(graph.nodes().size());

  // Router lookup by position for hop walking.
  std::map<std::tuple<int, int, int>, NodeId> router_at;
  for (const NodeRecord& n : graph.nodes())
    if (n.kind == NodeKind::Router)
      router_at[{n.position.x, n.position.y, n.position.z}] = n.id;

  const std::vector<NodeId> pes = graph.processing_elements();
  for (NodeId src_pe : pes) {
    const NodeId src_router = graph.local_peer(src_pe);
    for (NodeId dst_pe : pes) {
      if (dst_pe == src_pe) continue;
      const Vec3 dest = graph.node(dst_pe).position;
      NodeId current = src_router;
      Direction entered = Direction::Local;
      // Minimal deterministic routes terminate within the Manhattan
      // distance; the bound guards against a broken algorithm definition.
      const Vec3 start = graph.node(current).position;
      int budget = std::abs(dest.x - start.x) + std::abs(dest.y - start.y) +
                   std::abs(dest.z - start.z) + 1;
      for (;;) {
        const Vec3 here = graph.node(current).position;
        const Direction out = route(algorithm, here, dest);
        masks[static_cast<std::size_t>(current)].allow(entered, out);
        if (out == Direction::Local) break;
        if (--budget < 0)
          throw SimulationError("route did not terminate between nodes " +
                                std::to_string(src_pe) + " and " +
                                std::to_string(dst_pe));
        Vec3 next = here;
        switch (out) {
          case Direction::East: next.x += 1; break;
          case Direction::West: next.x -= 1; break;
          case Direction::North: next.y += 1; break;
          case Direction::South: next.y -= 1; break;
          case Direction::Up: next.z += 1; break;
          case Direction::Down: next.z -= 1; break;
          case Direction::Local: break;
        }
        auto it = router_at.find({next.x, next.y, next.z});
        if (it == router_at.end())
          throw SimulationError(
              "destination unreachable: no router in direction " +
              std::string(to_string(out)) + " from node " +
              std::to_string(current));
        current = it->second;
        entered = opposite(out);
      }
    }
  }
  return masks;
}

TurnMask allowed_turns(RoutingAlgorithm algorithm, const NetworkGraph& graph,
                       NodeId router) {
  if (graph.node(router).kind != NodeKind::Router)
    throw ConfigError("node " + std::to_string(router) + " is not a router");
  return allowed_turns_all(algorithm, graph)[static_cast<std::size_t>(router)];
}

double crossbar_reduction(const TurnMask& mask,
                          const std::vector<Direction>& ports) {
  if (ports.empty()) throw ConfigError("crossbar_reduction: empty port list");
  int total = 0;
  int allowed = 0;
  for (Direction in : ports) {
    for (Direction out : ports) {
      // Ports are named after the neighbor they face, so a u-turn (sending a
      // flit back where it came from) is the (d, d) pair.
      if (out == in) continue;
      ++total;
      if (mask.allowed(in, out)) ++allowed;
    }
  }
  if (total == 0) return 0.0;
  return 1.0 - static_cast<double>(allowed) / static_cast<double>(total);
}

}  // namespace nocsim
