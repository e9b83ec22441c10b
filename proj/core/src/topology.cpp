#include "nocsim/topology.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nocsim {

std::optional<Direction> direction_of_offset(Vec3 from, Vec3 to) {
  const int dx = to.x - from.x;
  const int dy = to.y - from.y;
  const int dz = to.z - from.z;
  if (dx == 0 && dy == 0 && dz == 0) return Direction::Local;
  if (dy == 0 && dz == 0 && dx == 1) return Direction::East;
  if (dy == 0 && dz == 0 && dx == -1) return Direction::West;
  if (dx == 0 && dz == 0 && dy == 1) return Direction::North;
  if (dx == 0 && dz == 0 && dy == -1) return Direction::South;
  if (dx == 0 && dy == 0 && dz == 1) return Direction::Up;
  if (dx == 0 && dy == 0 && dz == -1) return Direction::Down;
  return std::nullopt;
}

NodeId NetworkGraph::add_node(NodeKind kind, Vec3 position,
                              SimTime clock_period_ps, std::string routing) {
  if (clock_period_ps <= 0)
    throw ConfigError("node clock period must be positive");
  NodeRecord n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.kind = kind;
  n.position = position;
  n.clock_period_ps = clock_period_ps;
  n.routing = std::move(routing);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

const NodeRecord& NetworkGraph::node(NodeId id) const {
  if (id < 0 || id >= static_cast<NodeId>(nodes_.size()))
    throw ConfigError("unknown node id " + std::to_string(id));
  return nodes_[static_cast<std::size_t>(id)];
}

void NetworkGraph::add_connection(const EndpointSpec& a,
                                  const EndpointSpec& b) {
  const NodeRecord& na = node(a.node);
  const NodeRecord& nb = node(b.node);

  Direction dir_ab;
  if (na.kind == NodeKind::ProcessingElement ||
      nb.kind == NodeKind::ProcessingElement) {
    if (na.kind == nb.kind)
      throw ConfigError("connection " + std::to_string(connection_count_) +
                        ": cannot connect two processing elements");
    dir_ab = Direction::Local;
  } else {
    auto d = direction_of_offset(na.position, nb.position);
    if (!d || *d == Direction::Local)
      throw ConfigError("connection " + std::to_string(connection_count_) +
                        ": routers " + std::to_string(a.node) + " and " +
                        std::to_string(b.node) +
                        " are not at adjacent positions");
    dir_ab = *d;
  }

  auto make_port = [this](const EndpointSpec& self, NodeId peer,
                          Direction dir, Direction peer_dir) {
    if (self.vc_count < 1)
      throw ConfigError("port of node " + std::to_string(self.node) +
                        ": vcCount must be >= 1");
    if (static_cast<int>(self.vc_depths.size()) != self.vc_count)
      throw ConfigError("port of node " + std::to_string(self.node) +
                        ": buffer depth list length " +
                        std::to_string(self.vc_depths.size()) +
                        " does not match vcCount " +
                        std::to_string(self.vc_count));
    for (int d : self.vc_depths)
      if (d < 1)
        throw ConfigError("port of node " + std::to_string(self.node) +
                          ": buffer depths must be >= 1");
    PortRecord p;
    p.owner = self.node;
    p.dir = dir;
    p.vc_count = self.vc_count;
    p.vc_depths = self.vc_depths;
    p.peer_node = peer;
    p.peer_dir = peer_dir;
    p.connection_id = connection_count_;
    NodeRecord& owner = nodes_[static_cast<std::size_t>(self.node)];
    if (owner.port(dir))
      throw ConfigError("node " + std::to_string(self.node) +
                        " already has a port in direction " +
                        std::string(to_string(dir)));
    owner.ports.push_back(std::move(p));
  };

  const Direction dir_ba = opposite(dir_ab);
  make_port(a, b.node, dir_ab, dir_ba);
  make_port(b, a.node, dir_ba, dir_ab);
  ++connection_count_;
}

void NetworkGraph::validate() const {
  std::set<std::tuple<int, int, int, int>> seen;  // kind,x,y,z
  for (const NodeRecord& n : nodes_) {
    auto key = std::make_tuple(static_cast<int>(n.kind), n.position.x,
                               n.position.y, n.position.z);
    if (!seen.insert(key).second)
      throw ConfigError("duplicate position for node " + std::to_string(n.id));
    for (const PortRecord& p : n.ports) {
      const NodeRecord& peer = node(p.peer_node);
      const PortRecord* back = peer.port(p.peer_dir);
      if (!back || back->peer_node != n.id || back->peer_dir != p.dir)
        throw SimulationError("asymmetric port pairing at node " +
                              std::to_string(n.id) + " " +
                              std::string(to_string(p.dir)));
    }
    if (n.kind == NodeKind::ProcessingElement) {
      if (n.ports.size() != 1 || n.ports[0].dir != Direction::Local)
        throw ConfigError("processing element " + std::to_string(n.id) +
                          " must have exactly one local connection");
    }
  }
}

std::vector<NodeId> NetworkGraph::routers() const {
  std::vector<NodeId> out;
  for (const NodeRecord& n : nodes_)
    if (n.kind == NodeKind::Router) out.push_back(n.id);
  return out;
}

std::vector<NodeId> NetworkGraph::processing_elements() const {
  std::vector<NodeId> out;
  for (const NodeRecord& n : nodes_)
    if (n.kind == NodeKind::ProcessingElement) out.push_back(n.id);
  return out;
}

NodeId NetworkGraph::local_peer(NodeId id) const {
  const PortRecord* p = node(id).port(Direction::Local);
  return p ? p->peer_node : kInvalidNode;
}

Direction NetworkGraph::direction_between(NodeId a, NodeId b) const {
  for (const PortRecord& p : node(a).ports)
    if (p.peer_node == b) return p.dir;
  throw SimulationError("nodes " + std::to_string(a) + " and " +
                        std::to_string(b) + " are not adjacent");
}

std::vector<LinkRecord> NetworkGraph::links_of() const {
  std::vector<LinkRecord> out;
  for (const NodeRecord& n : nodes_) {
    for (Direction d : kAllDirections) {
      const PortRecord* p = n.port(d);
      if (!p) continue;
      LinkRecord l;
      l.id = static_cast<LinkId>(out.size());
      l.driver = n.id;
      l.driver_dir = d;
      l.sink = p->peer_node;
      l.sink_dir = p->peer_dir;
      l.width_bits = flit_size_bits;
      out.push_back(l);
    }
  }
  return out;
}

std::vector<int> NetworkGraph::layers() const {
  std::set<int> zs;
  for (const NodeRecord& n : nodes_) zs.insert(n.position.z);
  return std::vector<int>(zs.begin(), zs.end());
}

}  // namespace nocsim
