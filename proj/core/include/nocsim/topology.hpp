#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nocsim/types.hpp"

namespace nocsim {

enum class NodeKind : std::uint8_t { Router, ProcessingElement };

struct PortRecord {
  NodeId owner = kInvalidNode;
  Direction dir = Direction::Local;
  int vc_count = 1;
  std::vector<int> vc_depths;   // length vc_count
  NodeId peer_node = kInvalidNode;
  Direction peer_dir = Direction::Local;
  int connection_id = -1;
};

struct NodeRecord {
  NodeId id = kInvalidNode;
  NodeKind kind = NodeKind::Router;
  Vec3 position;
  SimTime clock_period_ps = 1000;
  std::string routing;          // routers only
  std::vector<PortRecord> ports;

  const PortRecord* port(Direction d) const {
    for (const PortRecord& p : ports)
      if (p.dir == d) return &p;
    return nullptr;
  }
};

// Links are unidirectional: every configured connection contributes one
// link per direction.
struct LinkRecord {
  LinkId id = -1;
  NodeId driver = kInvalidNode;
  Direction driver_dir = Direction::Local;
  NodeId sink = kInvalidNode;
  Direction sink_dir = Direction::Local;
  int width_bits = 32;
};

// Endpoint parameters of one side of a connection, before direction
// resolution.
struct EndpointSpec {
  NodeId node = kInvalidNode;
  int vc_count = 1;
  std::vector<int> vc_depths;
};

class NetworkGraph {
 public:
  NodeId add_node(NodeKind kind, Vec3 position, SimTime clock_period_ps,
                  std::string routing = {});

  // Registers a bidirectional connection between two endpoints. Directions
  // are derived from positions: coincident positions connect local ports,
  // adjacent positions connect the matching compass ports.
  void add_connection(const EndpointSpec& a, const EndpointSpec& b);

  // Checks port symmetry, position uniqueness per kind and layer, and that
  // every PE hangs off exactly one router.
  void validate() const;

  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const NodeRecord& node(NodeId id) const;
  int connection_count() const { return connection_count_; }

  int flit_size_bits = 32;

  std::vector<NodeId> routers() const;
  std::vector<NodeId> processing_elements() const;

  // The PE attached to a router's local port (and vice versa).
  NodeId local_peer(NodeId id) const;

  // Compass direction from a to b. Throws SimulationError when the nodes
  // are not directly connected.
  Direction direction_between(NodeId a, NodeId b) const;

  // Deterministic link ordering: ascending driver id, then port order.
  std::vector<LinkRecord> links_of() const;

  std::vector<int> layers() const;  // sorted distinct z coordinates

 private:
  std::vector<NodeRecord> nodes_;
  int connection_count_ = 0;
};

// Compass direction implied by two positions; nullopt when they are neither
// coincident nor unit-distance apart along one axis.
std::optional<Direction> direction_of_offset(Vec3 from, Vec3 to);

}  // namespace nocsim
