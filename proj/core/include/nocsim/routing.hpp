#pragma once

#include <array>
#include <string>
#include <vector>

#include "nocsim/topology.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

enum class RoutingAlgorithm : std::uint8_t {
  XY,              // dimension order: x, then y (2D)
  XYZ,             // dimension order: x, then y, then z
  ZPlusXYZMinus,   // ascend first, then x, then y, then descend
};

RoutingAlgorithm routing_from_string(const std::string& name);
const char* to_string(RoutingAlgorithm a);

// Deterministic routing decision. Returns Local iff current == dest.
Direction route(RoutingAlgorithm algorithm, Vec3 current, Vec3 dest);

// The set of (input, output) crossbar turns a routing algorithm can exercise
// at one router.
class TurnMask {
 public:
  bool allowed(Direction in, Direction out) const {
    return mask_[idx(in)][idx(out)];
  }
  void allow(Direction in, Direction out) { mask_[idx(in)][idx(out)] = true; }

  int count() const;
  std::vector<std::pair<Direction, Direction>> turns() const;

 private:
  static std::size_t idx(Direction d) { return static_cast<std::size_t>(d); }
  std::array<std::array<bool, kDirectionCount>, kDirectionCount> mask_{};
};

// Exhaustive enumeration over all (source PE, destination PE) pairs: a turn
// is in the mask iff some pair's route enters the router via `in` and leaves
// via `out`. Source traffic enters via local, delivered traffic leaves via
// local.
TurnMask allowed_turns(RoutingAlgorithm algorithm, const NetworkGraph& graph,
                       NodeId router);

// Same enumeration in one network pass.
std::vector<TurnMask> allowed_turns_all(RoutingAlgorithm algorithm,
                                        const NetworkGraph& graph);

// Fraction of the crossbar removable when impossible turns are dropped:
// 1 - |allowed| / |input x output pairs excluding u-turns| over the
// router's populated ports.
double crossbar_reduction(const TurnMask& mask,
                          const std::vector<Direction>& ports);

}  // namespace nocsim
