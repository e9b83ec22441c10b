#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nocsim {

// Simulation time in integer picoseconds. Clock periods are configured in
// nanoseconds and must convert to a whole number of picoseconds.
using SimTime = std::int64_t;
inline constexpr SimTime kPsPerNs = 1000;

using NodeId = std::int32_t;
using LinkId = std::int32_t;
inline constexpr NodeId kInvalidNode = -1;

enum class Direction : std::uint8_t {
  Local = 0,
  East,
  West,
  North,
  South,
  Up,
  Down,
};
inline constexpr int kDirectionCount = 7;

// Fixed port order used everywhere ports or directions are serialized.
inline constexpr std::array<Direction, kDirectionCount> kAllDirections = {
    Direction::Local, Direction::East,  Direction::West, Direction::North,
    Direction::South, Direction::Up,    Direction::Down};

constexpr Direction opposite(Direction d) {
  switch (d) {
    case Direction::Local: return Direction::Local;
    case Direction::East: return Direction::West;
    case Direction::West: return Direction::East;
    case Direction::North: return Direction::South;
    case Direction::South: return Direction::North;
    case Direction::Up: return Direction::Down;
    case Direction::Down: return Direction::Up;
  }
  return Direction::Local;
}

constexpr const char* to_string(Direction d) {
  switch (d) {
    case Direction::Local: return "local";
    case Direction::East: return "east";
    case Direction::West: return "west";
    case Direction::North: return "north";
    case Direction::South: return "south";
    case Direction::Up: return "up";
    case Direction::Down: return "down";
  }
  return "?";
}

struct Vec3 {
  int x = 0;
  int y = 0;
  int z = 0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

enum class FlitKind : std::uint8_t { Head, Body, Tail, HeadTail };

constexpr bool is_head(FlitKind k) {
  return k == FlitKind::Head || k == FlitKind::HeadTail;
}
constexpr bool is_tail(FlitKind k) {
  return k == FlitKind::Tail || k == FlitKind::HeadTail;
}

struct Flit {
  FlitKind kind = FlitKind::HeadTail;
  std::uint8_t color = 0;       // data-type index
  std::uint16_t sequence = 0;   // position within the packet
  std::uint32_t packet_id = 0;
  NodeId src = kInvalidNode;    // source PE node
  NodeId dst = kInvalidNode;    // destination PE node
  std::int32_t src_task = -1;   // task ids, -1 for synthetic traffic
  std::int32_t dst_task = -1;
  SimTime created_at = 0;       // packet creation (all flits share it)
  SimTime injected_at = 0;      // entry into the source router's local port
  SimTime ejected_at = 0;       // sampled by the destination interface
};

// Configuration / descriptor problems: bad files, bad values. CLI exit 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken runtime invariants (protocol violations, misroutes). CLI exit 2.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem problems while reading or writing artifacts. CLI exit 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nocsim
