#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nocsim/topology.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

enum class BenchmarkKind : std::uint8_t { Synthetic, Task };

struct SyntheticConfig {
  int restarts = 1;
  std::int64_t warmup_start_ns = 0;
  std::int64_t warmup_duration_ns = 0;
  double warmup_rate = 0.0;                 // flits per cycle
  double run_rate_min = 0.0;
  double run_rate_max = 0.0;
  double run_rate_step = 0.01;
  std::int64_t run_start_after_warmup_ns = 0;
  std::int64_t run_duration_ns = 0;
  int num_cores = 1;
  std::string sim_dir = "sim";

  std::int64_t run_start_ns() const {
    return warmup_start_ns + warmup_duration_ns + run_start_after_warmup_ns;
  }
  std::vector<double> rate_grid() const;
};

struct SimulationConfig {
  std::int64_t simulation_time_ns = 0;
  int flits_per_packet = 1;
  BenchmarkKind benchmark = BenchmarkKind::Synthetic;
  std::string task_lib_dir;
  SyntheticConfig synthetic;
  std::vector<NodeId> report_routers;       // empty = all routers
  std::uint64_t seed = 0;
};

enum class BufferDepthMode : std::uint8_t { Single, PerVc };

struct NetworkShorthand {
  int z = 1;
  std::vector<int> x;                        // per-layer router columns
  std::vector<int> y;                        // per-layer router rows
  std::string routing = "XYZ";
  std::vector<double> clock_delay_ns;        // per layer
  BufferDepthMode depth_mode = BufferDepthMode::Single;
  int buffer_depth = 4;
  std::vector<int> buffers_depths;           // per VC when depth_mode=PerVc
  int vc_count = 1;
  std::string topology_file;
  int flit_size = 32;

  std::vector<int> depths_for_port() const;  // resolved per-VC depth list
};

struct ParsedConfig {
  SimulationConfig sim;
  NetworkShorthand network;
  std::vector<std::string> warnings;         // unknown keys, ignored values
};

// --- Application model -----------------------------------------------------

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct RequirementSpec {
  int type = 0;          // data-type (color) id
  int source_task = 0;
  IntRange count{1, 1};
};

struct DestinationSpec {
  IntRange delay;
  IntRange interval;
  IntRange count{1, 1};
  int type = 0;
  int task = 0;
};

struct PossibilitySpec {
  double probability = 1.0;
  std::vector<DestinationSpec> destinations;
};

struct AppTaskSpec {
  int id = 0;
  IntRange start;
  IntRange duration;
  IntRange repeat{1, 1};
  std::vector<RequirementSpec> requirements;
  std::vector<PossibilitySpec> possibilities;
};

struct DataTypeSpec {
  int id = 0;
  std::string name;
};

struct ApplicationSpec {
  std::vector<AppTaskSpec> tasks;
  std::vector<DataTypeSpec> data_types;

  const AppTaskSpec* task(int id) const;
  int color_index(int type_id) const;        // dense index into data_types
};

struct MappingEntry {
  int task = 0;
  NodeId node = kInvalidNode;
};
using Mapping = std::vector<MappingEntry>;

// --- Parsers ---------------------------------------------------------------

// Single-point-of-entry ini file: sections Config, Task, Synthetic, Report
// and the Network block.
ParsedConfig parse_config(std::string_view text, std::string_view file = "config.ini");

// Topology descriptor: nodeTypes / nodes / connections.
NetworkGraph parse_topology(std::string_view text, std::string_view file = "network.xml");

// Application descriptor: tasks with requirements and send possibilities,
// plus the dataTypes section.
ApplicationSpec parse_application(std::string_view text,
                                  std::string_view file = "application.xml");

// Mapping descriptor: <map><bind task=".." node=".."/></map>.
Mapping parse_mapping(std::string_view text, std::string_view file = "mapping.xml");

void validate_mapping(const Mapping& mapping, const ApplicationSpec& app,
                      const NetworkGraph& graph);

// Expands mesh shorthand to a full graph: per layer an x*y router grid with
// an attached PE per router, in-plane neighbor connections and vertical
// connections where (x, y) positions coincide on adjacent layers.
NetworkGraph expand_mesh(const NetworkShorthand& shorthand);

// Serializes a graph back to the topology descriptor schema. Re-parsing the
// result reproduces the graph.
std::string write_topology_xml(const NetworkGraph& graph);

// Convenience wrappers that read files and decorate errors with paths.
std::string read_text_file(const std::string& path);
NetworkGraph load_network(const ParsedConfig& cfg,
                          const std::string& base_dir = {});

}  // namespace nocsim
