#pragma once

// Shared fixture builders for simulation-level tests.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/simulation.hpp"

namespace testutil {

using namespace nocsim;

inline NetworkGraph make_mesh(std::vector<int> x, std::vector<int> y,
                              std::vector<double> clock_ns,
                              const std::string& routing, int vc_count,
                              int depth) {
  NetworkShorthand sh;
  sh.z = static_cast<int>(x.size());
  sh.x = std::move(x);
  sh.y = std::move(y);
  sh.clock_delay_ns = std::move(clock_ns);
  sh.routing = routing;
  sh.vc_count = vc_count;
  sh.buffer_depth = depth;
  return expand_mesh(sh);
}

// One task per (src, dst) stream: fires `repeat` times, each firing sends
// `count` packets of `type` spaced `interval_ns`, all with delay 0.
struct StreamSpec {
  int src_task;
  int dst_task;
  int type;
  std::int64_t repeat;
  std::int64_t count;
  std::int64_t interval_ns;
  std::int64_t start_ns = 0;
};

inline ApplicationSpec make_app(const std::vector<StreamSpec>& streams,
                                int n_tasks, int n_types) {
  ApplicationSpec app;
  for (int t = 0; t < n_types; ++t)
    app.data_types.push_back({t, "c" + std::to_string(t)});
  for (int i = 0; i < n_tasks; ++i) {
    AppTaskSpec task;
    task.id = i;
    task.start = {0, 0};
    task.duration = {std::int64_t{1} << 40, std::int64_t{1} << 40};
    task.repeat = {0, 0};
    app.tasks.push_back(task);
  }
  for (const StreamSpec& s : streams) {
    AppTaskSpec& task = app.tasks[static_cast<std::size_t>(s.src_task)];
    task.start = {s.start_ns, s.start_ns};
    task.repeat = {s.repeat, s.repeat};
    PossibilitySpec p;
    p.probability = 1.0;
    DestinationSpec d;
    d.delay = {0, 0};
    d.interval = {s.interval_ns, s.interval_ns};
    d.count = {s.count, s.count};
    d.type = s.type;
    d.task = s.dst_task;
    p.destinations.push_back(d);
    if (!task.possibilities.empty())
      throw std::runtime_error("one stream per source task in this helper");
    task.possibilities.push_back(p);
  }
  return app;
}

inline Mapping map_tasks_to_pes(const NetworkGraph& g,
                                const std::vector<int>& task_for_pe_index) {
  const std::vector<NodeId> pes = g.processing_elements();
  Mapping m;
  for (std::size_t i = 0; i < task_for_pe_index.size(); ++i)
    if (task_for_pe_index[i] >= 0)
      m.push_back({task_for_pe_index[i], pes[i]});
  return m;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

// Recursive byte comparison of two directory trees.
inline bool trees_identical(const std::filesystem::path& a,
                            const std::filesystem::path& b) {
  namespace fs = std::filesystem;
  std::vector<fs::path> rel_a, rel_b;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) rel_a.push_back(fs::relative(e.path(), a));
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) rel_b.push_back(fs::relative(e.path(), b));
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) return false;
  for (const auto& rel : rel_a)
    if (read_file(a / rel) != read_file(b / rel)) return false;
  return true;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("nocsim_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string str(const std::string& sub = {}) const {
    return sub.empty() ? path.string() : (path / sub).string();
  }
};

}  // namespace testutil
