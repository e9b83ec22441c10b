#include "nocsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nocsim/xml.hpp"

namespace nocsim {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::int64_t parse_i64(const std::string& value, const std::string& context) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": '" + value + "' is not an integer");
  }
}

double parse_f64(const std::string& value, const std::string& context) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": '" + value + "' is not a number");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::string body = trim(value);
  if (!body.empty() && body.front() == '[' && body.back() == ']')
    body = body.substr(1, body.size() - 2);
  std::vector<std::string> items;
  std::string current;
  for (char c : body) {
    if (c == ',') {
      items.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  std::string last = trim(current);
  if (!last.empty() || !items.empty()) items.push_back(last);
  for (const std::string& item : items)
    if (item.empty()) throw ConfigError("malformed list '" + value + "'");
  return items;
}

std::vector<int> parse_int_list(const std::string& value,
                                const std::string& context) {
  std::vector<int> out;
  for (const std::string& item : split_list(value))
    out.push_back(static_cast<int>(parse_i64(item, context)));
  return out;
}

std::vector<double> parse_f64_list(const std::string& value,
                                   const std::string& context) {
  std::vector<double> out;
  for (const std::string& item : split_list(value))
    out.push_back(parse_f64(item, context));
  return out;
}

SimTime ns_to_ps(double ns, const std::string& context) {
  const double ps = ns * static_cast<double>(kPsPerNs);
  const double rounded = std::round(ps);
  if (ps <= 0 || std::abs(ps - rounded) > 1e-6)
    throw ConfigError(context + ": clock period " + std::to_string(ns) +
                      " ns does not map to a whole number of picoseconds");
  return static_cast<SimTime>(rounded);
}

// Simple ini reader: [section] headers, key=value lines, ';'/'#' comments.
struct IniFile {
  // section -> key -> value, insertion-ordered keys for warnings
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      sections;

  static IniFile read(std::string_view text, std::string_view file) {
    IniFile ini;
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      std::string body = line;
      for (char marker : {';', '#'}) {
        std::size_t pos = body.find(marker);
        if (pos != std::string::npos) body = body.substr(0, pos);
      }
      body = trim(body);
      if (body.empty()) continue;
      if (body.front() == '[') {
        if (body.back() != ']')
          throw ConfigError(std::string(file) + ":" +
                            std::to_string(line_no) +
                            ": malformed section header");
        section = trim(body.substr(1, body.size() - 2));
        ini.sections[section];
        continue;
      }
      std::size_t eq = body.find('=');
      if (eq == std::string::npos)
        throw ConfigError(std::string(file) + ":" + std::to_string(line_no) +
                          ": expected key=value");
      ini.sections[section].emplace_back(trim(body.substr(0, eq)),
                                         trim(body.substr(eq + 1)));
    }
    return ini;
  }
};

// Tracks which keys were consumed so leftovers become warnings.
class SectionReader {
 public:
  SectionReader(const IniFile& ini, const std::string& section,
                std::string_view file)
      : file_(file), section_(section) {
    auto it = ini.sections.find(section);
    if (it != ini.sections.end()) entries_ = &it->second;
  }

  std::optional<std::string> get(const std::string& key) {
    if (!entries_) return std::nullopt;
    used_.insert(key);
    for (const auto& [k, v] : *entries_)
      if (k == key) return v;
    return std::nullopt;
  }

  std::string require(const std::string& key) {
    if (auto v = get(key)) return *v;
    throw ConfigError(std::string(file_) + ": missing required key '" + key +
                      "' in section [" + section_ + "]");
  }

  std::string context(const std::string& key) const {
    return std::string(file_) + ": [" + section_ + "] " + key;
  }

  void report_unknown(std::vector<std::string>& warnings) const {
    if (!entries_) return;
    for (const auto& [k, v] : *entries_)
      if (!used_.count(k))
        warnings.push_back(std::string(file_) + ": unknown key '" + k +
                           "' in section [" + section_ + "]");
  }

 private:
  std::string_view file_;
  std::string section_;
  const std::vector<std::pair<std::string, std::string>>* entries_ = nullptr;
  std::set<std::string> used_;
};

IntRange parse_range(const xml::Element& el, std::string_view file) {
  IntRange r;
  r.min = parse_i64(el.require_attribute("min", file),
                    std::string(file) + ": <" + el.name + "> min");
  r.max = parse_i64(el.require_attribute("max", file),
                    std::string(file) + ": <" + el.name + "> max");
  if (r.min < 0 || r.max < 0)
    throw ConfigError(std::string(file) + ": <" + el.name +
                      "> range values must be non-negative");
  if (r.min > r.max)
    throw ConfigError(std::string(file) + ": <" + el.name + "> has min " +
                      std::to_string(r.min) + " > max " +
                      std::to_string(r.max));
  return r;
}

std::string value_attr(const xml::Element& parent, std::string_view child,
                       std::string_view file) {
  const xml::Element* el = parent.child(child);
  if (!el)
    throw ConfigError(std::string(file) + ": element '" + parent.name +
                      "' (line " + std::to_string(parent.line) +
                      ") is missing child <" + std::string(child) + ">");
  return el->require_attribute("value", file);
}

}  // namespace

std::vector<double> SyntheticConfig::rate_grid() const {
  std::vector<double> rates;
  const int count =
      static_cast<int>(std::floor((run_rate_max - run_rate_min) /
                                  run_rate_step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i)
    rates.push_back(run_rate_min + run_rate_step * i);
  return rates;
}

std::vector<int> NetworkShorthand::depths_for_port() const {
  if (depth_mode == BufferDepthMode::PerVc) return buffers_depths;
  return std::vector<int>(static_cast<std::size_t>(vc_count), buffer_depth);
}

ParsedConfig parse_config(std::string_view text, std::string_view file) {
  ParsedConfig out;
  IniFile ini = IniFile::read(text, file);

  SectionReader config(ini, "Config", file);
  out.sim.simulation_time_ns = parse_i64(config.require("simulationTime"),
                                         config.context("simulationTime"));
  if (out.sim.simulation_time_ns <= 0)
    throw ConfigError(config.context("simulationTime") + ": must be > 0");
  out.sim.flits_per_packet =
      static_cast<int>(parse_i64(config.require("flitsPerPacket"),
                                 config.context("flitsPerPacket")));
  if (out.sim.flits_per_packet < 1)
    throw ConfigError(config.context("flitsPerPacket") + ": must be >= 1");
  const std::string benchmark = config.require("benchmark");
  if (benchmark == "synthetic") {
    out.sim.benchmark = BenchmarkKind::Synthetic;
  } else if (benchmark == "task") {
    out.sim.benchmark = BenchmarkKind::Task;
  } else {
    throw ConfigError(config.context("benchmark") +
                      ": expected 'synthetic' or 'task', got '" + benchmark +
                      "'");
  }
  if (auto v = config.get("seed"))
    out.sim.seed = static_cast<std::uint64_t>(
        parse_i64(*v, config.context("seed")));

  SectionReader task(ini, "Task", file);
  if (auto v = task.get("libDir")) out.sim.task_lib_dir = *v;
  if (out.sim.benchmark == BenchmarkKind::Task && out.sim.task_lib_dir.empty())
    throw ConfigError(std::string(file) +
                      ": benchmark=task requires [Task] libDir");

  SectionReader synth(ini, "Synthetic", file);
  SyntheticConfig& s = out.sim.synthetic;
  if (auto v = synth.get("simDir")) s.sim_dir = *v;
  if (auto v = synth.get("restarts"))
    s.restarts = static_cast<int>(parse_i64(*v, synth.context("restarts")));
  if (auto v = synth.get("warmupStart"))
    s.warmup_start_ns = parse_i64(*v, synth.context("warmupStart"));
  if (auto v = synth.get("warmupDuration"))
    s.warmup_duration_ns = parse_i64(*v, synth.context("warmupDuration"));
  if (auto v = synth.get("warmupRate"))
    s.warmup_rate = parse_f64(*v, synth.context("warmupRate"));
  if (auto v = synth.get("runRateMin"))
    s.run_rate_min = parse_f64(*v, synth.context("runRateMin"));
  if (auto v = synth.get("runRateMax"))
    s.run_rate_max = parse_f64(*v, synth.context("runRateMax"));
  if (auto v = synth.get("runRateStep"))
    s.run_rate_step = parse_f64(*v, synth.context("runRateStep"));
  if (auto v = synth.get("runStartAfterWarmup"))
    s.run_start_after_warmup_ns =
        parse_i64(*v, synth.context("runStartAfterWarmup"));
  if (auto v = synth.get("runDuration"))
    s.run_duration_ns = parse_i64(*v, synth.context("runDuration"));
  if (auto v = synth.get("numCores"))
    s.num_cores = static_cast<int>(parse_i64(*v, synth.context("numCores")));

  if (out.sim.benchmark == BenchmarkKind::Synthetic) {
    if (s.restarts < 1)
      throw ConfigError(synth.context("restarts") + ": must be >= 1");
    if (s.num_cores < 1)
      throw ConfigError(synth.context("numCores") + ": must be >= 1");
    if (s.warmup_start_ns < 0 || s.warmup_duration_ns < 0 ||
        s.run_start_after_warmup_ns < 0 || s.run_duration_ns < 0)
      throw ConfigError(std::string(file) +
                        ": [Synthetic] phase times must be non-negative");
    auto check_rate = [&](double r, const char* key) {
      if (r < 0.0 || r > 1.0)
        throw ConfigError(synth.context(key) + ": rate must be in [0, 1]");
    };
    check_rate(s.warmup_rate, "warmupRate");
    check_rate(s.run_rate_min, "runRateMin");
    check_rate(s.run_rate_max, "runRateMax");
    if (s.run_rate_step <= 0)
      throw ConfigError(synth.context("runRateStep") + ": must be > 0");
    if (s.run_rate_min > s.run_rate_max)
      throw ConfigError(std::string(file) +
                        ": runRateMin exceeds runRateMax");
    if (s.run_duration_ns <= 0)
      throw ConfigError(synth.context("runDuration") + ": must be > 0");
  }

  SectionReader report(ini, "Report", file);
  if (auto v = report.get("bufferReportRouters"))
    for (int id : parse_int_list(*v, report.context("bufferReportRouters")))
      out.sim.report_routers.push_back(id);

  SectionReader network(ini, "Network", file);
  NetworkShorthand& n = out.network;
  if (auto v = network.get("topologyFile")) n.topology_file = *v;
  if (auto v = network.get("z"))
    n.z = static_cast<int>(parse_i64(*v, network.context("z")));
  if (auto v = network.get("x")) n.x = parse_int_list(*v, network.context("x"));
  if (auto v = network.get("y")) n.y = parse_int_list(*v, network.context("y"));
  if (auto v = network.get("routing")) n.routing = *v;
  if (auto v = network.get("clockDelay"))
    n.clock_delay_ns = parse_f64_list(*v, network.context("clockDelay"));
  if (auto v = network.get("bufferDepthType")) {
    if (*v == "single") {
      n.depth_mode = BufferDepthMode::Single;
    } else if (*v == "perVC") {
      n.depth_mode = BufferDepthMode::PerVc;
    } else {
      throw ConfigError(network.context("bufferDepthType") +
                        ": expected 'single' or 'perVC'");
    }
  }
  if (auto v = network.get("bufferDepth"))
    n.buffer_depth =
        static_cast<int>(parse_i64(*v, network.context("bufferDepth")));
  if (auto v = network.get("buffersDepths"))
    n.buffers_depths = parse_int_list(*v, network.context("buffersDepths"));
  if (auto v = network.get("vcCount"))
    n.vc_count = static_cast<int>(parse_i64(*v, network.context("vcCount")));
  if (auto v = network.get("flitSize"))
    n.flit_size = static_cast<int>(parse_i64(*v, network.context("flitSize")));

  if (n.topology_file.empty()) {
    if (n.x.empty() || n.y.empty())
      throw ConfigError(std::string(file) +
                        ": [Network] needs x and y (or a topologyFile)");
    if (n.clock_delay_ns.empty())
      n.clock_delay_ns.assign(static_cast<std::size_t>(n.z), 1.0);
    if (n.z < 1 || static_cast<int>(n.x.size()) != n.z ||
        static_cast<int>(n.y.size()) != n.z ||
        static_cast<int>(n.clock_delay_ns.size()) != n.z)
      throw ConfigError(std::string(file) +
                        ": x, y and clockDelay must each list one entry per "
                        "layer (z=" +
                        std::to_string(n.z) + ")");
    for (int c : n.x)
      if (c < 1) throw ConfigError(network.context("x") + ": counts must be >= 1");
    for (int c : n.y)
      if (c < 1) throw ConfigError(network.context("y") + ": counts must be >= 1");
  }
  if (n.vc_count < 1)
    throw ConfigError(network.context("vcCount") + ": must be >= 1");
  if (n.depth_mode == BufferDepthMode::PerVc) {
    if (static_cast<int>(n.buffers_depths.size()) != n.vc_count)
      throw ConfigError(std::string(file) +
                        ": buffersDepths must list one depth per VC (" +
                        std::to_string(n.vc_count) + ")");
  } else if (n.buffer_depth < 1) {
    throw ConfigError(network.context("bufferDepth") + ": must be >= 1");
  }
  if (n.flit_size < 1)
    throw ConfigError(network.context("flitSize") + ": must be >= 1");

  config.report_unknown(out.warnings);
  task.report_unknown(out.warnings);
  synth.report_unknown(out.warnings);
  report.report_unknown(out.warnings);
  network.report_unknown(out.warnings);
  for (const auto& [name, entries] : ini.sections) {
    if (name == "Config" || name == "Task" || name == "Synthetic" ||
        name == "Report" || name == "Network" || name.empty())
      continue;
    out.warnings.push_back(std::string(file) + ": unknown section [" + name +
                           "]");
  }
  return out;
}

NetworkGraph parse_topology(std::string_view text, std::string_view file) {
  const xml::Element root = xml::parse(text, file);

  struct TypeInfo {
    NodeKind kind;
    std::string routing;
    SimTime period_ps;
  };
  std::map<int, TypeInfo> types;
  const xml::Element* types_el = xml::find_named(root, "nodeTypes");
  if (!types_el)
    throw ConfigError(std::string(file) + ": missing <nodeTypes>");
  for (const xml::Element* t : types_el->children_named("nodeType")) {
    const int id = static_cast<int>(parse_i64(
        t->require_attribute("id", file), std::string(file) + ": nodeType id"));
    TypeInfo info;
    const std::string model = value_attr(*t, "model", file);
    if (model == "RouterVC" || model == "Router") {
      info.kind = NodeKind::Router;
      if (const xml::Element* r = t->child("routing"))
        info.routing = r->require_attribute("value", file);
    } else if (model == "ProcessingElementVC" || model == "ProcessingElement") {
      info.kind = NodeKind::ProcessingElement;
    } else {
      throw ConfigError(std::string(file) + ": unknown node model '" + model +
                        "'");
    }
    info.period_ps = ns_to_ps(
        parse_f64(value_attr(*t, "clockDelay", file),
                  std::string(file) + ": clockDelay"),
        std::string(file) + ": nodeType " + std::to_string(id));
    if (!types.emplace(id, info).second)
      throw ConfigError(std::string(file) + ": duplicate nodeType id " +
                        std::to_string(id));
  }

  const xml::Element* nodes_el = xml::find_named(root, "nodes");
  if (!nodes_el) throw ConfigError(std::string(file) + ": missing <nodes>");
  struct NodeDecl {
    Vec3 pos;
    int type;
  };
  std::map<int, NodeDecl> decls;
  for (const xml::Element* nd : nodes_el->children_named("node")) {
    const int id = static_cast<int>(
        parse_i64(nd->require_attribute("id", file),
                  std::string(file) + ": node id"));
    NodeDecl d;
    d.pos.x = static_cast<int>(parse_i64(value_attr(*nd, "xPos", file),
                                         std::string(file) + ": xPos"));
    d.pos.y = static_cast<int>(parse_i64(value_attr(*nd, "yPos", file),
                                         std::string(file) + ": yPos"));
    d.pos.z = static_cast<int>(parse_i64(value_attr(*nd, "zPos", file),
                                         std::string(file) + ": zPos"));
    d.type = static_cast<int>(parse_i64(value_attr(*nd, "nodeType", file),
                                        std::string(file) + ": nodeType"));
    if (!types.count(d.type))
      throw ConfigError(std::string(file) + ": node " + std::to_string(id) +
                        " references undeclared nodeType " +
                        std::to_string(d.type));
    if (!decls.emplace(id, d).second)
      throw ConfigError(std::string(file) + ": duplicate node id " +
                        std::to_string(id));
  }

  // Node ids must be dense 0..N-1 so report files and config references
  // address nodes unambiguously.
  NetworkGraph graph;
  int expect = 0;
  for (const auto& [id, d] : decls) {
    if (id != expect)
      throw ConfigError(std::string(file) + ": node ids must be dense " +
                        "0..N-1 (missing id " + std::to_string(expect) + ")");
    ++expect;
    const TypeInfo& info = types.at(d.type);
    graph.add_node(info.kind, d.pos, info.period_ps, info.routing);
  }

  if (auto fs = root.attribute("flitSize"))
    graph.flit_size_bits = static_cast<int>(
        parse_i64(*fs, std::string(file) + ": flitSize"));

  const xml::Element* cons = xml::find_named(root, "connections");
  if (cons) {
    for (const xml::Element* con : cons->children_named("con")) {
      const xml::Element* ports = con->child("ports");
      std::vector<const xml::Element*> port_els;
      if (ports) port_els = ports->children_named("port");
      if (port_els.size() != 2)
        throw ConfigError(std::string(file) + ": <con> at line " +
                          std::to_string(con->line) +
                          " must have exactly 2 ports, has " +
                          std::to_string(port_els.size()));
      EndpointSpec ends[2];
      for (int i = 0; i < 2; ++i) {
        const xml::Element& pe = *port_els[static_cast<std::size_t>(i)];
        EndpointSpec& ep = ends[i];
        ep.node = static_cast<NodeId>(
            parse_i64(value_attr(pe, "node", file),
                      std::string(file) + ": port node"));
        if (ep.node < 0 || !decls.count(ep.node))
          throw ConfigError(std::string(file) + ": port references unknown " +
                            "node id " + std::to_string(ep.node));
        ep.vc_count = static_cast<int>(
            parse_i64(value_attr(pe, "vcCount", file),
                      std::string(file) + ": vcCount"));
        if (const xml::Element* multi = pe.child("buffersDepths")) {
          ep.vc_depths = parse_int_list(
              multi->require_attribute("value", file),
              std::string(file) + ": buffersDepths");
        } else {
          const int depth = static_cast<int>(
              parse_i64(value_attr(pe, "bufferDepth", file),
                        std::string(file) + ": bufferDepth"));
          ep.vc_depths.assign(static_cast<std::size_t>(ep.vc_count), depth);
        }
        if (static_cast<int>(ep.vc_depths.size()) != ep.vc_count)
          throw ConfigError(std::string(file) + ": port of node " +
                            std::to_string(ep.node) + " lists " +
                            std::to_string(ep.vc_depths.size()) +
                            " depths for vcCount " +
                            std::to_string(ep.vc_count));
      }
      graph.add_connection(ends[0], ends[1]);
    }
  }

  graph.validate();
  return graph;
}

const AppTaskSpec* ApplicationSpec::task(int id) const {
  for (const AppTaskSpec& t : tasks)
    if (t.id == id) return &t;
  return nullptr;
}

int ApplicationSpec::color_index(int type_id) const {
  for (std::size_t i = 0; i < data_types.size(); ++i)
    if (data_types[i].id == type_id) return static_cast<int>(i);
  return -1;
}

ApplicationSpec parse_application(std::string_view text,
                                  std::string_view file) {
  const xml::Element root = xml::parse(text, file);
  ApplicationSpec app;

  if (const xml::Element* dts = xml::find_named(root, "dataTypes")) {
    for (const xml::Element* dt : dts->children_named("dataType")) {
      DataTypeSpec spec;
      spec.id = static_cast<int>(parse_i64(dt->require_attribute("id", file),
                                           std::string(file) + ": dataType id"));
      if (const xml::Element* name = dt->child("name"))
        spec.name = name->require_attribute("value", file);
      else
        spec.name = "type" + std::to_string(spec.id);
      // Names become csv column labels and coefficient-table keys.
      for (char c : spec.name)
        if (c == ',' || c == '>' || c == '\n' || c == '\r')
          throw ConfigError(std::string(file) + ": dataType name '" +
                            spec.name + "' contains a reserved character");
      for (const DataTypeSpec& existing : app.data_types) {
        if (existing.id == spec.id)
          throw ConfigError(std::string(file) + ": duplicate dataType id " +
                            std::to_string(spec.id));
        if (existing.name == spec.name)
          throw ConfigError(std::string(file) + ": duplicate dataType name '" +
                            spec.name + "'");
      }
      app.data_types.push_back(std::move(spec));
    }
  }

  std::vector<const xml::Element*> task_els;
  xml::collect_named(root, "task", task_els);
  for (const xml::Element* te : task_els) {
    // <task value=..> inside destinations is a reference, not a definition.
    if (te->attribute("value")) continue;
    AppTaskSpec t;
    t.id = static_cast<int>(parse_i64(te->require_attribute("id", file),
                                      std::string(file) + ": task id"));
    if (const xml::Element* e = te->child("start")) t.start = parse_range(*e, file);
    if (const xml::Element* e = te->child("duration"))
      t.duration = parse_range(*e, file);
    else
      t.duration = IntRange{std::int64_t{1} << 60, std::int64_t{1} << 60};
    if (const xml::Element* e = te->child("repeat"))
      t.repeat = parse_range(*e, file);

    if (const xml::Element* reqs = te->child("requires")) {
      for (const xml::Element* re : reqs->children_named("requirement")) {
        RequirementSpec r;
        r.type = static_cast<int>(
            parse_i64(value_attr(*re, "type", file),
                      std::string(file) + ": requirement type"));
        r.source_task = static_cast<int>(
            parse_i64(value_attr(*re, "source", file),
                      std::string(file) + ": requirement source"));
        if (const xml::Element* c = re->child("count"))
          r.count = parse_range(*c, file);
        t.requirements.push_back(r);
      }
    }

    if (const xml::Element* gen = te->child("generates")) {
      for (const xml::Element* pe : gen->children_named("possibility")) {
        PossibilitySpec p;
        p.probability =
            parse_f64(value_attr(*pe, "probability", file),
                      std::string(file) + ": possibility probability");
        if (p.probability < 0.0 || p.probability > 1.0)
          throw ConfigError(std::string(file) +
                            ": possibility probability out of [0, 1]");
        const xml::Element* dests = pe->child("destinations");
        if (dests) {
          for (const xml::Element* de : dests->children_named("destination")) {
            DestinationSpec d;
            if (const xml::Element* e = de->child("delay"))
              d.delay = parse_range(*e, file);
            if (const xml::Element* e = de->child("interval"))
              d.interval = parse_range(*e, file);
            if (const xml::Element* e = de->child("count"))
              d.count = parse_range(*e, file);
            d.type = static_cast<int>(
                parse_i64(value_attr(*de, "type", file),
                          std::string(file) + ": destination type"));
            d.task = static_cast<int>(
                parse_i64(value_attr(*de, "task", file),
                          std::string(file) + ": destination task"));
            p.destinations.push_back(d);
          }
        }
        t.possibilities.push_back(std::move(p));
      }
    }

    for (const AppTaskSpec& existing : app.tasks)
      if (existing.id == t.id)
        throw ConfigError(std::string(file) + ": duplicate task id " +
                          std::to_string(t.id));
    app.tasks.push_back(std::move(t));
  }

  // Cross-reference validation.
  for (const AppTaskSpec& t : app.tasks) {
    if (!t.possibilities.empty()) {
      double sum = 0.0;
      for (const PossibilitySpec& p : t.possibilities) sum += p.probability;
      if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError(std::string(file) + ": task " + std::to_string(t.id) +
                          " possibility probabilities sum to " +
                          std::to_string(sum) + ", expected 1");
    }
    for (const RequirementSpec& r : t.requirements) {
      if (app.color_index(r.type) < 0)
        throw ConfigError(std::string(file) + ": task " + std::to_string(t.id) +
                          " requires undeclared data type " +
                          std::to_string(r.type));
      if (!app.task(r.source_task))
        throw ConfigError(std::string(file) + ": task " + std::to_string(t.id) +
                          " requires data from unknown task " +
                          std::to_string(r.source_task));
    }
    for (const PossibilitySpec& p : t.possibilities) {
      for (const DestinationSpec& d : p.destinations) {
        if (app.color_index(d.type) < 0)
          throw ConfigError(std::string(file) + ": task " +
                            std::to_string(t.id) +
                            " sends undeclared data type " +
                            std::to_string(d.type));
        if (!app.task(d.task))
          throw ConfigError(std::string(file) + ": task " +
                            std::to_string(t.id) + " sends to unknown task " +
                            std::to_string(d.task));
      }
    }
  }
  return app;
}

Mapping parse_mapping(std::string_view text, std::string_view file) {
  const xml::Element root = xml::parse(text, file);
  std::vector<const xml::Element*> binds;
  xml::collect_named(root, "bind", binds);
  if (binds.empty())
    throw ConfigError(std::string(file) + ": no <bind> entries found");
  Mapping mapping;
  for (const xml::Element* b : binds) {
    MappingEntry e;
    e.task = static_cast<int>(parse_i64(b->require_attribute("task", file),
                                        std::string(file) + ": bind task"));
    e.node = static_cast<NodeId>(parse_i64(b->require_attribute("node", file),
                                           std::string(file) + ": bind node"));
    mapping.push_back(e);
  }
  return mapping;
}

void validate_mapping(const Mapping& mapping, const ApplicationSpec& app,
                      const NetworkGraph& graph) {
  std::set<int> mapped;
  for (const MappingEntry& e : mapping) {
    if (!app.task(e.task))
      throw ConfigError("mapping references unknown task " +
                        std::to_string(e.task));
    if (!mapped.insert(e.task).second)
      throw ConfigError("task " + std::to_string(e.task) + " mapped twice");
    const NodeRecord& n = graph.node(e.node);
    if (n.kind != NodeKind::ProcessingElement)
      throw ConfigError("task " + std::to_string(e.task) +
                        " mapped to node " + std::to_string(e.node) +
                        ", which is not a processing element");
  }
  for (const AppTaskSpec& t : app.tasks)
    if (!mapped.count(t.id))
      throw ConfigError("task " + std::to_string(t.id) + " is not mapped");
}

NetworkGraph expand_mesh(const NetworkShorthand& sh) {
  if (sh.z < 1 || static_cast<int>(sh.x.size()) != sh.z ||
      static_cast<int>(sh.y.size()) != sh.z ||
      static_cast<int>(sh.clock_delay_ns.size()) != sh.z)
    throw ConfigError("mesh shorthand: x, y and clockDelay must each have z "
                      "entries");
  const std::vector<int> depths = sh.depths_for_port();
  if (static_cast<int>(depths.size()) != sh.vc_count)
    throw ConfigError("mesh shorthand: depth list does not match vcCount");

  NetworkGraph graph;
  graph.flit_size_bits = sh.flit_size;

  // Routers first (dense ids in z, y, x order), then one PE per router.
  std::vector<std::vector<NodeId>> router_at(static_cast<std::size_t>(sh.z));
  for (int l = 0; l < sh.z; ++l) {
    const SimTime period =
        static_cast<SimTime>(std::llround(sh.clock_delay_ns[l] * kPsPerNs));
    if (period <= 0 ||
        std::abs(sh.clock_delay_ns[l] * kPsPerNs - static_cast<double>(period)) >
            1e-6)
      throw ConfigError("mesh shorthand: clockDelay for layer " +
                        std::to_string(l) +
                        " does not map to integer picoseconds");
    router_at[l].resize(static_cast<std::size_t>(sh.x[l] * sh.y[l]));
    for (int yy = 0; yy < sh.y[l]; ++yy)
      for (int xx = 0; xx < sh.x[l]; ++xx)
        router_at[l][static_cast<std::size_t>(yy * sh.x[l] + xx)] =
            graph.add_node(NodeKind::Router, Vec3{xx, yy, l}, period,
                           sh.routing);
  }
  std::vector<NodeId> pe_of(graph.nodes().size(), kInvalidNode);
  for (int l = 0; l < sh.z; ++l) {
    const SimTime period =
        static_cast<SimTime>(std::llround(sh.clock_delay_ns[l] * kPsPerNs));
    for (int yy = 0; yy < sh.y[l]; ++yy)
      for (int xx = 0; xx < sh.x[l]; ++xx) {
        NodeId r = router_at[l][static_cast<std::size_t>(yy * sh.x[l] + xx)];
        pe_of[static_cast<std::size_t>(r)] =
            graph.add_node(NodeKind::ProcessingElement, Vec3{xx, yy, l},
                           period);
      }
  }

  auto endpoint = [&](NodeId id) {
    EndpointSpec e;
    e.node = id;
    e.vc_count = sh.vc_count;
    e.vc_depths = depths;
    return e;
  };

  for (int l = 0; l < sh.z; ++l) {
    for (int yy = 0; yy < sh.y[l]; ++yy) {
      for (int xx = 0; xx < sh.x[l]; ++xx) {
        const NodeId r =
            router_at[l][static_cast<std::size_t>(yy * sh.x[l] + xx)];
        graph.add_connection(endpoint(r),
                             endpoint(pe_of[static_cast<std::size_t>(r)]));
        if (xx + 1 < sh.x[l])
          graph.add_connection(
              endpoint(r),
              endpoint(router_at[l][static_cast<std::size_t>(yy * sh.x[l] +
                                                             xx + 1)]));
        if (yy + 1 < sh.y[l])
          graph.add_connection(
              endpoint(r),
              endpoint(router_at[l][static_cast<std::size_t>(
                  (yy + 1) * sh.x[l] + xx)]));
        if (l + 1 < sh.z && xx < sh.x[l + 1] && yy < sh.y[l + 1])
          graph.add_connection(
              endpoint(r),
              endpoint(router_at[l + 1][static_cast<std::size_t>(
                  yy * sh.x[l + 1] + xx)]));
      }
    }
  }

  graph.validate();
  return graph;
}

std::string write_topology_xml(const NetworkGraph& graph) {
  std::ostringstream out;
  out << "<network flitSize=\"" << graph.flit_size_bits << "\">\n";

  // Node types keyed by (kind, routing, period); first-use order.
  struct TypeKey {
    NodeKind kind;
    std::string routing;
    SimTime period;
    bool operator<(const TypeKey& o) const {
      return std::tie(kind, routing, period) <
             std::tie(o.kind, o.routing, o.period);
    }
  };
  std::map<TypeKey, int> type_ids;
  std::vector<TypeKey> type_order;
  for (const NodeRecord& n : graph.nodes()) {
    TypeKey key{n.kind, n.routing, n.clock_period_ps};
    if (!type_ids.count(key)) {
      type_ids[key] = static_cast<int>(type_order.size());
      type_order.push_back(key);
    }
  }

  auto format_period_ns = [](SimTime ps) {
    std::ostringstream s;
    if (ps % kPsPerNs == 0) {
      s << ps / kPsPerNs;
    } else {
      s << static_cast<double>(ps) / static_cast<double>(kPsPerNs);
    }
    return s.str();
  };

  out << "  <nodeTypes>\n";
  for (std::size_t i = 0; i < type_order.size(); ++i) {
    const TypeKey& key = type_order[i];
    out << "    <nodeType id=\"" << i << "\">\n";
    out << "      <model value=\""
        << (key.kind == NodeKind::Router ? "RouterVC" : "ProcessingElementVC")
        << "\" />\n";
    if (key.kind == NodeKind::Router && !key.routing.empty())
      out << "      <routing value=\"" << key.routing << "\" />\n";
    out << "      <clockDelay value=\"" << format_period_ns(key.period)
        << "\" />\n";
    out << "    </nodeType>\n";
  }
  out << "  </nodeTypes>\n";

  out << "  <nodes>\n";
  for (const NodeRecord& n : graph.nodes()) {
    out << "    <node id=\"" << n.id << "\">\n";
    out << "      <xPos value=\"" << n.position.x << "\"/>\n";
    out << "      <yPos value=\"" << n.position.y << "\"/>\n";
    out << "      <zPos value=\"" << n.position.z << "\"/>\n";
    out << "      <nodeType value=\""
        << type_ids.at(TypeKey{n.kind, n.routing, n.clock_period_ps})
        << "\"/>\n";
    out << "    </node>\n";
  }
  out << "  </nodes>\n";

  auto write_port = [&](const PortRecord& p, int port_id) {
    out << "        <port id=\"" << port_id << "\">\n";
    out << "          <node value=\"" << p.owner << "\"/>\n";
    bool uniform = true;
    for (int d : p.vc_depths)
      if (d != p.vc_depths.front()) uniform = false;
    if (uniform) {
      out << "          <bufferDepth value=\"" << p.vc_depths.front()
          << "\"/>\n";
    } else {
      out << "          <buffersDepths value=\"";
      for (std::size_t i = 0; i < p.vc_depths.size(); ++i)
        out << (i ? ", " : "") << p.vc_depths[i];
      out << "\"/>\n";
    }
    out << "          <vcCount value=\"" << p.vc_count << "\"/>\n";
    out << "        </port>\n";
  };

  out << "  <connections>\n";
  int con_id = 0;
  for (const NodeRecord& n : graph.nodes()) {
    for (Direction d : kAllDirections) {
      const PortRecord* p = n.port(d);
      if (!p) continue;
      if (p->peer_node < n.id) continue;  // emit each connection once
      const PortRecord* back = graph.node(p->peer_node).port(p->peer_dir);
      out << "    <con id=\"" << con_id++ << "\">\n";
      out << "      <ports>\n";
      write_port(*p, 0);
      write_port(*back, 1);
      out << "      </ports>\n";
      out << "    </con>\n";
    }
  }
  out << "  </connections>\n";
  out << "</network>\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

NetworkGraph load_network(const ParsedConfig& cfg,
                          const std::string& base_dir) {
  if (!cfg.network.topology_file.empty()) {
    std::string path = cfg.network.topology_file;
    if (!base_dir.empty() && path.front() != '/')
      path = base_dir + "/" + path;
    NetworkGraph g = parse_topology(read_text_file(path), path);
    return g;
  }
  return expand_mesh(cfg.network);
}

}  // namespace nocsim
