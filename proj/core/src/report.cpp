#include "nocsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace nocsim {

namespace fs = std::filesystem;

std::string fmt_g6(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

std::vector<NodeId> reported_routers(const NetworkGraph& graph,
                                     const WriteInfo& info) {
  if (info.report_routers.empty()) return graph.routers();
  for (NodeId id : info.report_routers)
    if (graph.node(id).kind != NodeKind::Router)
      throw ConfigError("bufferReportRouters: node " + std::to_string(id) +
                        " is not a router");
  return info.report_routers;
}

std::string latency_block(const LatencySet& lat) {
  std::ostringstream out;
  out << "flit latency:    mean " << fmt_g6(lat.flit.mean_ns()) << " ns, median "
      << fmt_g6(lat.flit.median_ns()) << " ns, std "
      << fmt_g6(lat.flit.std_ns()) << " ns, count " << lat.flit.count()
      << "\n";
  out << "packet latency:  mean " << fmt_g6(lat.packet.mean_ns())
      << " ns, median " << fmt_g6(lat.packet.median_ns()) << " ns, std "
      << fmt_g6(lat.packet.std_ns()) << " ns, count " << lat.packet.count()
      << "\n";
  out << "network latency: mean " << fmt_g6(lat.network.mean_ns())
      << " ns, median " << fmt_g6(lat.network.median_ns()) << " ns, std "
      << fmt_g6(lat.network.std_ns()) << " ns, count "
      << lat.network.count() << "\n";
  return out.str();
}

}  // namespace

void write_bundle(const SimulationResult& result, const NetworkGraph& graph,
                  const WriteInfo& info, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);
  fs::create_directories(out_dir + "/VCUsage", ec);
  fs::create_directories(out_dir + "/BuffUsage", ec);
  if (ec) throw IoError("cannot create report folders under: " + out_dir);

  const Monitors& monitors = result.monitors;
  const std::vector<std::string> labels =
      LinkStateSpace(monitors.colors()).labels(monitors.color_names());
  const std::vector<NodeId> routers = reported_routers(graph, info);

  // --- report.txt --------------------------------------------------------
  {
    std::ostringstream out;
    out << "simulation report\n";
    out << "=================\n\n";
    out << "simulation time: " << info.simulation_time_ns << " ns\n";
    out << "seed: " << info.seed << "\n";
    out << "flits injected: " << monitors.flits_injected() << "\n";
    out << "flits ejected: " << monitors.flits_ejected() << "\n\n";
    out << latency_block(monitors.latencies()) << "\n";

    out << "clocks per layer\n";
    for (int z : graph.layers()) {
      SimTime period = 0;
      for (const NodeRecord& n : graph.nodes())
        if (n.kind == NodeKind::Router && n.position.z == z)
          period = n.clock_period_ps;
      if (period == 0) continue;
      out << "layer " << z << ": delay "
          << fmt_g6(static_cast<double>(period) / kPsPerNs) << " ns, count "
          << cycles_elapsed(period, result.outcome.until) << "\n";
    }
    out << "\n";

    out << "normalized data-flow matrices per link\n";
    for (const LinkRecord& l : result.links) {
      const LinkMonitor& mon = monitors.links()[static_cast<std::size_t>(l.id)];
      out << "link " << l.id << " (" << l.driver << " "
          << to_string(l.driver_dir) << " -> " << l.sink << ")\n";
      const std::vector<double> normalized = mon.normalized();
      const int states = mon.space().size();
      for (int from = 0; from < states; ++from) {
        out << "  " << labels[static_cast<std::size_t>(from)] << ":";
        for (int to = 0; to < states; ++to)
          out << " "
              << fmt_g6(normalized[static_cast<std::size_t>(from) *
                                       static_cast<std::size_t>(states) +
                                   static_cast<std::size_t>(to)]);
        out << "\n";
      }
    }
    write_text_file(out_dir + "/report.txt", out.str());
  }

  // --- report_Links.csv ---------------------------------------------------
  {
    std::ostringstream out;
    out << "link,driver,driverPort,sink,cycles,flits";
    const int states = static_cast<int>(labels.size());
    for (int from = 0; from < states; ++from)
      for (int to = 0; to < states; ++to)
        out << "," << labels[static_cast<std::size_t>(from)] << "->"
            << labels[static_cast<std::size_t>(to)];
    out << "\n";
    for (const LinkRecord& l : result.links) {
      const LinkMonitor& mon = monitors.links()[static_cast<std::size_t>(l.id)];
      out << l.id << "," << l.driver << "," << to_string(l.driver_dir) << ","
          << l.sink << "," << mon.cycles_recorded() << ","
          << mon.flits_crossed();
      for (std::int64_t c : mon.counts()) out << "," << c;
      out << "\n";
    }
    write_text_file(out_dir + "/report_Links.csv", out.str());
  }

  // --- report_Routers_Power.csv --------------------------------------------
  {
    EnergyCoefficients coeffs;
    if (info.coefficients) {
      coeffs = *info.coefficients;
    } else {
      std::vector<ColorActivity> activities(
          static_cast<std::size_t>(monitors.colors()));
      coeffs = default_table(activities, labels, graph.flit_size_bits);
    }
    std::ostringstream out;
    out << "router,buffer_write,buffer_read,buffer_pop,routing_calc,"
           "crossbar_traversal,energy_pj,power_mw\n";
    const double sim_ns =
        static_cast<double>(result.outcome.until) / kPsPerNs;
    for (const NodeRecord& n : graph.nodes()) {
      if (n.kind != NodeKind::Router) continue;
      const RouterEventCounts& ev =
          result.events[static_cast<std::size_t>(n.id)];
      const double pj = router_energy(ev, coeffs);
      out << n.id;
      for (int e = 0; e < kRouterEventCount; ++e)
        out << "," << ev.counts[static_cast<std::size_t>(e)];
      out << "," << fmt_g6(pj) << ","
          << fmt_g6(sim_ns > 0 ? pj / sim_ns : 0.0) << "\n";
    }
    write_text_file(out_dir + "/report_Routers_Power.csv", out.str());
  }

  // --- VCUsage ---------------------------------------------------------
  for (NodeId id : routers) {
    const UsageMonitor& usage = monitors.usage()[static_cast<std::size_t>(id)];
    std::ostringstream out;
    for (const UsageMonitor::PortUsage& port : usage.ports()) {
      out << to_string(port.dir);
      for (std::int64_t c : port.vc_hist) out << "," << c;
      out << "\n";
    }
    write_text_file(out_dir + "/VCUsage/" + std::to_string(id) + ".csv",
                    out.str());
  }
  // Layer averages over the reported routers.
  for (int z : graph.layers()) {
    // direction -> (per-column sums, router count)
    std::map<Direction, std::pair<std::vector<double>, int>> acc;
    for (NodeId id : routers) {
      if (graph.node(id).position.z != z) continue;
      const UsageMonitor& usage =
          monitors.usage()[static_cast<std::size_t>(id)];
      for (const UsageMonitor::PortUsage& port : usage.ports()) {
        auto& [sums, count] = acc[port.dir];
        if (sums.size() < port.vc_hist.size())
          sums.resize(port.vc_hist.size(), 0.0);
        for (std::size_t i = 0; i < port.vc_hist.size(); ++i)
          sums[i] += static_cast<double>(port.vc_hist[i]);
        ++count;
      }
    }
    if (acc.empty()) continue;
    std::ostringstream out;
    for (Direction d : kAllDirections) {
      auto it = acc.find(d);
      if (it == acc.end()) continue;
      out << to_string(d);
      for (double v : it->second.first)
        out << "," << fmt_g6(v / it->second.second);
      out << "\n";
    }
    write_text_file(out_dir + "/VCUsage/layer_" + std::to_string(z) + ".csv",
                    out.str());
  }

  // --- BuffUsage --------------------------------------------------------
  for (NodeId id : routers) {
    const UsageMonitor& usage = monitors.usage()[static_cast<std::size_t>(id)];
    for (const UsageMonitor::PortUsage& port : usage.ports()) {
      std::size_t depth = 0;
      for (const auto& slots : port.slot_hist)
        depth = std::max(depth, slots.size());
      std::ostringstream out;
      out << "slot";
      for (std::size_t vc = 0; vc < port.slot_hist.size(); ++vc)
        out << ",vc" << vc;
      out << "\n";
      for (std::size_t s = 0; s < depth; ++s) {
        out << s;
        for (const auto& slots : port.slot_hist)
          out << "," << (s < slots.size() ? slots[s] : 0);
        out << "\n";
      }
      write_text_file(out_dir + "/BuffUsage/" + std::to_string(id) + "_" +
                          to_string(port.dir) + ".csv",
                      out.str());
    }
  }
  for (int z : graph.layers()) {
    std::map<Direction, std::pair<std::vector<std::vector<double>>, int>> acc;
    for (NodeId id : routers) {
      if (graph.node(id).position.z != z) continue;
      const UsageMonitor& usage =
          monitors.usage()[static_cast<std::size_t>(id)];
      for (const UsageMonitor::PortUsage& port : usage.ports()) {
        auto& [grid, count] = acc[port.dir];
        if (grid.size() < port.slot_hist.size())
          grid.resize(port.slot_hist.size());
        for (std::size_t vc = 0; vc < port.slot_hist.size(); ++vc) {
          if (grid[vc].size() < port.slot_hist[vc].size())
            grid[vc].resize(port.slot_hist[vc].size(), 0.0);
          for (std::size_t s = 0; s < port.slot_hist[vc].size(); ++s)
            grid[vc][s] += static_cast<double>(port.slot_hist[vc][s]);
        }
        ++count;
      }
    }
    for (Direction d : kAllDirections) {
      auto it = acc.find(d);
      if (it == acc.end()) continue;
      const auto& [grid, count] = it->second;
      std::size_t depth = 0;
      for (const auto& col : grid) depth = std::max(depth, col.size());
      std::ostringstream out;
      out << "slot";
      for (std::size_t vc = 0; vc < grid.size(); ++vc) out << ",vc" << vc;
      out << "\n";
      for (std::size_t s = 0; s < depth; ++s) {
        out << s;
        for (const auto& col : grid)
          out << ","
              << fmt_g6((s < col.size() ? col[s] : 0.0) / count);
        out << "\n";
      }
      write_text_file(out_dir + "/BuffUsage/layer_" + std::to_string(z) + "_" +
                          to_string(d) + ".csv",
                      out.str());
    }
  }

  // --- run_meta.csv ------------------------------------------------------
  {
    std::ostringstream out;
    out << "key,value\n";
    out << "simulation_time_ns," << info.simulation_time_ns << "\n";
    out << "seed," << info.seed << "\n";
    out << "flit_size_bits," << graph.flit_size_bits << "\n";
    out << "flits_injected," << monitors.flits_injected() << "\n";
    out << "flits_ejected," << monitors.flits_ejected() << "\n";
    out << "flits_resident," << result.resident_flits << "\n";
    out << "colors," << monitors.colors() << "\n";
    for (std::size_t i = 0; i < monitors.color_names().size(); ++i)
      out << "color" << i << "," << monitors.color_names()[i] << "\n";
    write_text_file(out_dir + "/run_meta.csv", out.str());
  }
}

std::int64_t RunArtifacts::flits_ejected() const {
  auto it = meta.find("flits_ejected");
  if (it == meta.end()) return 0;
  return std::stoll(it->second);
}

std::vector<std::string> RunArtifacts::color_names() const {
  std::vector<std::string> out;
  auto it = meta.find("colors");
  if (it == meta.end()) return out;
  const int n = std::stoi(it->second);
  for (int i = 0; i < n; ++i) {
    auto c = meta.find("color" + std::to_string(i));
    out.push_back(c == meta.end() ? "color" + std::to_string(i) : c->second);
  }
  return out;
}

RunArtifacts read_artifacts(const std::string& run_dir) {
  RunArtifacts art;

  // report_Links.csv
  {
    std::istringstream in(read_text_file(run_dir + "/report_Links.csv"));
    std::string line;
    if (!std::getline(in, line))
      throw IoError(run_dir + "/report_Links.csv: empty file");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 7)
      throw IoError(run_dir + "/report_Links.csv: malformed header");
    // Transition columns are named "<from>-><to>"; recover the state list
    // from the first row of the header.
    std::vector<std::string> labels;
    for (std::size_t i = 6; i < header.size(); ++i) {
      const std::string& name = header[i];
      const std::size_t arrow = name.find("->");
      if (arrow == std::string::npos)
        throw IoError(run_dir + "/report_Links.csv: bad column '" + name + "'");
      const std::string from = name.substr(0, arrow);
      if (labels.empty() || labels.back() != from) {
        if (std::find(labels.begin(), labels.end(), from) == labels.end())
          labels.push_back(from);
      }
    }
    art.state_labels = labels;
    const std::size_t states = labels.size();
    if (header.size() != 6 + states * states)
      throw IoError(run_dir + "/report_Links.csv: column count mismatch");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::vector<std::string> cells = split_csv_line(line);
      if (cells.size() != header.size())
        throw IoError(run_dir + "/report_Links.csv: row width mismatch");
      RunArtifacts::LinkData data;
      data.id = std::stoi(cells[0]);
      data.driver = std::stoi(cells[1]);
      data.driver_port = cells[2];
      data.sink = std::stoi(cells[3]);
      data.cycles = std::stoll(cells[4]);
      data.flits = std::stoll(cells[5]);
      data.counts.reserve(states * states);
      for (std::size_t i = 6; i < cells.size(); ++i)
        data.counts.push_back(std::stoll(cells[i]));
      art.links.push_back(std::move(data));
    }
  }

  // report_Routers_Power.csv
  {
    std::istringstream in(read_text_file(run_dir + "/report_Routers_Power.csv"));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::vector<std::string> cells = split_csv_line(line);
      if (cells.size() < 1 + kRouterEventCount)
        throw IoError(run_dir + "/report_Routers_Power.csv: malformed row");
      RouterEventCounts counts;
      for (int e = 0; e < kRouterEventCount; ++e)
        counts.counts[static_cast<std::size_t>(e)] =
            std::stoll(cells[static_cast<std::size_t>(e) + 1]);
      art.routers.emplace_back(std::stoi(cells[0]), counts);
    }
  }

  // run_meta.csv
  {
    std::istringstream in(read_text_file(run_dir + "/run_meta.csv"));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::vector<std::string> cells = split_csv_line(line);
      if (cells.size() == 2) art.meta[cells[0]] = cells[1];
    }
  }
  return art;
}

EnergyReport evaluate_energy(const RunArtifacts& artifacts,
                             const EnergyCoefficients& coeffs) {
  if (coeffs.state_labels != artifacts.state_labels)
    throw ConfigError(
        "coefficient table states do not match the run's matrices");
  EnergyReport report;
  for (const auto& [id, counts] : artifacts.routers) {
    const double pj = router_energy(counts, coeffs);
    report.router_pj.emplace_back(id, pj);
    report.routers_total_pj += pj;
  }
  const int states = static_cast<int>(artifacts.state_labels.size());
  for (const RunArtifacts::LinkData& link : artifacts.links) {
    const double pj = link_energy(link.counts, states, coeffs);
    report.link_pj.emplace_back(link.id, pj);
    report.links_total_pj += pj;
  }
  report.total_pj = report.routers_total_pj + report.links_total_pj;
  report.flits_ejected = artifacts.flits_ejected();
  report.pj_per_flit =
      report.flits_ejected > 0
          ? report.total_pj / static_cast<double>(report.flits_ejected)
          : 0.0;
  return report;
}

std::string write_energy_csv(const EnergyReport& report) {
  std::ostringstream out;
  out << "kind,id,energy_pj\n";
  for (const auto& [id, pj] : report.router_pj)
    out << "router," << id << "," << fmt_g6(pj) << "\n";
  for (const auto& [id, pj] : report.link_pj)
    out << "link," << id << "," << fmt_g6(pj) << "\n";
  out << "total,routers," << fmt_g6(report.routers_total_pj) << "\n";
  out << "total,links," << fmt_g6(report.links_total_pj) << "\n";
  out << "total,network," << fmt_g6(report.total_pj) << "\n";
  out << "total,flits_ejected," << report.flits_ejected << "\n";
  out << "total,pj_per_flit," << fmt_g6(report.pj_per_flit) << "\n";
  return out.str();
}

std::string aggregate_sweep(std::vector<SweepRunSummary> runs) {
  if (runs.empty()) throw ConfigError("sweep aggregation over zero runs");
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.rate_index, a.restart) <
           std::tie(b.rate_index, b.restart);
  });

  std::ostringstream out;
  out << "rate,flit_mean,flit_median,flit_std,packet_mean,packet_median,"
         "packet_std,network_mean,network_median,network_std\n";

  auto stats = [](std::vector<double> values) {
    double sum = 0.0, sum_sq = 0.0;
    for (double v : values) {
      sum += v;
      sum_sq += v * v;
    }
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    const double median = m % 2 == 1
                              ? values[m / 2]
                              : (values[m / 2 - 1] + values[m / 2]) / 2.0;
    return std::array<double, 3>{mean, median, std::sqrt(var)};
  };

  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    std::vector<double> flit, packet, network;
    while (j < runs.size() && runs[j].rate_index == runs[i].rate_index) {
      flit.push_back(runs[j].flit_mean_ns);
      packet.push_back(runs[j].packet_mean_ns);
      network.push_back(runs[j].network_mean_ns);
      ++j;
    }
    const auto f = stats(flit);
    const auto p = stats(packet);
    const auto n = stats(network);
    out << fmt_g6(runs[i].rate);
    for (const auto& metric : {f, p, n})
      out << "," << fmt_g6(metric[0]) << "," << fmt_g6(metric[1]) << ","
          << fmt_g6(metric[2]);
    out << "\n";
    i = j;
  }
  return out.str();
}

}  // namespace nocsim
