#include "nocsim/simulation.hpp"

#include <map>

#include "nocsim/routing.hpp"

namespace nocsim {

namespace {

struct LinkIndex {
  // (driver node, direction) -> link id, dense per node.
  std::vector<std::array<LinkId, kDirectionCount>> of;

  explicit LinkIndex(const NetworkGraph& graph,
                     const std::vector<LinkRecord>& links) {
    of.assign(graph.nodes().size(), [] {
      std::array<LinkId, kDirectionCount> a;
      a.fill(-1);
      return a;
    }());
    for (const LinkRecord& l : links)
      of[static_cast<std::size_t>(l.driver)]
        [static_cast<std::size_t>(l.driver_dir)] = l.id;
  }

  LinkId at(NodeId node, Direction d) const {
    return of[static_cast<std::size_t>(node)][static_cast<std::size_t>(d)];
  }
};

}  // namespace

SimulationResult run_simulation(const SimulationOptions& options) {
  const NetworkGraph& graph = *options.graph;
  if (options.sim_time_ps < 0)
    throw ConfigError("simulation time must be non-negative");
  if (options.benchmark == BenchmarkKind::Task &&
      (!options.app || !options.mapping))
    throw ConfigError("task benchmark needs an application and a mapping");

  // Colors: the task model's data types, or one implicit synthetic color.
  int colors = 1;
  std::vector<std::string> color_names{"data"};
  if (options.benchmark == BenchmarkKind::Task) {
    validate_mapping(*options.mapping, *options.app, graph);
    colors = std::max<int>(1, static_cast<int>(options.app->data_types.size()));
    if (!options.app->data_types.empty()) {
      color_names.clear();
      for (const DataTypeSpec& dt : options.app->data_types)
        color_names.push_back(dt.name);
    }
  }

  const std::vector<LinkRecord> links = graph.links_of();
  const LinkIndex link_index(graph, links);

  SimulationResult result{
      SimulationOutcome{},
      Monitors(graph, colors, color_names, options.seed),
      std::vector<RouterEventCounts>(graph.nodes().size()),
      links,
  };
  Monitors& monitors = result.monitors;

  std::vector<LinkRegister> registers(links.size());
  for (const LinkRecord& l : links)
    registers[static_cast<std::size_t>(l.id)].configure(
        graph.node(l.driver).clock_period_ps,
        graph.node(l.sink).clock_period_ps);

  std::vector<Vec3> positions;
  positions.reserve(graph.nodes().size());
  for (const NodeRecord& n : graph.nodes()) positions.push_back(n.position);

  // Turn masks for instrumented runs, one enumeration per algorithm in use.
  std::map<std::string, std::vector<TurnMask>> masks;
  if (options.check_turns) {
    for (const NodeRecord& n : graph.nodes())
      if (n.kind == NodeKind::Router && !masks.count(n.routing))
        masks[n.routing] =
            allowed_turns_all(routing_from_string(n.routing), graph);
  }

  std::uint32_t next_packet_id = 0;
  std::vector<std::unique_ptr<RouterNode>> routers(graph.nodes().size());
  std::vector<std::unique_ptr<NetworkInterface>> interfaces(
      graph.nodes().size());
  std::vector<std::unique_ptr<TrafficSource>> sources(graph.nodes().size());
  std::vector<TaskHostSource*> hosts;

  const std::vector<NodeId> pes = graph.processing_elements();

  for (const NodeRecord& n : graph.nodes()) {
    const std::size_t slot = static_cast<std::size_t>(n.id);
    if (n.kind == NodeKind::Router) {
      auto router = std::make_unique<RouterNode>(
          n, positions, graph.local_peer(n.id), &monitors,
          &result.events[slot]);
      for (Direction d : kAllDirections) {
        const PortRecord* p = n.port(d);
        if (!p) continue;
        const LinkId out_id = link_index.at(n.id, d);
        const LinkId in_id = link_index.at(p->peer_node, p->peer_dir);
        const PortRecord* peer = graph.node(p->peer_node).port(p->peer_dir);
        router->bind_port(d, &registers[static_cast<std::size_t>(in_id)],
                          &registers[static_cast<std::size_t>(out_id)],
                          &monitors.link(out_id), *p, *peer);
      }
      if (options.check_turns)
        router->set_turn_mask(&masks.at(n.routing)[slot]);
      routers[slot] = std::move(router);
    } else {
      auto ni = std::make_unique<NetworkInterface>(
          n.id, n.clock_period_ps, &monitors, &next_packet_id);
      const PortRecord* local = n.port(Direction::Local);
      if (!local)
        throw ConfigError("processing element " + std::to_string(n.id) +
                          " has no local connection");
      const LinkId to_router = link_index.at(n.id, Direction::Local);
      const LinkId from_router =
          link_index.at(local->peer_node, local->peer_dir);
      const PortRecord* router_port =
          graph.node(local->peer_node).port(local->peer_dir);
      ni->bind(&registers[static_cast<std::size_t>(to_router)],
               &registers[static_cast<std::size_t>(from_router)],
               &monitors.link(to_router), *router_port);

      const std::uint64_t pe_seed =
          derive_seed(options.seed, 0x9E0, static_cast<std::uint64_t>(n.id));
      if (options.benchmark == BenchmarkKind::Synthetic) {
        sources[slot] = std::make_unique<UniformRandomSource>(
            n.id, pes, options.flits_per_packet, options.schedule, pe_seed);
      } else {
        auto host = std::make_unique<TaskHostSource>(
            n.id, *options.app, *options.mapping, options.flits_per_packet,
            pe_seed);
        hosts.push_back(host.get());
        ni->set_token_sink(host.get());
        sources[slot] = std::move(host);
      }
      ni->set_source(sources[slot].get());
      interfaces[slot] = std::move(ni);
    }
  }

  monitors.set_measurement_window(options.measure_from, options.measure_to);

  Scheduler scheduler;
  for (const NodeRecord& n : graph.nodes()) {
    const std::size_t slot = static_cast<std::size_t>(n.id);
    ClockedNode* node = n.kind == NodeKind::Router
                            ? static_cast<ClockedNode*>(routers[slot].get())
                            : static_cast<ClockedNode*>(interfaces[slot].get());
    scheduler.register_node(node, n.clock_period_ps);
  }

  if (options.check_credits) {
    scheduler.set_timestamp_hook([&](SimTime) {
      for (const LinkRecord& l : links) {
        const PortRecord* sink_port = graph.node(l.sink).port(l.sink_dir);
        const LinkRegister& reg = registers[static_cast<std::size_t>(l.id)];
        for (int vc = 0; vc < sink_port->vc_count; ++vc) {
          const int depth =
              sink_port->vc_depths[static_cast<std::size_t>(vc)];
          int occupancy = 0;
          if (graph.node(l.sink).kind == NodeKind::Router)
            occupancy = routers[static_cast<std::size_t>(l.sink)]->occupancy(
                l.sink_dir, vc);
          int credit_counter = 0;
          if (graph.node(l.driver).kind == NodeKind::Router)
            credit_counter = routers[static_cast<std::size_t>(l.driver)]
                                 ->credits(l.driver_dir, vc);
          else
            credit_counter =
                interfaces[static_cast<std::size_t>(l.driver)]->credits(vc);
          const int in_flight_credits = reg.credits_in_flight_for_vc(vc);
          const int in_flight_flits = reg.flits_in_flight_for_vc(vc);
          if (occupancy + credit_counter + in_flight_credits +
                  in_flight_flits != depth)
            throw SimulationError(
                "credit conservation broken on link " + std::to_string(l.id) +
                " vc " + std::to_string(vc) + ": occupancy " +
                std::to_string(occupancy) + " + credits " +
                std::to_string(credit_counter) + " + in-flight credits " +
                std::to_string(in_flight_credits) + " + in-flight flits " +
                std::to_string(in_flight_flits) + " != depth " +
                std::to_string(depth));
        }
      }
    });
  }

  result.outcome = scheduler.run(options.sim_time_ps);

  // Conservation: everything injected was ejected or is still buffered in
  // routers or sitting on in-network links. Flits staged inside interfaces
  // have not been injected yet.
  std::int64_t resident = 0;
  for (const auto& r : routers)
    if (r) resident += r->buffered_flits();
  for (const LinkRecord& l : links)
    if (graph.node(l.driver).kind == NodeKind::Router)
      resident += static_cast<std::int64_t>(
          registers[static_cast<std::size_t>(l.id)].flits_in_flight());
  result.resident_flits = resident;
  if (monitors.flits_injected() !=
      monitors.flits_ejected() + result.resident_flits)
    throw SimulationError(
        "flit conservation broken: injected " +
        std::to_string(monitors.flits_injected()) + " != ejected " +
        std::to_string(monitors.flits_ejected()) + " + resident " +
        std::to_string(result.resident_flits));

  for (const TaskHostSource* host : hosts) {
    result.tokens_delivered += host->tokens_delivered();
    result.tokens_consumed += host->tokens_consumed();
    result.tokens_held += host->tokens_held();
  }
  return result;
}

}  // namespace nocsim
