#include "rdd/special.hpp"

#include <algorithm>
#include <cmath>

#include "rdd/ddt.hpp"

namespace rdd::special {

PathDecomposition delivery_path(const Instance& inst) {
  PathDecomposition path;
  path.nodes = inst.graph_distances().path(inst.source(), inst.target());
  path.prefix.push_back(0.0);
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const EdgeId e = *inst.find_edge(path.nodes[i - 1], path.nodes[i]);
    path.edges.push_back(e);
    path.prefix.push_back(path.prefix.back() + inst.edge(e).length);
  }
  return path;
}

void require_uniform(const Instance& inst, Objective objective, bool need_isometric) {
  if (inst.agent_count() == 0) return;
  const Agent& first = inst.agent(0);
  for (const Agent& a : inst.agents()) {
    if (objective == Objective::time && a.speed != first.speed)
      throw PreconditionError("agent " + a.id + " has speed " + std::to_string(a.speed) + ", agent " + first.id +
                              " has " + std::to_string(first.speed));
    if (objective == Objective::energy && a.rate != first.rate)
      throw PreconditionError("agent " + a.id + " has rate " + std::to_string(a.rate) + ", agent " + first.id +
                              " has " + std::to_string(first.rate));
  }
  if (!need_isometric) return;
  for (std::size_t a = 0; a < inst.agent_count(); ++a)
    if (!is_isometric(inst, static_cast<AgentId>(a)))
      throw PreconditionError("agent " + inst.agent(static_cast<AgentId>(a)).id + " subgraph is not isometric");
}

Compaction compact_isometric(const Instance& inst, const Schedule& sched, Objective objective) {
  require_uniform(inst, objective, true);
  const FeasibilityReport report = check_feasible(inst, sched, CopyMode::multi);
  if (!report.feasible())
    throw ValidationError("input schedule infeasible: " + report.violations.front().message);
  return merge_reused_agents(inst, sched);
}

TreeResult solve_tree_ddt(const Instance& inst) {
  if (!is_tree(inst)) throw PreconditionError("graph is not a tree");
  if (!inst.positions_fixed()) throw PreconditionError("initial positions are not fixed");
  require_uniform(inst, Objective::time, false);

  const PathDecomposition path = delivery_path(inst);
  const double tol = 1e-12 * inst.scale();
  std::vector<Leg> legs;
  double t = 0.0;
  AgentId carrier = -1;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    const NodeId u = path.nodes[i], v = path.nodes[i + 1];
    const ddt::NodeDelivery best = ddt::nei_delivery_node(inst, u, v, t);
    AgentId who = best.agent;
    double arrival = best.arrival;
    if (carrier >= 0 && inst.agent(carrier).has_edge(path.edges[i])) {
      const Agent& c = inst.agent(carrier);
      const double keep = std::max(t, travel_time(inst.distances(carrier).from_start(u), c.speed)) +
                          travel_time(inst.edge(path.edges[i]).length, c.speed);
      if (keep <= arrival + tol) {
        who = carrier;
        arrival = keep;
      }
    }
    legs.push_back({who, {Point::at(u), Point::at(v)}});
    carrier = who;
    t = arrival;
  }
  Compaction merged = merge_reused_agents(inst, schedule_from_legs(inst, legs));
  TreeResult res;
  res.schedule = std::move(merged.schedule);
  res.merges = merged.merges;
  res.time = evaluate(inst, res.schedule).time;
  return res;
}

FreeResult solve_free_positions(const Instance& inst, Objective objective) {
  const bool tree = is_tree(inst);
  require_uniform(inst, objective, !tree);

  const PathDecomposition path = delivery_path(inst);
  const std::size_t m = path.edges.size();
  std::vector<Leg> legs;
  AgentId carrier = -1;
  for (std::size_t i = 0; i < m; ++i) {
    if (carrier >= 0 && inst.agent(carrier).has_edge(path.edges[i])) {
      legs.back().carry.push_back(Point::at(path.nodes[i + 1]));
      continue;
    }
    // furthest contiguous reach along the path, smallest index on ties
    std::size_t best_reach = 0;
    for (AgentId a : inst.agents_on_edge(path.edges[i])) {
      std::size_t r = i;
      while (r < m && inst.agent(a).has_edge(path.edges[r])) ++r;
      if (r > best_reach) {
        best_reach = r;
        carrier = a;
      }
    }
    legs.push_back({carrier, {Point::at(path.nodes[i]), Point::at(path.nodes[i + 1])}});
  }

  std::vector<NodeId> positions(inst.agent_count(), kNoNode);
  for (const Leg& leg : legs)
    if (positions[leg.agent] == kNoNode) positions[leg.agent] = leg.carry.front().node;
  for (std::size_t a = 0; a < inst.agent_count(); ++a) {
    if (positions[a] != kNoNode) continue;
    const Agent& agent = inst.agent(static_cast<AgentId>(a));
    for (NodeId v : path.nodes) {
      if (agent.has_node(v)) {
        positions[a] = v;
        break;
      }
    }
    if (positions[a] == kNoNode) positions[a] = agent.nodes.front();
  }

  Instance placed = inst.with_positions(positions);
  Schedule sched;
  for (const Leg& leg : legs) {
    Trip trip;
    trip.agent = leg.agent;
    trip.carry_path = leg.carry;
    sched.trips.push_back(std::move(trip));
  }
  Compaction merged = merge_reused_agents(placed, sched);
  const double value = evaluate(placed, merged.schedule).value(objective);
  return FreeResult{std::move(placed), std::move(merged.schedule), std::move(positions), value};
}

}  // namespace rdd::special
