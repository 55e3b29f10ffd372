#include "rdd/ddc.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <utility>

namespace rdd::ddc {

LayeredGraph build_layered(const Instance& inst) {
  LayeredGraph g;
  g.nodes.resize(2);
  const std::size_t k = inst.agent_count();
  g.copy.assign(k, std::vector<int>(inst.node_count(), -1));
  for (std::size_t a = 0; a < k; ++a) {
    for (NodeId u : inst.agent(static_cast<AgentId>(a)).nodes) {
      g.copy[a][u] = static_cast<int>(g.nodes.size());
      g.nodes.push_back({u, static_cast<AgentId>(a)});
    }
  }
  g.out.resize(g.nodes.size());
  auto add = [&](int from, int to, double w, ArcKind kind, AgentId a, NodeId u, EdgeId e) {
    if (!(w < kInf)) return;
    g.out[from].push_back(static_cast<int>(g.arcs.size()));
    g.arcs.push_back({from, to, w, kind, a, u, e});
  };

  const NodeId s = inst.source(), y = inst.target();
  for (std::size_t i = 0; i < k; ++i) {
    const auto a = static_cast<AgentId>(i);
    const Agent& agent = inst.agent(a);
    if (agent.has_node(s)) add(LayeredGraph::kSource, g.id(s, a), agent.rate * inst.distances(a).from_start(s), ArcKind::start, a, s, -1);
    for (EdgeId e : agent.edges) {
      const Edge& edge = inst.edge(e);
      const double w = agent.rate * edge.length;
      add(g.id(edge.u, a), g.id(edge.v, a), w, ArcKind::carry, a, edge.u, e);
      add(g.id(edge.v, a), g.id(edge.u, a), w, ArcKind::carry, a, edge.v, e);
    }
  }
  for (std::size_t u = 0; u < inst.node_count(); ++u) {
    const auto here = inst.agents_at_node(static_cast<NodeId>(u));
    for (AgentId a : here)
      for (AgentId b : here)
        if (a != b)
          add(g.id(static_cast<NodeId>(u), a), g.id(static_cast<NodeId>(u), b),
              inst.agent(b).rate * inst.distances(b).from_start(static_cast<NodeId>(u)), ArcKind::handover, b,
              static_cast<NodeId>(u), -1);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto a = static_cast<AgentId>(i);
    if (inst.agent(a).has_node(y)) add(g.id(y, a), LayeredGraph::kSink, 0.0, ArcKind::finish, a, y, -1);
  }
  return g;
}

MultiResult solve_multi(const Instance& inst) { return solve_multi(inst, build_layered(inst)); }

MultiResult solve_multi(const Instance& inst, const LayeredGraph& g) {
  MultiResult res;
  if (inst.source() == inst.target()) return res;

  const std::size_t n = g.nodes.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> via(n, -1);
  std::vector<char> done(n, 0);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[LayeredGraph::kSource] = 0.0;
  queue.push({0.0, LayeredGraph::kSource});
  while (!queue.empty()) {
    const auto [d, x] = queue.top();
    queue.pop();
    if (done[x] || d > dist[x]) continue;
    done[x] = 1;
    if (x == LayeredGraph::kSink) break;
    for (int id : g.out[x]) {
      const LayeredArc& arc = g.arcs[id];
      const double nd = d + arc.weight;
      if (!done[arc.to] && nd < dist[arc.to]) {
        dist[arc.to] = nd;
        via[arc.to] = id;
        queue.push({nd, arc.to});
      }
    }
  }
  if (dist[LayeredGraph::kSink] == kInf) throw PreconditionError("target unreachable from the source");
  res.energy = dist[LayeredGraph::kSink];

  for (int x = LayeredGraph::kSink; x != LayeredGraph::kSource; x = g.arcs[via[x]].from) res.arc_path.push_back(via[x]);
  std::reverse(res.arc_path.begin(), res.arc_path.end());

  struct Open {
    AgentId agent;
    std::vector<Point> carry;
  };
  std::vector<Open> legs;
  for (int id : res.arc_path) {
    const LayeredArc& arc = g.arcs[id];
    switch (arc.kind) {
      case ArcKind::start:
      case ArcKind::handover:
        legs.push_back({arc.agent, {Point::at(arc.node)}});
        break;
      case ArcKind::carry:
        legs.back().carry.push_back(Point::at(inst.edge(arc.edge).other(arc.node)));
        break;
      case ArcKind::finish:
        break;
    }
  }
  for (Open& leg : legs)
    if (leg.carry.size() > 1) res.schedule.trips.push_back(trip_from_start(inst, leg.agent, std::move(leg.carry)));
  return res;
}

Compaction compact(const Instance& inst, const Schedule& sched) {
  const FeasibilityReport report = check_feasible(inst, sched, CopyMode::multi);
  if (!report.feasible())
    throw ValidationError("input schedule infeasible: " + report.violations.front().rule + ": " +
                          report.violations.front().message);
  return merge_reused_agents(inst, sched);
}

}  // namespace rdd::ddc
