#include "rdd/ddt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <utility>

namespace rdd::ddt {

namespace {

double pace(const Agent& a) { return std::isinf(a.speed) ? 0.0 : 1.0 / a.speed; }

double edge_length(const Instance& inst, NodeId u, NodeId v, EdgeId* id) {
  auto e = inst.find_edge(u, v);
  if (!e) throw PreconditionError("no edge (" + inst.node_name(u) + "," + inst.node_name(v) + ")");
  *id = *e;
  return inst.edge(*e).length;
}

double tie_tolerance(const Instance& inst) { return 1e-12 * std::max(1.0, inst.scale()); }

// Earliest time agent a can stand at offset x (from u) of edge u-v.
PiecewiseLinear reach(const Instance& inst, AgentId a, NodeId u, NodeId v, double len) {
  const Agent& agent = inst.agent(a);
  const DistanceMap& d = inst.distances(a);
  const double p = pace(agent);
  const double du = d.from_start(u), dv = d.from_start(v);
  const auto via_u = PiecewiseLinear::line(0.0, len, du * p, p);
  const auto via_v = PiecewiseLinear::line(0.0, len, (dv + len) * p, -p);
  return pointwise_min(via_u, via_v);
}

bool reachable(const Instance& inst, AgentId a, NodeId u) { return inst.distances(a).from_start(u) < kInf; }

}  // namespace

NodeDelivery nei_delivery_node(const Instance& inst, NodeId u, NodeId v, double t) {
  EdgeId e = -1;
  const double len = edge_length(inst, u, v, &e);
  const auto candidates = inst.agents_on_edge(e);
  if (candidates.empty())
    throw PreconditionError("no agent covers edge (" + inst.node_name(u) + "," + inst.node_name(v) + ")");
  NodeDelivery best;
  for (AgentId a : candidates) {
    const Agent& agent = inst.agent(a);
    const double ready = travel_time(inst.distances(a).from_start(u), agent.speed);
    const double arrival = std::max(t, ready) + travel_time(len, agent.speed);
    if (arrival < best.arrival) best = {arrival, a};
  }
  return best;
}

EdgeEnvelope edge_envelope(const Instance& inst, NodeId u, NodeId v, double t) {
  EdgeId e = -1;
  const double len = edge_length(inst, u, v, &e);
  EdgeEnvelope env;
  for (AgentId a : inst.agents_on_edge(e))
    if (reachable(inst, a, u) || reachable(inst, a, v)) env.order.push_back(a);
  if (env.order.empty())
    throw PreconditionError("no agent covers edge (" + inst.node_name(u) + "," + inst.node_name(v) + ")");
  std::stable_sort(env.order.begin(), env.order.end(),
                   [&](AgentId a, AgentId b) { return inst.agent(a).speed < inst.agent(b).speed; });

  for (std::size_t j = 0; j < env.order.size(); ++j) {
    const AgentId a = env.order[j];
    const double p = pace(inst.agent(a));
    const PiecewiseLinear r = reach(inst, a, u, v, len);
    const double m0 = std::max(t, r(0.0));
    env.start.push_back(m0);
    if (j == 0) {
      env.gain.emplace_back();
      env.best.push_back(PiecewiseLinear::line(0.0, len, m0, p));
      continue;
    }
    PiecewiseLinear g = add_slope(pointwise_max(env.best.back(), r), -p);
    PiecewiseLinear h = add_slope(running_min(g, m0), p);
    env.best.push_back(pointwise_min(env.best.back(), h));
    env.gain.push_back(std::move(g));
  }
  return env;
}

EdgePlan nei_delivery_edge(const Instance& inst, NodeId u, NodeId v, double t) {
  EdgeId e = -1;
  const double len = edge_length(inst, u, v, &e);
  EdgePlan plan;
  plan.from = u;
  plan.to = v;
  if (len == 0.0) {
    const NodeDelivery nd = nei_delivery_node(inst, u, v, t);
    plan.arrival = nd.arrival;
    plan.segments.push_back({nd.agent, 0.0, 0.0, nd.arrival});
    return plan;
  }

  const EdgeEnvelope env = edge_envelope(inst, u, v, t);
  const double tol = tie_tolerance(inst);
  plan.arrival = env.best.back()(len);

  double x = len;
  for (int level = static_cast<int>(env.order.size()) - 1; level >= 0; --level) {
    if (level > 0 && env.best[level - 1](x) <= env.best[level](x) + tol) continue;
    const AgentId a = env.order[level];
    const double p = pace(inst.agent(a));
    double z = 0.0, pickup = env.start[level];
    if (level > 0) {
      const ArgMin m = prefix_argmin(env.gain[level], x, tol);
      if (m.value + tol < env.start[level]) {
        z = m.at;
        pickup = m.value + z * p;
      }
    }
    plan.segments.push_back({a, z, x, pickup});
    x = z;
    if (x == 0.0) break;
  }
  std::reverse(plan.segments.begin(), plan.segments.end());
  return plan;
}

MultiResult solve_multi(const Instance& inst) { return solve_multi(inst, inst.handover()); }

MultiResult solve_multi(const Instance& inst, HandoverMode mode) {
  const std::size_t n = inst.node_count();
  const double tol = tie_tolerance(inst);
  MultiResult res;
  Labels& L = res.labels;
  L.eT.assign(n, kInf);
  L.carrier.assign(n, -1);
  L.prev.assign(n, kNoNode);
  L.processed.assign(n, 0);
  std::vector<EdgePlan> plan_into(n);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  const NodeId s = inst.source(), y = inst.target();
  L.eT[s] = 0.0;
  queue.push({0.0, s});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (L.processed[u] || d > L.eT[u]) continue;
    L.processed[u] = 1;
    if (u == y) break;
    for (const Adjacency& adj : inst.neighbors(u)) {
      const NodeId v = adj.neighbor;
      if (inst.agents_on_edge(adj.edge).empty()) continue;
      double cand = kInf;
      AgentId who = -1;
      EdgePlan plan;
      if (mode == HandoverMode::node) {
        const NodeDelivery nd = nei_delivery_node(inst, u, v, L.eT[u]);
        cand = nd.arrival;
        who = nd.agent;
      } else {
        plan = nei_delivery_edge(inst, u, v, L.eT[u]);
        cand = plan.arrival;
        who = plan.segments.back().agent;
      }
      if (L.processed[v]) {
        if (cand < L.eT[v] - tol) ++res.late_improvements;
        continue;
      }
      if (cand < L.eT[v]) {
        L.eT[v] = cand;
        L.carrier[v] = who;
        L.prev[v] = u;
        if (mode == HandoverMode::edge) plan_into[v] = std::move(plan);
        queue.push({cand, v});
      }
    }
  }
  if (L.eT[y] == kInf) throw PreconditionError("target unreachable from the source");

  for (NodeId v = y; v != kNoNode; v = L.prev[v]) res.package_path.push_back(v);
  std::reverse(res.package_path.begin(), res.package_path.end());
  res.time = L.eT[y];

  std::vector<Leg> legs;
  for (std::size_t i = 1; i < res.package_path.size(); ++i) {
    const NodeId a = res.package_path[i - 1], b = res.package_path[i];
    if (mode == HandoverMode::node) {
      legs.push_back({L.carrier[b], {Point::at(a), Point::at(b)}});
      continue;
    }
    const EdgePlan& plan = plan_into[b];
    for (const RelaySegment& seg : plan.segments)
      legs.push_back({seg.agent, {edge_point(inst, a, b, seg.pickup_offset), edge_point(inst, a, b, seg.dropoff_offset)}});
    res.plans.push_back(plan);
  }
  res.schedule = schedule_from_legs(inst, legs);
  return res;
}

Compaction compact(const Instance& inst, const Schedule& sched) {
  const FeasibilityReport report = check_feasible(inst, sched, CopyMode::multi);
  if (!report.feasible())
    throw ValidationError("input schedule infeasible: " + report.violations.front().rule + ": " +
                          report.violations.front().message);
  return merge_reused_agents(inst, sched);
}

double ratio_bound(const Instance& inst, HandoverMode mode) {
  const double n = static_cast<double>(inst.node_count());
  const double k = static_cast<double>(inst.agent_count());
  if (mode == HandoverMode::node) return std::min(2.0 * n / 3.0 + 1.0 / 3.0, 2.0 * k - 1.0);
  return std::min(2.0 * n - 1.0, 2.0 * k - 1.0);
}

std::size_t merge_bound(const Instance& inst, HandoverMode mode) {
  const std::size_t n = inst.node_count(), k = inst.agent_count();
  const std::size_t k1 = k == 0 ? 0 : k - 1;
  if (mode == HandoverMode::node) return std::min((n - 1) / 3, k1);
  return std::min(n - 1, k1);
}

}  // namespace rdd::ddt
