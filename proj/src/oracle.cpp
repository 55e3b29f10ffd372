#include "rdd/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rdd/ddc.hpp"
#include "rdd/ddt.hpp"

namespace rdd::oracle {

namespace {

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 24;

void require_positions(const Instance& inst) {
  if (!inst.positions_fixed()) throw PreconditionError("oracle needs fixed initial positions");
}

// Per-agent cost tables for the single-copy search.
struct AgentCosts {
  std::vector<double> ready;  // by node: time or energy to bring the agent to x
  std::vector<double> carry;  // n*n: cost of carrying from x to z
};

std::vector<AgentCosts> cost_tables(const Instance& inst, Objective objective) {
  const std::size_t n = inst.node_count();
  std::vector<AgentCosts> out(inst.agent_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto a = static_cast<AgentId>(i);
    const Agent& agent = inst.agent(a);
    const DistanceMap& d = inst.distances(a);
    AgentCosts& c = out[i];
    c.ready.assign(n, kInf);
    c.carry.assign(n * n, kInf);
    for (NodeId x : agent.nodes) {
      const double dx = d.from_start(x);
      c.ready[x] = objective == Objective::time ? travel_time(dx, agent.speed) : agent.rate * dx;
      for (NodeId z : agent.nodes) {
        const double dxz = d.between(x, z);
        c.carry[x * n + z] = objective == Objective::time ? travel_time(dxz, agent.speed) : agent.rate * dxz;
      }
    }
  }
  return out;
}

}  // namespace

OracleResult exact_single_copy(const Instance& inst, Objective objective, const Guard& guard, Execution exec) {
  require_positions(inst);
  if (objective == Objective::time && inst.handover() == HandoverMode::edge)
    throw PreconditionError("single-copy oracle handles node handover only");
  const std::size_t n = inst.node_count(), k = inst.agent_count();
  if (!guard.override_guard && (k > guard.max_agents || n > guard.max_nodes))
    throw PreconditionError("instance exceeds oracle guard (k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                            "); pass the guard override to run anyway");
  if (k > kSubsetAgentCeiling || (std::size_t{1} << k) * n > kMaxTableEntries)
    throw PreconditionError("instance too large for the single-copy oracle even with the override");

  OracleResult res;
  const NodeId s = inst.source(), y = inst.target();
  if (s == y) {
    res.value = 0.0;
    return res;
  }
  const auto costs = cost_tables(inst, objective);
  const std::size_t masks = std::size_t{1} << k;
  std::vector<double> value(masks * n, kInf);
  std::vector<int> from_node(masks * n, kNoNode);
  std::vector<signed char> by_agent(masks * n, -1);
  value[s] = 0.0;

  auto step = [&](double v, std::size_t a, NodeId x) {
    return objective == Objective::time ? std::max(v, costs[a].ready[x]) : v + costs[a].ready[x];
  };

  std::vector<std::vector<std::size_t>> layers(k + 1);
  for (std::size_t m = 0; m < masks; ++m) layers[std::popcount(m)].push_back(m);

  double best = kInf;
  std::uint64_t explored = 0, expanded = 0, pruned = 0;
  for (std::size_t layer = 0; layer < k; ++layer) {
    const double bound = best;
    bool live = false;
    for (std::size_t mask : layers[layer]) {
      for (NodeId x = 0; x < static_cast<NodeId>(n) && !live; ++x) live = x != y && value[mask * n + x] < bound;
      if (live) break;
    }
    if (!live) break;
    if (exec == Execution::serial) {
      for (std::size_t mask : layers[layer]) {
        for (NodeId x = 0; x < static_cast<NodeId>(n); ++x) {
          const double v = value[mask * n + x];
          if (!(v < bound) || x == y) {
            if (v < kInf && x != y) ++pruned;
            continue;
          }
          ++expanded;
          for (std::size_t a = 0; a < k; ++a) {
            if ((mask >> a) & 1) continue;
            const Agent& agent = inst.agent(static_cast<AgentId>(a));
            if (!agent.has_node(x)) continue;
            const double base = step(v, a, x);
            const std::size_t next = mask | (std::size_t{1} << a);
            for (NodeId z : agent.nodes) {
              if (z == x) continue;
              ++explored;
              const double nv = base + costs[a].carry[x * n + z];
              if (nv < bound && nv < value[next * n + z]) {
                value[next * n + z] = nv;
                from_node[next * n + z] = x;
                by_agent[next * n + z] = static_cast<signed char>(a);
              }
            }
          }
        }
      }
    } else {
      const auto& targets = layers[layer + 1];
      const long count = static_cast<long>(targets.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : explored, expanded, pruned)
      for (long idx = 0; idx < count; ++idx) {
        const std::size_t next = targets[idx];
        for (std::size_t a = 0; a < k; ++a) {
          if (!((next >> a) & 1)) continue;
          const std::size_t mask = next ^ (std::size_t{1} << a);
          const Agent& agent = inst.agent(static_cast<AgentId>(a));
          for (NodeId x : agent.nodes) {
            const double v = value[mask * n + x];
            if (!(v < bound) || x == y) {
              if (v < kInf && x != y) ++pruned;
              continue;
            }
            ++expanded;
            const double base = step(v, a, x);
            for (NodeId z : agent.nodes) {
              if (z == x) continue;
              ++explored;
              const double nv = base + costs[a].carry[x * n + z];
              if (nv < bound && nv < value[next * n + z]) {
                value[next * n + z] = nv;
                from_node[next * n + z] = x;
                by_agent[next * n + z] = static_cast<signed char>(a);
              }
            }
          }
        }
      }
    }
    for (std::size_t mask : layers[layer + 1]) best = std::min(best, value[mask * n + y]);
  }
  res.stats = {explored, expanded, pruned};
  if (best == kInf) throw PreconditionError("target unreachable");
  res.value = best;

  std::size_t mask = 0;
  for (std::size_t m = 0; m < masks; ++m)
    if (value[m * n + y] == best) {
      mask = m;
      break;
    }
  std::vector<Trip> trips;
  for (NodeId z = y; mask != 0;) {
    const int a = by_agent[mask * n + z];
    const NodeId x = from_node[mask * n + z];
    trips.push_back(trip_from_start(inst, a, node_points(inst.distances(a).path(x, z))));
    mask ^= std::size_t{1} << a;
    z = x;
  }
  std::reverse(trips.begin(), trips.end());
  res.witness.trips = std::move(trips);
  return res;
}

namespace {

// Depth-first enumeration of simple s-y paths with the per-path forward
// pass carried along the stack.
class PathSearch {
 public:
  PathSearch(const Instance& inst, Objective objective) : inst_(inst), objective_(objective) {
    on_path_.assign(inst.node_count(), 0);
  }

  void run() {
    path_ = {inst_.source()};
    on_path_[inst_.source()] = 1;
    if (objective_ == Objective::time) {
      dfs_time(inst_.source(), 0.0);
    } else {
      dfs_energy(inst_.source(), std::vector<double>(inst_.agent_count(), kInf), true);
    }
  }

  double best = kInf;
  std::vector<NodeId> best_path;
  Stats stats;

 private:
  double edge_time(NodeId u, EdgeId e, double t, AgentId* who) const {
    double out = kInf;
    for (AgentId a : inst_.agents_on_edge(e)) {
      const Agent& agent = inst_.agent(a);
      const double ready = travel_time(inst_.distances(a).from_start(u), agent.speed);
      const double arrive = std::max(t, ready) + travel_time(inst_.edge(e).length, agent.speed);
      if (arrive < out) {
        out = arrive;
        if (who) *who = a;
      }
    }
    return out;
  }

  void reach_target(double v) {
    ++stats.explored;
    if (v < best) {
      best = v;
      best_path = path_;
    }
  }

  void dfs_time(NodeId u, double t) {
    ++stats.expanded;
    if (u == inst_.target()) return reach_target(t);
    for (const Adjacency& adj : inst_.neighbors(u)) {
      if (on_path_[adj.neighbor]) continue;
      const double next = edge_time(u, adj.edge, t, nullptr);
      if (!(next < best)) {
        ++stats.pruned;
        continue;
      }
      enter(adj.neighbor);
      dfs_time(adj.neighbor, next);
      leave(adj.neighbor);
    }
  }

  void dfs_energy(NodeId u, const std::vector<double>& by_carrier, bool at_start) {
    ++stats.expanded;
    const double low = at_start ? 0.0 : *std::min_element(by_carrier.begin(), by_carrier.end());
    if (u == inst_.target()) return reach_target(low);
    for (const Adjacency& adj : inst_.neighbors(u)) {
      if (on_path_[adj.neighbor]) continue;
      std::vector<double> next = energy_step(u, adj.edge, by_carrier, low, nullptr);
      if (!(*std::min_element(next.begin(), next.end()) < best)) {
        ++stats.pruned;
        continue;
      }
      enter(adj.neighbor);
      dfs_energy(adj.neighbor, next, false);
      leave(adj.neighbor);
    }
  }

 public:
  // Energy with the current carrier either continuing or replaced by a
  // fresh copy; choice[a] is -1 for continuing, otherwise the previous
  // carrier (-2 at the source).
  std::vector<double> energy_step(NodeId u, EdgeId e, const std::vector<double>& by_carrier, double low,
                                  std::vector<int>* choice) const {
    std::vector<double> next(inst_.agent_count(), kInf);
    if (choice) choice->assign(inst_.agent_count(), -3);
    int low_carrier = -2;
    for (std::size_t c = 0; c < by_carrier.size(); ++c)
      if (by_carrier[c] == low) {
        low_carrier = static_cast<int>(c);
        break;
      }
    const double len = inst_.edge(e).length;
    for (AgentId a : inst_.agents_on_edge(e)) {
      const Agent& agent = inst_.agent(a);
      const double keep = by_carrier[a] + agent.rate * len;
      const double fresh = low + agent.rate * (inst_.distances(a).from_start(u) + len);
      next[a] = std::min(keep, fresh);
      if (choice) (*choice)[a] = keep <= fresh ? -1 : low_carrier;
    }
    return next;
  }

  double time_step(NodeId u, EdgeId e, double t, AgentId* who) const { return edge_time(u, e, t, who); }

 private:
  void enter(NodeId v) {
    on_path_[v] = 1;
    path_.push_back(v);
  }
  void leave(NodeId v) {
    on_path_[v] = 0;
    path_.pop_back();
  }

  const Instance& inst_;
  Objective objective_;
  std::vector<char> on_path_;
  std::vector<NodeId> path_;
};

}  // namespace

OracleResult exact_multi_copy_paths(const Instance& inst, Objective objective, std::size_t max_nodes,
                                    bool override_guard) {
  require_positions(inst);
  if (objective == Objective::time && inst.handover() == HandoverMode::edge)
    throw PreconditionError("path oracle handles node handover only");
  if (!override_guard && inst.node_count() > max_nodes)
    throw PreconditionError("instance exceeds oracle guard (n=" + std::to_string(inst.node_count()) + ")");
  OracleResult res;
  if (inst.source() == inst.target()) {
    res.value = 0.0;
    return res;
  }
  PathSearch search(inst, objective);
  search.run();
  res.stats = search.stats;
  if (search.best == kInf) throw PreconditionError("target unreachable");
  res.value = search.best;

  const auto& path = search.best_path;
  std::vector<Leg> legs;
  if (objective == Objective::time) {
    double t = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      AgentId who = -1;
      t = search.time_step(path[i - 1], *inst.find_edge(path[i - 1], path[i]), t, &who);
      legs.push_back({who, {Point::at(path[i - 1]), Point::at(path[i])}});
    }
  } else {
    std::vector<std::vector<int>> choices(path.size());
    std::vector<double> state(inst.agent_count(), kInf);
    double low = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      state = search.energy_step(path[i - 1], *inst.find_edge(path[i - 1], path[i]), state, low, &choices[i]);
      low = *std::min_element(state.begin(), state.end());
    }
    int carrier = static_cast<int>(std::min_element(state.begin(), state.end()) - state.begin());
    std::vector<Leg> reversed;
    for (std::size_t i = path.size() - 1; i >= 1; --i) {
      reversed.push_back({carrier, {Point::at(path[i - 1]), Point::at(path[i])}});
      const int pick = choices[i][carrier];
      if (pick != -1) carrier = pick;
      if (carrier < 0) break;
    }
    std::reverse(reversed.begin(), reversed.end());
    legs = std::move(reversed);
  }
  res.witness = schedule_from_legs(inst, legs);
  return res;
}

OracleResult edge_handover_subdivision(const Instance& inst, int q, Objective objective,
                                       std::size_t max_refined_nodes) {
  if (q < 1) throw PreconditionError("q must be at least 1");
  std::size_t extra = 0;
  for (std::size_t e = 0; e < inst.edge_count(); ++e)
    if (inst.agents_on_edge(static_cast<EdgeId>(e)).size() >= 2 && inst.edge(static_cast<EdgeId>(e)).length > 0)
      extra += static_cast<std::size_t>(q - 1);
  if (inst.node_count() + extra > max_refined_nodes)
    throw PreconditionError("refined instance would have " + std::to_string(inst.node_count() + extra) + " nodes");

  Instance refined = subdivide_edges(inst, q).with_handover(HandoverMode::node);
  OracleResult res;
  if (objective == Objective::time) {
    ddt::MultiResult m = ddt::solve_multi(refined, HandoverMode::node);
    res.value = m.time;
    res.witness = std::move(m.schedule);
    res.stats.expanded = refined.node_count();
  } else {
    ddc::MultiResult m = ddc::solve_multi(refined);
    res.value = m.energy;
    res.witness = std::move(m.schedule);
    res.stats.expanded = refined.node_count();
  }
  res.refined = std::move(refined);
  return res;
}

}  // namespace rdd::oracle
