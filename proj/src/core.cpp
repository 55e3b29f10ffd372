#include "rdd/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "instance_core.hpp"

namespace rdd {

std::string_view to_string(HandoverMode mode) {
  return mode == HandoverMode::node ? "node" : "edge";
}
std::string_view to_string(Objective objective) {
  return objective == Objective::time ? "time" : "energy";
}
std::string_view to_string(CopyMode mode) {
  return mode == CopyMode::multi ? "multi" : "single";
}

bool approx_equal(double a, double b, double scale) {
  if (a == b) return true;
  return std::fabs(a - b) <= kTolerance * std::max(1.0, scale);
}

bool approx_le(double a, double b, double scale) {
  return a <= b + kTolerance * std::max(1.0, scale);
}

// ---------------------------------------------------------------------------
// DistanceMap

struct DistanceMap::Row {
  std::once_flag once;
  std::vector<double> dist;
  std::vector<EdgeId> pred;
};

DistanceMap::DistanceMap(const detail::InstanceCore& core, AgentId agent)
    : core_(&core), agent_(agent), rows_(new Row[core.names.size()]) {}

DistanceMap::~DistanceMap() = default;

const DistanceMap::Row& DistanceMap::ensure_row(NodeId u) const {
  Row& row = rows_[u];
  std::call_once(row.once, [&] {
    const auto n = core_->names.size();
    row.dist.assign(n, kInf);
    row.pred.assign(n, -1);
    const Agent* agent = agent_ == kWholeGraph ? nullptr : &core_->agents[agent_];
    if (agent != nullptr && !agent->has_node(u)) return;

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row.dist[u] = 0.0;
    heap.emplace(0.0, u);
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (d > row.dist[x]) continue;
      for (const auto& [y, e] : core_->adj[x]) {
        if (agent != nullptr && !agent->has_edge(e)) continue;
        const double nd = d + core_->edges[e].length;
        if (nd < row.dist[y]) {
          row.dist[y] = nd;
          row.pred[y] = e;
          heap.emplace(nd, y);
        }
      }
    }
  });
  return row;
}

std::span<const double> DistanceMap::row(NodeId u) const { return ensure_row(u).dist; }

double DistanceMap::from_start(NodeId v) const {
  if (agent_ == kWholeGraph) return kInf;
  const NodeId p = core_->agents[agent_].position;
  if (p == kNoNode) return kInf;
  return ensure_row(p).dist[v];
}

double DistanceMap::between(NodeId u, NodeId v) const { return ensure_row(u).dist[v]; }

std::vector<NodeId> DistanceMap::path(NodeId u, NodeId v) const {
  const Row& row = ensure_row(u);
  if (row.dist[v] == kInf) return {};
  std::vector<NodeId> nodes{v};
  for (NodeId x = v; x != u;) {
    x = core_->edges[row.pred[x]].other(x);
    nodes.push_back(x);
  }
  std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

// ---------------------------------------------------------------------------
// Instance

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

bool connected(std::size_t n, const std::vector<std::vector<Adjacency>>& adj,
               std::span<const NodeId> nodes, const std::function<bool(EdgeId)>& allowed) {
  if (nodes.empty()) return true;
  std::vector<char> in(n, 0), seen(n, 0);
  for (NodeId v : nodes) in[v] = 1;
  std::vector<NodeId> stack{nodes.front()};
  seen[nodes.front()] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    for (const auto& [y, e] : adj[x]) {
      if (!in[y] || seen[y] || !allowed(e)) continue;
      seen[y] = 1;
      ++count;
      stack.push_back(y);
    }
  }
  return count == nodes.size();
}

}  // namespace

Instance::Instance(std::shared_ptr<const detail::InstanceCore> core) : core_(std::move(core)) {}

Instance Instance::build(const InstanceData& data) {
  auto core = std::make_shared<detail::InstanceCore>();
  auto& c = *core;

  if (data.nodes.empty()) throw ValidationError("graph has no nodes");
  for (const auto& name : data.nodes) {
    if (!c.index.emplace(name, static_cast<NodeId>(c.names.size())).second)
      throw ValidationError("duplicate node '" + name + "'");
    c.names.push_back(name);
  }
  const auto n = c.names.size();
  auto lookup = [&](const std::string& name, const std::string& where) {
    auto it = c.index.find(name);
    if (it == c.index.end()) throw ValidationError(where + " references unknown node '" + name + "'");
    return it->second;
  };

  c.adj.resize(n);
  for (const auto& spec : data.edges) {
    const NodeId u = lookup(spec.u, "edge");
    const NodeId v = lookup(spec.v, "edge");
    if (u == v) throw ValidationError("self-loop at node '" + spec.u + "'");
    if (!(spec.length >= 0.0) || !std::isfinite(spec.length))
      throw ValidationError("edge (" + spec.u + "," + spec.v + ") has invalid length");
    const auto id = static_cast<EdgeId>(c.edges.size());
    if (!c.edge_index.emplace(edge_key(u, v), id).second)
      throw ValidationError("duplicate edge (" + spec.u + "," + spec.v + ")");
    c.edges.push_back(Edge{u, v, spec.length});
    c.adj[u].push_back({v, id});
    c.adj[v].push_back({u, id});
  }
  std::vector<NodeId> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<NodeId>(i);
  if (!connected(n, c.adj, all, [](EdgeId) { return true; }))
    throw ValidationError("graph is not connected");

  c.source = lookup(data.source, "package source");
  c.target = lookup(data.target, "package target");
  c.handover = data.handover;
  c.positions_fixed = data.positions_fixed;

  const auto m = c.edges.size();
  c.on_edge.resize(m);
  c.at_node.resize(n);
  for (const auto& spec : data.agents) {
    const auto aid = static_cast<AgentId>(c.agents.size());
    const std::string label = "agent " + spec.id;
    if (!c.agent_index.emplace(spec.id, aid).second)
      throw ValidationError("duplicate agent id '" + spec.id + "'");
    Agent a;
    a.id = spec.id;
    if (!(spec.speed > 0.0) || std::isnan(spec.speed))
      throw ValidationError(label + " has non-positive speed");
    if (!(spec.rate >= 0.0) || !std::isfinite(spec.rate))
      throw ValidationError(label + " has invalid consumption rate");
    a.speed = spec.speed;
    a.rate = spec.rate;
    a.node_mask.assign(n, 0);
    a.edge_mask.assign(m, 0);
    for (const auto& name : spec.nodes) {
      const NodeId v = lookup(name, label);
      if (a.node_mask[v]) throw ValidationError(label + " lists node '" + name + "' twice");
      a.node_mask[v] = 1;
      a.nodes.push_back(v);
    }
    for (const auto& [su, sv] : spec.edges) {
      const NodeId u = lookup(su, label);
      const NodeId v = lookup(sv, label);
      auto it = c.edge_index.find(edge_key(u, v));
      if (it == c.edge_index.end())
        throw ValidationError(label + " references missing edge (" + su + "," + sv + ")");
      if (a.edge_mask[it->second])
        throw ValidationError(label + " lists edge (" + su + "," + sv + ") twice");
      if (!a.node_mask[u] || !a.node_mask[v])
        throw ValidationError(label + " edge (" + su + "," + sv + ") has an endpoint outside its node range");
      a.edge_mask[it->second] = 1;
      a.edges.push_back(it->second);
    }
    std::sort(a.nodes.begin(), a.nodes.end());
    std::sort(a.edges.begin(), a.edges.end());
    if (a.nodes.empty()) throw ValidationError(label + " has an empty node range");
    if (!connected(n, c.adj, a.nodes, [&](EdgeId e) { return a.edge_mask[e] != 0; }))
      throw ValidationError(label + " subgraph disconnected");
    if (spec.position) {
      a.position = lookup(*spec.position, label);
      if (data.positions_fixed && !a.node_mask[a.position])
        throw ValidationError(label + " initial position '" + *spec.position + "' is outside its node range");
    } else if (data.positions_fixed) {
      throw ValidationError(label + " has no initial position but positions are fixed");
    }
    for (NodeId v : a.nodes) c.at_node[v].push_back(aid);
    for (EdgeId e : a.edges) c.on_edge[e].push_back(aid);
    c.agents.push_back(std::move(a));
  }

  const bool degenerate = c.agents.empty() && n == 1 && c.source == c.target;
  if (!degenerate) {
    if (c.agents.empty()) throw ValidationError("instance has no agents");
    for (std::size_t v = 0; v < n; ++v)
      if (c.at_node[v].empty())
        throw ValidationError("union of agent ranges does not cover the graph: node '" + c.names[v] + "' uncovered");
    for (std::size_t e = 0; e < m; ++e)
      if (c.on_edge[e].empty())
        throw ValidationError("union of agent ranges does not cover the graph: edge (" +
                              c.names[c.edges[e].u] + "," + c.names[c.edges[e].v] + ") uncovered");
  }

  c.scale = 1.0;
  for (const auto& e : c.edges) c.scale = std::max(c.scale, e.length);
  c.data = data;

  for (std::size_t a = 0; a < c.agents.size(); ++a)
    c.agent_maps.push_back(std::make_unique<DistanceMap>(c, static_cast<AgentId>(a)));
  c.whole = std::make_unique<DistanceMap>(c, DistanceMap::kWholeGraph);
  return Instance(std::move(core));
}

std::size_t Instance::node_count() const { return core_->names.size(); }
std::size_t Instance::edge_count() const { return core_->edges.size(); }
std::size_t Instance::agent_count() const { return core_->agents.size(); }
const std::string& Instance::node_name(NodeId v) const { return core_->names.at(v); }

std::optional<NodeId> Instance::find_node(std::string_view name) const {
  auto it = core_->index.find(std::string(name));
  if (it == core_->index.end()) return std::nullopt;
  return it->second;
}

const Edge& Instance::edge(EdgeId e) const { return core_->edges.at(e); }
std::span<const Edge> Instance::edges() const { return core_->edges; }
std::span<const Adjacency> Instance::neighbors(NodeId v) const { return core_->adj.at(v); }

std::optional<EdgeId> Instance::find_edge(NodeId u, NodeId v) const {
  auto it = core_->edge_index.find(edge_key(u, v));
  if (it == core_->edge_index.end()) return std::nullopt;
  return it->second;
}

NodeId Instance::source() const { return core_->source; }
NodeId Instance::target() const { return core_->target; }
HandoverMode Instance::handover() const { return core_->handover; }
bool Instance::positions_fixed() const { return core_->positions_fixed; }
const Agent& Instance::agent(AgentId a) const { return core_->agents.at(a); }
std::span<const Agent> Instance::agents() const { return core_->agents; }

std::optional<AgentId> Instance::find_agent(std::string_view id) const {
  auto it = core_->agent_index.find(std::string(id));
  if (it == core_->agent_index.end()) return std::nullopt;
  return it->second;
}

std::span<const AgentId> Instance::agents_on_edge(EdgeId e) const { return core_->on_edge.at(e); }
std::span<const AgentId> Instance::agents_at_node(NodeId v) const { return core_->at_node.at(v); }

const DistanceMap& Instance::distances(AgentId a) const {
  if (a < 0 || static_cast<std::size_t>(a) >= core_->agent_maps.size())
    throw std::out_of_range("unknown agent index " + std::to_string(a));
  return *core_->agent_maps[a];
}

const DistanceMap& Instance::graph_distances() const { return *core_->whole; }
double Instance::scale() const { return core_->scale; }
InstanceData Instance::to_data() const { return core_->data; }

Instance Instance::with_handover(HandoverMode mode) const {
  InstanceData data = core_->data;
  data.handover = mode;
  return build(data);
}

Instance Instance::with_positions(std::span<const NodeId> positions) const {
  InstanceData data = core_->data;
  for (std::size_t a = 0; a < data.agents.size() && a < positions.size(); ++a)
    if (positions[a] != kNoNode) data.agents[a].position = core_->names.at(positions[a]);
  data.positions_fixed = true;
  return build(data);
}

void precompute_distances(const Instance& inst, Execution exec) {
  const int k = static_cast<int>(inst.agent_count());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < k; ++a) {
      const NodeId p = inst.agent(a).position;
      if (p != kNoNode) (void)inst.distances(a).row(p);
    }
  } else {
    for (int a = 0; a < k; ++a) {
      const NodeId p = inst.agent(a).position;
      if (p != kNoNode) (void)inst.distances(a).row(p);
    }
  }
}

const DistanceMap& agent_distances(const Instance& inst, AgentId a) { return inst.distances(a); }

bool is_isometric(const Instance& inst, AgentId a) {
  const Agent& agent = inst.agent(a);
  const DistanceMap& own = inst.distances(a);
  const DistanceMap& whole = inst.graph_distances();
  for (NodeId u : agent.nodes) {
    auto du = own.row(u);
    auto gu = whole.row(u);
    for (NodeId v : agent.nodes)
      if (!approx_equal(du[v], gu[v], inst.scale())) return false;
  }
  return true;
}

bool all_isometric(const Instance& inst) {
  for (std::size_t a = 0; a < inst.agent_count(); ++a)
    if (!is_isometric(inst, static_cast<AgentId>(a))) return false;
  return true;
}

bool is_tree(const Instance& inst) { return inst.edge_count() + 1 == inst.node_count(); }

Instance split_edges(const Instance& inst, std::span<const SplitPlan> plan) {
  InstanceData data = inst.to_data();
  std::unordered_map<EdgeId, const SplitPlan*> by_edge;
  for (const auto& p : plan) {
    const Edge& e = inst.edge(p.edge);
    double last = 0.0;
    for (double x : p.offsets) {
      if (!(x > last) || !(x < e.length))
        throw std::invalid_argument("split offset " + std::to_string(x) + " out of range for edge (" +
                                    inst.node_name(e.u) + "," + inst.node_name(e.v) + ")");
      last = x;
    }
    if (!p.offsets.empty() && !by_edge.emplace(p.edge, &p).second)
      throw std::invalid_argument("edge listed twice in split plan");
  }
  if (by_edge.empty()) return inst;

  std::unordered_map<std::string, int> taken;
  for (const auto& name : data.nodes) taken.emplace(name, 0);
  auto fresh_name = [&](const std::string& base) {
    std::string name = base;
    for (int i = 1; taken.count(name); ++i) name = base + "'" + std::to_string(i);
    taken.emplace(name, 0);
    return name;
  };

  // fragments[e] = chain of node names from edge(u) to edge(v)
  std::unordered_map<EdgeId, std::vector<std::string>> chains;
  std::vector<InstanceData::EdgeSpec> edges;
  for (std::size_t id = 0; id < inst.edge_count(); ++id) {
    const auto e = static_cast<EdgeId>(id);
    const Edge& edge = inst.edge(e);
    auto it = by_edge.find(e);
    if (it == by_edge.end()) {
      edges.push_back({inst.node_name(edge.u), inst.node_name(edge.v), edge.length});
      continue;
    }
    std::vector<std::string> chain{inst.node_name(edge.u)};
    const auto& offsets = it->second->offsets;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      chain.push_back(fresh_name(inst.node_name(edge.u) + "~" + inst.node_name(edge.v) + "#" + std::to_string(i + 1)));
      data.nodes.push_back(chain.back());
    }
    chain.push_back(inst.node_name(edge.v));
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const double next = i < offsets.size() ? offsets[i] : edge.length;
      edges.push_back({chain[i], chain[i + 1], next - prev});
      prev = next;
    }
    chains.emplace(e, std::move(chain));
  }
  data.edges = std::move(edges);

  for (std::size_t a = 0; a < inst.agent_count(); ++a) {
    const Agent& agent = inst.agent(static_cast<AgentId>(a));
    auto& spec = data.agents[a];
    spec.edges.clear();
    for (EdgeId e : agent.edges) {
      auto it = chains.find(e);
      if (it == chains.end()) {
        spec.edges.emplace_back(inst.node_name(inst.edge(e).u), inst.node_name(inst.edge(e).v));
        continue;
      }
      const auto& chain = it->second;
      for (std::size_t i = 1; i + 1 < chain.size(); ++i) spec.nodes.push_back(chain[i]);
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) spec.edges.emplace_back(chain[i], chain[i + 1]);
    }
  }
  return Instance::build(data);
}

Instance subdivide_edges(const Instance& inst, int q, std::size_t min_agents) {
  if (q < 1) throw std::invalid_argument("subdivision factor must be at least 1");
  std::vector<SplitPlan> plan;
  if (q == 1) return inst;
  for (std::size_t id = 0; id < inst.edge_count(); ++id) {
    const auto e = static_cast<EdgeId>(id);
    const double len = inst.edge(e).length;
    if (inst.agents_on_edge(e).size() < min_agents || len <= 0.0) continue;
    SplitPlan p{e, {}};
    for (int i = 1; i < q; ++i) p.offsets.push_back(len * i / q);
    plan.push_back(std::move(p));
  }
  return split_edges(inst, plan);
}

}  // namespace rdd
