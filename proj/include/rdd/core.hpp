#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rdd {

using NodeId = int;
using EdgeId = int;
using AgentId = int;

inline constexpr NodeId kNoNode = -1;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute tolerance applied to values normalized to instance scale.
inline constexpr double kTolerance = 1e-9;

enum class HandoverMode { node, edge };
enum class Objective { time, energy };
enum class CopyMode { multi, single };
enum class Execution { serial, parallel };

std::string_view to_string(HandoverMode mode);
std::string_view to_string(Objective objective);
std::string_view to_string(CopyMode mode);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a solver is called outside the instance class it is exact for.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Time to cover `distance` at `speed`; unreachable stays unreachable and
// infinite speed covers any finite distance instantly.
inline double travel_time(double distance, double speed) {
  if (distance == kInf) return kInf;
  return distance / speed;
}

// Plain, name-based description of an instance. Generators and the file
// loader produce this; Instance::build validates it.
struct InstanceData {
  struct EdgeSpec {
    std::string u;
    std::string v;
    double length = 0.0;
  };
  struct AgentSpec {
    std::string id;
    std::optional<std::string> position;
    double speed = 1.0;
    double rate = 1.0;
    std::vector<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
  };

  std::vector<std::string> nodes;
  std::vector<EdgeSpec> edges;
  std::string source;
  std::string target;
  HandoverMode handover = HandoverMode::node;
  bool positions_fixed = true;
  std::vector<AgentSpec> agents;
};

struct Edge {
  NodeId u = kNoNode;
  NodeId v = kNoNode;
  double length = 0.0;

  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool has(NodeId x) const { return x == u || x == v; }
};

struct Adjacency {
  NodeId neighbor;
  EdgeId edge;
};

struct Agent {
  std::string id;
  NodeId position = kNoNode;
  double speed = 1.0;
  double rate = 1.0;
  std::vector<NodeId> nodes;   // sorted
  std::vector<EdgeId> edges;   // sorted
  std::vector<char> node_mask;
  std::vector<char> edge_mask;

  bool has_node(NodeId v) const { return v >= 0 && node_mask[v] != 0; }
  bool has_edge(EdgeId e) const { return e >= 0 && edge_mask[e] != 0; }
};

// A location on the graph: a node, or a point on an edge at `offset` from
// edge(u) in the stored orientation. Offsets of 0 and the full length are
// normalized to the endpoint node.
struct Point {
  NodeId node = kNoNode;
  EdgeId edge = -1;
  double offset = 0.0;

  static Point at(NodeId v) { return Point{v, -1, 0.0}; }
  bool is_node() const { return node != kNoNode; }
  friend bool operator==(const Point&, const Point&) = default;
};

namespace detail {
struct InstanceCore;
}

class Instance;

// Shortest-path distances inside one agent's subgraph (or the whole graph).
// Rows are computed on first use and are safe to query concurrently.
class DistanceMap {
 public:
  DistanceMap(const detail::InstanceCore& core, AgentId agent);
  ~DistanceMap();
  DistanceMap(const DistanceMap&) = delete;
  DistanceMap& operator=(const DistanceMap&) = delete;

  // kNoAgent identifies the whole-graph map.
  static constexpr AgentId kWholeGraph = -1;

  AgentId agent() const { return agent_; }
  double from_start(NodeId v) const;
  double between(NodeId u, NodeId v) const;
  // Node sequence of a shortest u-v path; empty if unreachable.
  std::vector<NodeId> path(NodeId u, NodeId v) const;
  std::span<const double> row(NodeId u) const;

 private:
  struct Row;
  const Row& ensure_row(NodeId u) const;

  const detail::InstanceCore* core_;
  AgentId agent_;
  std::unique_ptr<Row[]> rows_;
};

class Instance {
 public:
  static Instance build(const InstanceData& data);

  std::size_t node_count() const;
  std::size_t edge_count() const;
  std::size_t agent_count() const;

  const std::string& node_name(NodeId v) const;
  std::optional<NodeId> find_node(std::string_view name) const;
  const Edge& edge(EdgeId e) const;
  std::span<const Edge> edges() const;
  std::span<const Adjacency> neighbors(NodeId v) const;
  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;

  NodeId source() const;
  NodeId target() const;
  HandoverMode handover() const;
  bool positions_fixed() const;

  const Agent& agent(AgentId a) const;
  std::span<const Agent> agents() const;
  std::optional<AgentId> find_agent(std::string_view id) const;
  // A(u, v): agents whose edge-range contains e, ascending.
  std::span<const AgentId> agents_on_edge(EdgeId e) const;
  // A(u): agents whose node-range contains v, ascending.
  std::span<const AgentId> agents_at_node(NodeId v) const;

  // Throws std::out_of_range for unknown agents.
  const DistanceMap& distances(AgentId a) const;
  const DistanceMap& graph_distances() const;

  // Largest finite edge length (at least 1); scales comparison tolerances.
  double scale() const;

  InstanceData to_data() const;
  Instance with_handover(HandoverMode mode) const;
  // Positions fixed to the given nodes (kNoNode keeps the current one).
  Instance with_positions(std::span<const NodeId> positions) const;

 private:
  explicit Instance(std::shared_ptr<const detail::InstanceCore> core);
  std::shared_ptr<const detail::InstanceCore> core_;
};

// Precomputes dist_a(p_a, .) for every agent.
void precompute_distances(const Instance& inst, Execution exec);

Instance load_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

const DistanceMap& agent_distances(const Instance& inst, AgentId a);
bool is_isometric(const Instance& inst, AgentId a);
bool all_isometric(const Instance& inst);
bool is_tree(const Instance& inst);

struct SplitPlan {
  EdgeId edge;
  std::vector<double> offsets;  // strictly inside (0, length), from edge(u)
};
Instance split_edges(const Instance& inst, std::span<const SplitPlan> plan);
// Splits every edge whose A(u,v) has at least `min_agents` agents into q equal parts.
Instance subdivide_edges(const Instance& inst, int q, std::size_t min_agents = 2);

bool approx_equal(double a, double b, double scale = 1.0);
bool approx_le(double a, double b, double scale = 1.0);

}  // namespace rdd
