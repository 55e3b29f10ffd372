#pragma once

#include <vector>

#include "rdd/compaction.hpp"
#include "rdd/schedule.hpp"

namespace rdd::ddc {

enum class ArcKind { start, carry, handover, finish };

struct LayeredNode {
  NodeId node = kNoNode;  // kNoNode for s' and y'
  AgentId agent = -1;
};

// Arcs remember the agent action they stand for so a path can be turned
// back into trips.
struct LayeredArc {
  int from;
  int to;
  double weight;
  ArcKind kind;
  AgentId agent;  // acting agent; for handover arcs the receiving agent
  NodeId node;    // node where the arc starts in G
  EdgeId edge;    // carry arcs only, else -1
};

struct LayeredGraph {
  static constexpr int kSource = 0;
  static constexpr int kSink = 1;

  std::vector<LayeredNode> nodes;
  std::vector<LayeredArc> arcs;
  std::vector<std::vector<int>> out;  // arc ids per layered node
  std::vector<std::vector<int>> copy;  // copy[a][u] = layered id of u_a, or -1

  int id(NodeId u, AgentId a) const { return copy[a][u]; }
};

LayeredGraph build_layered(const Instance& inst);

struct MultiResult {
  Schedule schedule;
  double energy = 0.0;
  std::vector<int> arc_path;  // arc ids from s' to y'
};

MultiResult solve_multi(const Instance& inst);
MultiResult solve_multi(const Instance& inst, const LayeredGraph& graph);

// Throws ValidationError when the input is not multi-copy feasible.
Compaction compact(const Instance& inst, const Schedule& sched);

}  // namespace rdd::ddc
