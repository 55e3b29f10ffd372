#pragma once

#include <cstddef>
#include <vector>

#include "rdd/compaction.hpp"
#include "rdd/envelope.hpp"
#include "rdd/schedule.hpp"

namespace rdd::ddt {

struct NodeDelivery {
  double arrival = kInf;
  AgentId agent = -1;
};

// Best single agent carrying the package over edge u-v when it is ready at
// u at time t. Throws PreconditionError if no agent has the edge.
NodeDelivery nei_delivery_node(const Instance& inst, NodeId u, NodeId v, double t);

// One relay leg on an edge; offsets are measured from the node the package
// enters the edge at.
struct RelaySegment {
  AgentId agent;
  double pickup_offset;
  double dropoff_offset;
  double pickup_time;
};

struct EdgePlan {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  double arrival = kInf;
  std::vector<RelaySegment> segments;
};

// Fastest relay across edge u-v with handovers allowed at interior points.
EdgePlan nei_delivery_edge(const Instance& inst, NodeId u, NodeId v, double t);

// Arrival envelope F_k over offsets [0, l] together with the per-level
// pieces needed to read back a plan.
struct EdgeEnvelope {
  std::vector<AgentId> order;           // agents by increasing speed
  std::vector<PiecewiseLinear> best;    // F_j
  std::vector<PiecewiseLinear> gain;    // g_j (empty for j = 0)
  std::vector<double> start;            // max(t, r_j(0))
};
EdgeEnvelope edge_envelope(const Instance& inst, NodeId u, NodeId v, double t);

struct Labels {
  std::vector<double> eT;
  std::vector<AgentId> carrier;  // L(v); -1 for s and unreached nodes
  std::vector<NodeId> prev;
  std::vector<char> processed;
};

struct MultiResult {
  Schedule schedule;
  double time = 0.0;
  Labels labels;
  std::vector<NodeId> package_path;
  std::vector<EdgePlan> plans;  // edge mode, one per package-path edge
  // Relaxations that would have lowered a finalized label. Always 0 when
  // the label-setting invariant holds.
  std::size_t late_improvements = 0;
};

MultiResult solve_multi(const Instance& inst);
MultiResult solve_multi(const Instance& inst, HandoverMode mode);

// Single-copy schedule from a multi-copy one. Throws ValidationError when
// the input is not multi-copy feasible.
Compaction compact(const Instance& inst, const Schedule& sched);

// min{2n/3 + 1/3, 2k - 1} for node handover, min{2n - 1, 2k - 1} for edge.
double ratio_bound(const Instance& inst, HandoverMode mode);
std::size_t merge_bound(const Instance& inst, HandoverMode mode);

}  // namespace rdd::ddt
