#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdd/core.hpp"

namespace rdd {

// One involvement of an agent: an empty movement from o_i to the pickup
// u_{i-1}, then a delivery trip from u_{i-1} to the dropoff u_i. An empty
// `empty_path` means the agent starts at the pickup point.
struct Trip {
  AgentId agent = 0;
  double start_time = 0.0;
  std::vector<Point> empty_path;
  std::vector<Point> carry_path;

  const Point& pickup() const { return carry_path.front(); }
  const Point& dropoff() const { return carry_path.back(); }
  const Point& origin() const { return empty_path.empty() ? carry_path.front() : empty_path.front(); }
};

struct Schedule {
  std::vector<Trip> trips;
};

struct Evaluation {
  std::vector<double> arrivals;  // T(u_0), ..., T(u_h)
  std::vector<double> energies;  // C(u_0), ..., C(u_h)
  double time = 0.0;
  double energy = 0.0;

  double value(Objective objective) const { return objective == Objective::time ? time : energy; }
};

struct Violation {
  int trip;  // -1 for schedule-level violations
  std::string rule;
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

// Point on edge e at `offset` from edge(e).u, with endpoint offsets
// collapsed to nodes.
Point edge_point(const Instance& inst, EdgeId e, double offset);
Point edge_point(const Instance& inst, NodeId from, NodeId to, double offset_from);

// Length of the straight move between two consecutive path points and the
// edge it runs along (-1 when both points are the same node). Returns
// nullopt when the points do not share an edge.
struct Segment {
  double length;
  EdgeId edge;
};
std::optional<Segment> segment_between(const Instance& inst, const Point& a, const Point& b);

// Total length of a path; throws ValidationError on a discontinuity.
double path_length(const Instance& inst, const std::vector<Point>& path);

// Shortest path inside G_a between two points of the agent's range.
struct PointPath {
  double length = kInf;
  std::vector<Point> points;
};
PointPath agent_point_path(const Instance& inst, AgentId a, const Point& from, const Point& to);

// Throws ValidationError on discontinuous paths or points outside the
// carrying agent's range.
Evaluation evaluate(const Instance& inst, const Schedule& sched);

FeasibilityReport check_feasible(const Instance& inst, const Schedule& sched, CopyMode copy_mode);

std::string describe(const Instance& inst, const Point& p);

// Trip whose empty path is the agent's shortest route from p_a.
Trip trip_from_start(const Instance& inst, AgentId a, std::vector<Point> carry);

// Carry legs in package order. Consecutive legs of one agent that meet are
// fused; every resulting trip leaves p_a at time 0.
struct Leg {
  AgentId agent;
  std::vector<Point> carry;
};
Schedule schedule_from_legs(const Instance& inst, const std::vector<Leg>& legs);
std::vector<Point> node_points(std::span<const NodeId> nodes);

}  // namespace rdd
