#include "rdd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdd {

Point edge_point(const Instance& inst, EdgeId e, double offset) {
  const Edge& edge = inst.edge(e);
  const double slack = kTolerance * std::max(1.0, edge.length);
  if (offset < -slack || offset > edge.length + slack || std::isnan(offset))
    throw ValidationError("offset " + std::to_string(offset) + " outside edge (" + inst.node_name(edge.u) + "," +
                          inst.node_name(edge.v) + ")");
  if (offset <= 0.0) return Point::at(edge.u);
  if (offset >= edge.length) return Point::at(edge.v);
  return Point{kNoNode, e, offset};
}

Point edge_point(const Instance& inst, NodeId from, NodeId to, double offset_from) {
  auto e = inst.find_edge(from, to);
  if (!e) throw ValidationError("no edge (" + inst.node_name(from) + "," + inst.node_name(to) + ")");
  const Edge& edge = inst.edge(*e);
  return edge_point(inst, *e, edge.u == from ? offset_from : edge.length - offset_from);
}

std::optional<Segment> segment_between(const Instance& inst, const Point& a, const Point& b) {
  if (a.is_node() && b.is_node()) {
    if (a.node == b.node) return Segment{0.0, -1};
    auto e = inst.find_edge(a.node, b.node);
    if (!e) return std::nullopt;
    return Segment{inst.edge(*e).length, *e};
  }
  if (a.is_node() != b.is_node()) {
    const Point& node = a.is_node() ? a : b;
    const Point& inner = a.is_node() ? b : a;
    const Edge& edge = inst.edge(inner.edge);
    if (node.node == edge.u) return Segment{inner.offset, inner.edge};
    if (node.node == edge.v) return Segment{edge.length - inner.offset, inner.edge};
    return std::nullopt;
  }
  if (a.edge != b.edge) return std::nullopt;
  return Segment{std::fabs(a.offset - b.offset), a.edge};
}

std::string describe(const Instance& inst, const Point& p) {
  if (p.is_node()) return inst.node_name(p.node);
  const Edge& e = inst.edge(p.edge);
  std::ostringstream out;
  out << "(" << inst.node_name(e.u) << "," << inst.node_name(e.v) << ")@" << p.offset;
  return out.str();
}

double path_length(const Instance& inst, const std::vector<Point>& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto seg = segment_between(inst, path[i - 1], path[i]);
    if (!seg)
      throw ValidationError("discontinuous path between " + describe(inst, path[i - 1]) + " and " +
                            describe(inst, path[i]));
    total += seg->length;
  }
  return total;
}

namespace {

// Endpoints through which a point can be left, with the distance to each.
struct Exit {
  NodeId node;
  double cost;
};

std::vector<Exit> exits(const Instance& inst, const Point& p) {
  if (p.is_node()) return {{p.node, 0.0}};
  const Edge& e = inst.edge(p.edge);
  return {{e.u, p.offset}, {e.v, e.length - p.offset}};
}

bool in_range(const Agent& agent, const Point& p) {
  return p.is_node() ? agent.has_node(p.node) : agent.has_edge(p.edge);
}

void check_path(const Instance& inst, const Agent& agent, const std::vector<Point>& path, int trip,
                const char* which, std::vector<Violation>& out) {
  for (const Point& p : path)
    if (!in_range(agent, p))
      out.push_back({trip, "range", std::string(which) + " point " + describe(inst, p) + " outside range of agent " + agent.id});
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto seg = segment_between(inst, path[i - 1], path[i]);
    if (!seg) {
      out.push_back({trip, "path", std::string(which) + " path jumps from " + describe(inst, path[i - 1]) + " to " +
                                       describe(inst, path[i])});
    } else if (seg->edge >= 0 && !agent.has_edge(seg->edge)) {
      const Edge& e = inst.edge(seg->edge);
      out.push_back({trip, "range", std::string(which) + " path uses edge (" + inst.node_name(e.u) + "," +
                                        inst.node_name(e.v) + ") outside edge-range of agent " + agent.id});
    }
  }
}

}  // namespace

PointPath agent_point_path(const Instance& inst, AgentId a, const Point& from, const Point& to) {
  const Agent& agent = inst.agent(a);
  PointPath best;
  if (!in_range(agent, from) || !in_range(agent, to)) return best;
  if (from == to) {
    best.length = 0.0;
    best.points = {from};
    return best;
  }
  if (!from.is_node() && !to.is_node() && from.edge == to.edge) {
    best.length = std::fabs(from.offset - to.offset);
    best.points = {from, to};
  }
  const DistanceMap& dist = inst.distances(a);
  NodeId best_x = kNoNode, best_y = kNoNode;
  for (const Exit& x : exits(inst, from)) {
    for (const Exit& y : exits(inst, to)) {
      const double d = x.cost + dist.between(x.node, y.node) + y.cost;
      if (d < best.length) {
        best.length = d;
        best_x = x.node;
        best_y = y.node;
      }
    }
  }
  if (best_x == kNoNode) return best;
  std::vector<Point> points{from};
  for (NodeId v : dist.path(best_x, best_y)) {
    Point p = Point::at(v);
    if (!(p == points.back())) points.push_back(p);
  }
  if (!(to == points.back())) points.push_back(to);
  best.points = std::move(points);
  return best;
}

std::vector<Point> node_points(std::span<const NodeId> nodes) {
  std::vector<Point> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) out.push_back(Point::at(v));
  return out;
}

Trip trip_from_start(const Instance& inst, AgentId a, std::vector<Point> carry) {
  Trip trip;
  trip.agent = a;
  trip.start_time = 0.0;
  const NodeId p = inst.agent(a).position;
  if (p != kNoNode) {
    PointPath empty = agent_point_path(inst, a, Point::at(p), carry.front());
    if (empty.length == kInf)
      throw ValidationError("agent " + inst.agent(a).id + " cannot reach " + describe(inst, carry.front()));
    trip.empty_path = std::move(empty.points);
  }
  trip.carry_path = std::move(carry);
  return trip;
}

Schedule schedule_from_legs(const Instance& inst, const std::vector<Leg>& legs) {
  std::vector<Leg> fused;
  for (const Leg& leg : legs) {
    if (!fused.empty() && fused.back().agent == leg.agent && fused.back().carry.back() == leg.carry.front()) {
      auto& c = fused.back().carry;
      c.insert(c.end(), leg.carry.begin() + 1, leg.carry.end());
    } else {
      fused.push_back(leg);
    }
  }
  Schedule sched;
  for (Leg& leg : fused) sched.trips.push_back(trip_from_start(inst, leg.agent, std::move(leg.carry)));
  return sched;
}

Evaluation evaluate(const Instance& inst, const Schedule& sched) {
  Evaluation ev;
  ev.arrivals.push_back(0.0);
  ev.energies.push_back(0.0);
  for (std::size_t i = 0; i < sched.trips.size(); ++i) {
    const Trip& trip = sched.trips[i];
    const std::string where = "trip " + std::to_string(i) + ": ";
    if (trip.agent < 0 || static_cast<std::size_t>(trip.agent) >= inst.agent_count())
      throw ValidationError(where + "unknown agent");
    if (trip.carry_path.empty()) throw ValidationError(where + "empty carry path");
    const Agent& agent = inst.agent(trip.agent);
    std::vector<Violation> problems;
    check_path(inst, agent, trip.empty_path, static_cast<int>(i), "empty", problems);
    check_path(inst, agent, trip.carry_path, static_cast<int>(i), "carry", problems);
    if (!trip.empty_path.empty() && !(trip.empty_path.back() == trip.carry_path.front()))
      problems.push_back({static_cast<int>(i), "path", "empty path does not end at the pickup point"});
    if (!problems.empty()) throw ValidationError(where + problems.front().message);

    const double empty_len = path_length(inst, trip.empty_path);
    const double carry_len = path_length(inst, trip.carry_path);
    const double ready = trip.start_time + travel_time(empty_len, agent.speed);
    const double t = std::max(ev.arrivals.back(), ready) + travel_time(carry_len, agent.speed);
    const double c = ev.energies.back() + agent.rate * empty_len + agent.rate * carry_len;
    ev.arrivals.push_back(t);
    ev.energies.push_back(c);
  }
  ev.time = ev.arrivals.back();
  ev.energy = ev.energies.back();
  return ev;
}

FeasibilityReport check_feasible(const Instance& inst, const Schedule& sched, CopyMode copy_mode) {
  FeasibilityReport report;
  auto& out = report.violations;
  const auto& trips = sched.trips;

  if (trips.empty() && inst.source() != inst.target())
    out.push_back({-1, "continuity", "no trips but source differs from target"});

  std::vector<int> uses(inst.agent_count(), 0);
  for (std::size_t idx = 0; idx < trips.size(); ++idx) {
    const int i = static_cast<int>(idx);
    const Trip& trip = trips[idx];
    if (trip.agent < 0 || static_cast<std::size_t>(trip.agent) >= inst.agent_count()) {
      out.push_back({i, "agent", "unknown agent index " + std::to_string(trip.agent)});
      continue;
    }
    const Agent& agent = inst.agent(trip.agent);
    if (trip.carry_path.empty()) {
      out.push_back({i, "path", "empty carry path"});
      continue;
    }
    check_path(inst, agent, trip.empty_path, i, "empty", out);
    check_path(inst, agent, trip.carry_path, i, "carry", out);
    if (!trip.empty_path.empty() && !(trip.empty_path.back() == trip.carry_path.front()))
      out.push_back({i, "path", "empty path ends at " + describe(inst, trip.empty_path.back()) +
                                    " but pickup is at " + describe(inst, trip.carry_path.front())});

    Point expected = Point::at(inst.source());
    if (idx > 0) expected = trips[idx - 1].carry_path.empty() ? trip.pickup() : trips[idx - 1].dropoff();
    if (!(trip.pickup() == expected))
      out.push_back({i, "continuity", "pickup " + describe(inst, trip.pickup()) + " but package is at " +
                                          describe(inst, expected)});
    if (idx + 1 == trips.size() && !(trip.dropoff() == Point::at(inst.target())))
      out.push_back({i, "continuity", "final dropoff " + describe(inst, trip.dropoff()) + " is not the target"});

    if (inst.handover() == HandoverMode::node) {
      if (!trip.pickup().is_node())
        out.push_back({i, "node_handover", "pickup at interior point " + describe(inst, trip.pickup())});
      if (!trip.dropoff().is_node())
        out.push_back({i, "node_handover", "dropoff at interior point " + describe(inst, trip.dropoff())});
    }

    if (++uses[trip.agent] == 2 && copy_mode == CopyMode::single)
      out.push_back({i, "single_copy", "agent " + agent.id + " used in more than one trip"});

    if (inst.positions_fixed() && !(trip.origin() == Point::at(agent.position))) {
      const bool first = uses[trip.agent] == 1;
      out.push_back({i, "start_position",
                     std::string(first || copy_mode == CopyMode::single ? "agent " : "copy of agent ") + agent.id +
                         " starts at " + describe(inst, trip.origin()) + " instead of its initial position " +
                         inst.node_name(agent.position)});
    }
    if (!(trip.start_time >= 0.0))
      out.push_back({i, "start_time", "negative start time"});
  }
  return report;
}

}  // namespace rdd
