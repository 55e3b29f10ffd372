#include "doctest.h"
#include "helpers.hpp"
#include "rdd/io.hpp"

using namespace rdd;
using testing::AgentDef;
using testing::id;
using testing::make;
using testing::trip;
using E = InstanceData::EdgeSpec;

namespace {

Instance relay(double far) {
  return make({"s", "m", "y", "hb"}, {E{"s", "m", 4}, E{"m", "y", 4}, E{"hb", "m", far}}, "s", "y",
              {AgentDef{"A", "s", 1, 2, {"s", "m"}, {}}, AgentDef{"B", "hb", 1, 3, {"m", "y", "hb"}, {}}});
}

bool has_rule(const FeasibilityReport& r, const std::string& rule) {
  for (const auto& v : r.violations)
    if (v.rule == rule) return true;
  return false;
}

}  // namespace

TEST_CASE("evaluate: single trip") {
  const Instance inst = make({"s", "y"}, {E{"s", "y", 10}}, "s", "y", {AgentDef{"a", "s", 2, 3, {}, {}}});
  Schedule sched{{trip(inst, "a", {}, {"s", "y"})}};
  const Evaluation ev = evaluate(inst, sched);
  CHECK(ev.time == 5.0);
  CHECK(ev.energy == 30.0);
  CHECK(ev.arrivals.front() == 0.0);
  CHECK(check_feasible(inst, sched, CopyMode::single).feasible());
}

TEST_CASE("evaluate: relay with and without waiting") {
  SUBCASE("B already close") {
    // B walks hb -> m (4) and meets the package there at time 4
    const Instance inst = relay(4);
    Schedule sched{{trip(inst, "A", {}, {"s", "m"}), trip(inst, "B", {"hb", "m"}, {"m", "y"})}};
    const Evaluation ev = evaluate(inst, sched);
    CHECK(ev.arrivals[1] == 4.0);
    CHECK(ev.time == 8.0);
    CHECK(ev.energy == 2.0 * 4 + 3.0 * 8);
    CHECK(check_feasible(inst, sched, CopyMode::single).feasible());
  }
  SUBCASE("package waits for B") {
    const Instance inst = relay(10);
    Schedule sched{{trip(inst, "A", {}, {"s", "m"}), trip(inst, "B", {"hb", "m"}, {"m", "y"})}};
    CHECK(evaluate(inst, sched).time == 14.0);
  }
}

TEST_CASE("evaluate: start times and partial edges") {
  const Instance inst = relay(4);
  Schedule sched{{trip(inst, "A", {}, {"s", "m"}), trip(inst, "B", {"hb", "m"}, {"m", "y"}, 6.0)}};
  CHECK(evaluate(inst, sched).time == 14.0);

  const Instance edge = make({"s", "y"}, {E{"s", "y", 10}}, "s", "y",
                             {AgentDef{"a", "s", 1, 1, {}, {}}, AgentDef{"b", "y", 2, 1, {}, {}}}, HandoverMode::edge);
  const Point mid = edge_point(edge, 0, 4.0);
  Schedule handoff;
  Trip t1 = trip(edge, "a", {}, {"s"});
  t1.carry_path.push_back(mid);
  Trip t2;
  t2.agent = 1;
  t2.empty_path = {Point::at(id(edge, "y")), mid};
  t2.carry_path = {mid, Point::at(id(edge, "y"))};
  handoff.trips = {t1, t2};
  const Evaluation ev = evaluate(edge, handoff);
  CHECK(ev.time == doctest::Approx(4.0 + 3.0));
  CHECK(ev.energy == doctest::Approx(4.0 + 6.0 + 6.0));
  CHECK(check_feasible(edge, handoff, CopyMode::single).feasible());

  SUBCASE("node handover forbids the interior point") {
    const Instance node = edge.with_handover(HandoverMode::node);
    const auto report = check_feasible(node, handoff, CopyMode::single);
    CHECK(has_rule(report, "node_handover"));
  }
  SUBCASE("collinear split of a carry segment") {
    Schedule finer = handoff;
    finer.trips[1].carry_path = {mid, edge_point(edge, 0, 7.0), Point::at(id(edge, "y"))};
    CHECK(evaluate(edge, finer).time == doctest::Approx(ev.time));
    CHECK(evaluate(edge, finer).energy == doctest::Approx(ev.energy));
  }
}

TEST_CASE("feasibility violations") {
  const Instance inst = relay(4);
  SUBCASE("edge outside range") {
    Schedule sched{{trip(inst, "A", {}, {"s", "m", "y"})}};
    CHECK(has_rule(check_feasible(inst, sched, CopyMode::multi), "range"));
    CHECK_THROWS_AS(evaluate(inst, sched), ValidationError);
  }
  SUBCASE("package continuity") {
    Schedule sched{{trip(inst, "B", {"hb", "m"}, {"m", "y"})}};
    CHECK(has_rule(check_feasible(inst, sched, CopyMode::multi), "continuity"));
  }
  SUBCASE("start position") {
    Schedule sched{{trip(inst, "A", {}, {"s", "m"}), trip(inst, "B", {}, {"m", "y"})}};
    CHECK(has_rule(check_feasible(inst, sched, CopyMode::multi), "start_position"));
  }
  SUBCASE("discontinuous path") {
    Schedule sched{{trip(inst, "B", {"hb", "y"}, {"y"})}};
    CHECK(has_rule(check_feasible(inst, sched, CopyMode::multi), "path"));
    CHECK_THROWS_AS(evaluate(inst, sched), ValidationError);
  }
  SUBCASE("reuse") {
    const Instance line = make({"a", "b", "c"}, {E{"a", "b", 1}, E{"b", "c", 1}}, "a", "c",
                               {AgentDef{"1", "a", 1, 1, {}, {}}, AgentDef{"2", "b", 1, 1, {"b"}, {}}});
    Schedule sched{{trip(line, "1", {}, {"a", "b"}), trip(line, "2", {}, {"b"}), trip(line, "1", {"a", "b"}, {"b", "c"})}};
    CHECK(check_feasible(line, sched, CopyMode::multi).feasible());
    CHECK(has_rule(check_feasible(line, sched, CopyMode::single), "single_copy"));
    sched.trips[2].empty_path.clear();
    CHECK(has_rule(check_feasible(line, sched, CopyMode::multi), "start_position"));
  }
  SUBCASE("negative start") {
    Schedule sched{{trip(inst, "A", {}, {"s", "m"}, -1.0), trip(inst, "B", {"hb", "m"}, {"m", "y"})}};
    CHECK(has_rule(check_feasible(inst, sched, CopyMode::multi), "start_time"));
  }
}

TEST_CASE("homogeneity under length scaling") {
  for (double c : {0.5, 3.0, 7.25}) {
    const Instance base = relay(6);
    InstanceData d = base.to_data();
    for (auto& e : d.edges) e.length *= c;
    const Instance scaled = Instance::build(d);
    Schedule s1{{trip(base, "A", {}, {"s", "m"}), trip(base, "B", {"hb", "m"}, {"m", "y"})}};
    Schedule s2{{trip(scaled, "A", {}, {"s", "m"}), trip(scaled, "B", {"hb", "m"}, {"m", "y"})}};
    CHECK(evaluate(scaled, s2).time == doctest::Approx(c * evaluate(base, s1).time));
    CHECK(evaluate(scaled, s2).energy == doctest::Approx(c * evaluate(base, s1).energy));
  }
}

TEST_CASE("schedule JSON round trip") {
  const Instance edge = make({"s", "y"}, {E{"s", "y", 10}}, "s", "y",
                             {AgentDef{"a", "s", 1, 1, {}, {}}, AgentDef{"b", "y", 2, 1, {}, {}}}, HandoverMode::edge);
  const std::string text = R"([
    {"agent": "a", "carry_path": ["s", {"edge": ["s", "y"], "offset": 4}]},
    {"agent": "b", "start_time": 0, "empty_path": ["y", {"edge": ["y", "s"], "offset": 6}],
     "carry_path": [{"edge": ["s", "y"], "offset": 4}, "y"]}
  ])";
  const Schedule sched = io::parse_schedule(edge, text);
  CHECK(check_feasible(edge, sched, CopyMode::single).feasible());
  CHECK(evaluate(edge, sched).time == doctest::Approx(7.0));
  const Schedule again = io::schedule_from_json(edge, io::schedule_to_json(edge, sched));
  CHECK(evaluate(edge, again).time == doctest::Approx(7.0));
  CHECK_THROWS_AS(io::parse_schedule(edge, R"([{"agent": "zz", "carry_path": ["s"]}])"), ParseError);
  CHECK_THROWS_AS(io::parse_schedule(edge, R"([{"agent": "a", "carry_path": [{"edge": ["s", "y"], "offset": 11}]}])"),
                  ParseError);
}
