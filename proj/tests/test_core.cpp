#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "rdd/gen.hpp"
#include "rdd/io.hpp"

using namespace rdd;
using testing::AgentDef;
using testing::id;
using testing::make;

namespace {

// Floyd-Warshall over an agent's subgraph, as an independent check.
std::vector<std::vector<double>> floyd(const Instance& inst, AgentId a) {
  const std::size_t n = inst.node_count();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  const Agent* agent = a >= 0 ? &inst.agent(a) : nullptr;
  for (std::size_t v = 0; v < n; ++v)
    if (!agent || agent->has_node(static_cast<NodeId>(v))) d[v][v] = 0.0;
  for (std::size_t e = 0; e < inst.edge_count(); ++e) {
    if (agent && !agent->has_edge(static_cast<EdgeId>(e))) continue;
    const Edge& ed = inst.edge(static_cast<EdgeId>(e));
    d[ed.u][ed.v] = std::min(d[ed.u][ed.v], ed.length);
    d[ed.v][ed.u] = std::min(d[ed.v][ed.u], ed.length);
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
  return d;
}

std::string error_of(const std::string& text) {
  try {
    load_instance(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

const char* kTriangle = R"({
  "graph": {"nodes": ["a", "b", "c"],
            "edges": [{"u": "a", "v": "b", "length": 1}, {"u": "b", "v": "c", "length": 1},
                      {"u": "a", "v": "c", "length": 3}]},
  "package": {"source": "a", "target": "c"},
  "handover": "node",
  "positions_fixed": true,
  "agents": [
    {"id": "1", "p": "a", "speed": 1, "rate": 1, "nodes": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]},
    {"id": "2", "p": "c", "speed": 2, "rate": 1, "nodes": ["a", "c"], "edges": [["a", "c"]]}
  ]
})";

}  // namespace

TEST_CASE("degenerate single-node instance loads") {
  const Instance inst = load_instance(R"({"graph": {"nodes": ["v"], "edges": []},
    "package": {"source": "v", "target": "v"}, "agents": []})");
  CHECK(inst.node_count() == 1);
  CHECK(inst.agent_count() == 0);
  CHECK(inst.source() == inst.target());
}

TEST_CASE("validation rejects broken assumptions") {
  using E = InstanceData::EdgeSpec;
  SUBCASE("position outside range") {
    auto d = testing::make_data({"a", "b"}, {E{"a", "b", 1}}, "a", "b", {AgentDef{"1", "a", 1, 1, {}, {}}});
    d.agents[0].nodes = {"b"};
    d.agents[0].edges = {};
    d.agents.push_back(d.agents[0]);
    d.agents[1].id = "2";
    d.agents[1].position = "a";
    d.agents[1].nodes = {"a", "b"};
    d.agents[1].edges = {{"a", "b"}};
    CHECK_THROWS_WITH_AS(Instance::build(d), doctest::Contains("outside its node range"), ValidationError);
  }
  SUBCASE("edge not covered") {
    auto d = testing::make_data({"a", "b", "c"}, {E{"a", "b", 1}, E{"b", "c", 1}}, "a", "c",
                                {AgentDef{"1", "a", 1, 1, {"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}}});
    d.agents[0].edges = {{"a", "b"}};
    d.agents[0].nodes = {"a", "b"};
    d.agents.push_back({"2", "c", 1, 1, {"c"}, {}});
    CHECK_THROWS_WITH_AS(Instance::build(d), doctest::Contains("union of agent ranges"), ValidationError);
  }
  SUBCASE("disconnected agent subgraph") {
    auto d = testing::make_data({"a", "b", "c"}, {E{"a", "b", 1}, E{"b", "c", 1}}, "a", "c",
                                {AgentDef{"1", "a", 1, 1, {}, {}}});
    d.agents.push_back({"3", "a", 1, 1, {"a", "c"}, {}});
    CHECK_THROWS_WITH_AS(Instance::build(d), doctest::Contains("agent 3 subgraph disconnected"), ValidationError);
  }
  SUBCASE("negative length") {
    auto d = testing::make_data({"a", "b"}, {E{"a", "b", -1}}, "a", "b", {AgentDef{"1", "a", 1, 1, {}, {}}});
    CHECK_THROWS_AS(Instance::build(d), ValidationError);
  }
}

TEST_CASE("parse errors carry locations") {
  CHECK(error_of("{\n  \"graph\": [1,\n}").find("line 3") != std::string::npos);
  const std::string unknown = error_of(R"({"graph": {"nodes": ["v"], "edges": []},
    "package": {"source": "v", "target": "v"}, "agents": [], "extra": 1})");
  CHECK(unknown.find("unknown field 'extra'") != std::string::npos);
  const std::string nested = error_of(R"({"graph": {"nodes": ["v"], "edges": [{"u": "v", "w": "v"}]},
    "package": {"source": "v", "target": "v"}, "agents": []})");
  CHECK(nested.find("/graph/edges/0") != std::string::npos);
}

TEST_CASE("agent distances") {
  const Instance inst = load_instance(kTriangle);
  const DistanceMap& d1 = agent_distances(inst, 0);
  CHECK(d1.from_start(id(inst, "a")) == 0.0);
  CHECK(d1.from_start(id(inst, "c")) == doctest::Approx(2.0));
  const DistanceMap& d2 = agent_distances(inst, 1);
  CHECK(d2.from_start(id(inst, "a")) == doctest::Approx(3.0));
  CHECK(d2.from_start(id(inst, "b")) == kInf);
  CHECK_THROWS_AS(agent_distances(inst, 7), std::out_of_range);

  SUBCASE("single-node range is isolated") {
    using E = InstanceData::EdgeSpec;
    const Instance two = make({"a", "b"}, {E{"a", "b", 1}}, "a", "b",
                              {AgentDef{"1", "a", 1, 1, {}, {}}, AgentDef{"2", "b", 1, 1, {"b"}, {}}});
    CHECK(agent_distances(two, 1).from_start(id(two, "a")) == kInf);
    CHECK(agent_distances(two, 1).from_start(id(two, "b")) == 0.0);
  }
}

TEST_CASE("isometry and trees") {
  using E = InstanceData::EdgeSpec;
  const Instance cycle = make({"a", "b", "c", "d"}, {E{"a", "b", 1}, E{"b", "c", 1}, E{"c", "d", 1}, E{"d", "a", 1}},
                              "a", "c",
                              {AgentDef{"path", "a", 1, 1, {}, {{"a", "b"}, {"b", "c"}, {"c", "d"}}},
                               AgentDef{"all", "a", 1, 1, {}, {}}});
  CHECK_FALSE(is_isometric(cycle, 0));
  CHECK(is_isometric(cycle, 1));
  CHECK(agent_distances(cycle, 0).between(id(cycle, "a"), id(cycle, "d")) == 3.0);
  CHECK_FALSE(is_tree(cycle));

  const Instance path3 = make({"a", "b", "c"}, {E{"a", "b", 1}, E{"b", "c", 2}}, "a", "c", {AgentDef{"1", "a", 1, 1, {}, {}}});
  CHECK(is_tree(path3));
  const Instance star = make({"o", "1", "2", "3", "4"}, {E{"o", "1", 1}, E{"o", "2", 1}, E{"o", "3", 1}, E{"o", "4", 1}},
                             "1", "2", {AgentDef{"1", "o", 1, 1, {}, {}}});
  CHECK(is_tree(star));
  const Instance tri = make({"a", "b", "c"}, {E{"a", "b", 1}, E{"b", "c", 1}, E{"a", "c", 1}}, "a", "c",
                            {AgentDef{"1", "a", 1, 1, {}, {}}});
  CHECK_FALSE(is_tree(tri));

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    gen::RandomParams p;
    p.family = gen::Family::tree;
    p.n = 9;
    p.k = 3;
    const Instance t = gen::gen_random(p, seed);
    REQUIRE(is_tree(t));
    CHECK(all_isometric(t));
  }
}

TEST_CASE("distance properties on random instances") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    gen::RandomParams p;
    p.n = 7;
    p.k = 3;
    const Instance inst = gen::gen_random(p, seed);
    const auto whole = floyd(inst, -1);
    for (std::size_t a = 0; a < inst.agent_count(); ++a) {
      const auto ref = floyd(inst, static_cast<AgentId>(a));
      const DistanceMap& d = inst.distances(static_cast<AgentId>(a));
      bool iso = true;
      for (NodeId u : inst.agent(static_cast<AgentId>(a)).nodes) {
        for (NodeId v : inst.agent(static_cast<AgentId>(a)).nodes) {
          CHECK(d.between(u, v) == doctest::Approx(ref[u][v]));
          CHECK(d.between(u, v) == doctest::Approx(d.between(v, u)));
          CHECK(d.between(u, v) >= whole[u][v] - 1e-9);
          iso = iso && std::fabs(d.between(u, v) - whole[u][v]) < 1e-9;
          for (NodeId w : inst.agent(static_cast<AgentId>(a)).nodes)
            CHECK(d.between(u, w) <= d.between(u, v) + d.between(v, w) + 1e-9);
        }
      }
      CHECK(is_isometric(inst, static_cast<AgentId>(a)) == iso);
    }
  }
}

TEST_CASE("split_edges") {
  using E = InstanceData::EdgeSpec;
  const Instance inst = make({"a", "b"}, {E{"a", "b", 10}}, "a", "b", {AgentDef{"1", "a", 1, 1, {}, {}}});
  const SplitPlan half{0, {5.0}};
  const Instance split = split_edges(inst, std::span<const SplitPlan>(&half, 1));
  CHECK(split.node_count() == 3);
  CHECK(split.edge_count() == 2);
  CHECK(split.edge(0).length + split.edge(1).length == 10.0);
  CHECK(split.edge(0).length == 5.0);

  const Instance same = split_edges(inst, {});
  CHECK(serialize_instance(same) == serialize_instance(inst));

  const SplitPlan outside{0, {12.0}};
  CHECK_THROWS(split_edges(inst, std::span<const SplitPlan>(&outside, 1)));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gen::RandomParams p;
    p.n = 6;
    p.k = 3;
    const Instance r = gen::gen_random(p, seed);
    const Instance q4 = subdivide_edges(r, 4, 1);
    CHECK(q4.node_count() == r.node_count() + 3 * r.edge_count());
    for (std::size_t a = 0; a < r.agent_count(); ++a)
      for (NodeId u : r.agent(static_cast<AgentId>(a)).nodes)
        for (NodeId v : r.agent(static_cast<AgentId>(a)).nodes) {
          const NodeId u2 = *q4.find_node(r.node_name(u)), v2 = *q4.find_node(r.node_name(v));
          CHECK(q4.distances(static_cast<AgentId>(a)).between(u2, v2) ==
                doctest::Approx(r.distances(static_cast<AgentId>(a)).between(u, v)));
        }
  }
}

TEST_CASE("serialization round trip") {
  const Instance inst = load_instance(kTriangle);
  const std::string once = serialize_instance(inst);
  const Instance again = load_instance(once);
  CHECK(serialize_instance(again) == once);
  CHECK(io::instance_digest(inst) == io::instance_digest(again));

  gen::EopInput e{{2, 2}, std::vector<int>{0}};
  const auto g = gen::gen_eop(e);
  const std::string text = serialize_instance(g.instance);
  CHECK(text.find("\"inf\"") != std::string::npos);
  const Instance back = load_instance(text);
  CHECK(std::isinf(back.agent(*back.find_agent("f1")).speed));
  CHECK(serialize_instance(back) == text);
}

TEST_CASE("parallel and serial distance precompute agree") {
  gen::RandomParams p;
  p.n = 30;
  p.k = 6;
  const Instance a = gen::gen_random(p, 42);
  const Instance b = gen::gen_random(p, 42);
  precompute_distances(a, Execution::serial);
  precompute_distances(b, Execution::parallel);
  for (std::size_t i = 0; i < a.agent_count(); ++i)
    for (NodeId v = 0; v < static_cast<NodeId>(a.node_count()); ++v)
      CHECK(a.distances(static_cast<AgentId>(i)).from_start(v) == b.distances(static_cast<AgentId>(i)).from_start(v));
}
