#include "doctest.h"
#include "helpers.hpp"
#include "rdd/ddc.hpp"
#include "rdd/ddt.hpp"
#include "rdd/gen.hpp"
#include "rdd/oracle.hpp"

using namespace rdd;
using testing::AgentDef;
using testing::make;
using E = InstanceData::EdgeSpec;

namespace {

Instance small_random(std::uint64_t seed, HandoverMode mode = HandoverMode::node) {
  gen::RandomParams p;
  p.n = 3 + static_cast<int>(seed % 6);
  p.k = 1 + static_cast<int>(seed % 4);
  p.handover = mode;
  return gen::gen_random(p, seed);
}

void check_witness(const Instance& inst, const oracle::OracleResult& r, Objective obj, CopyMode mode) {
  CHECK(check_feasible(inst, r.witness, mode).feasible());
  const Evaluation ev = evaluate(inst, r.witness);
  CHECK((obj == Objective::time ? ev.time : ev.energy) == doctest::Approx(r.value).epsilon(1e-12));
}

}  // namespace

TEST_CASE("single-copy oracle: trivial cases and witnesses") {
  const Instance one = make({"s", "m", "y"}, {E{"s", "m", 2}, E{"m", "y", 2}}, "s", "y", {AgentDef{"a", "m", 2, 3, {}, {}}});
  CHECK(oracle::exact_single_copy(one, Objective::time).value == ddt::solve_multi(one).time);
  CHECK(oracle::exact_single_copy(one, Objective::energy).value == ddc::solve_multi(one).energy);

  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = small_random(seed);
    for (Objective obj : {Objective::time, Objective::energy}) {
      const auto par = oracle::exact_single_copy(inst, obj, {}, Execution::parallel);
      const auto ser = oracle::exact_single_copy(inst, obj, {}, Execution::serial);
      CHECK(par.value == ser.value);
      check_witness(inst, par, obj, CopyMode::single);
      const auto multi = oracle::exact_multi_copy_paths(inst, obj);
      check_witness(inst, multi, obj, CopyMode::multi);
      CHECK(par.value >= multi.value - 1e-9);
    }
  }
}

TEST_CASE("guards") {
  gen::RandomParams p;
  p.n = 14;
  p.k = 3;
  const Instance big = gen::gen_random(p, 3);
  CHECK_THROWS_AS(oracle::exact_single_copy(big, Objective::time), PreconditionError);
  CHECK_THROWS_AS(oracle::exact_multi_copy_paths(big, Objective::time), PreconditionError);
  oracle::Guard open;
  open.override_guard = true;
  CHECK_NOTHROW(oracle::exact_single_copy(big, Objective::time, open));

  const Instance edge = small_random(5, HandoverMode::edge);
  CHECK_THROWS_AS(oracle::exact_single_copy(edge, Objective::time), PreconditionError);
}

TEST_CASE("multi-copy path oracle agrees with the solvers") {
  const Instance one = make({"u", "v"}, {E{"u", "v", 6}}, "u", "v",
                            {AgentDef{"a", "u", 1, 1, {}, {}}, AgentDef{"b", "v", 3, 1, {}, {}}});
  CHECK(oracle::exact_multi_copy_paths(one, Objective::time).value == ddt::nei_delivery_node(one, 0, 1, 0).arrival);
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    const Instance inst = small_random(seed);
    CHECK(oracle::exact_multi_copy_paths(inst, Objective::time).value == doctest::Approx(ddt::solve_multi(inst).time));
    CHECK(oracle::exact_multi_copy_paths(inst, Objective::energy).value == doctest::Approx(ddc::solve_multi(inst).energy));
  }
}

TEST_CASE("edge handover subdivision") {
  const Instance two = make({"u", "v"}, {E{"u", "v", 10}}, "u", "v",
                            {AgentDef{"a1", "u", 1, 1, {}, {}}, AgentDef{"a2", "v", 2, 1, {}, {}}}, HandoverMode::edge);
  CHECK_THROWS_AS(oracle::edge_handover_subdivision(two, 1000, Objective::time, 50), PreconditionError);
  CHECK(oracle::edge_handover_subdivision(two, 1).value == ddt::solve_multi(two, HandoverMode::node).time);
  const auto fine = oracle::edge_handover_subdivision(two, 1000);
  CHECK(std::abs(fine.value - 20.0 / 3.0) < 0.02);
  REQUIRE(fine.refined.has_value());
  CHECK(fine.refined->node_count() == 1001);
  check_witness(*fine.refined, fine, Objective::time, CopyMode::multi);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = small_random(seed, HandoverMode::edge);
    double prev = kInf;
    for (int q : {1, 2, 4, 8}) {
      const double t = oracle::edge_handover_subdivision(inst, q).value;
      CHECK(t <= prev + 1e-9);
      prev = t;
    }
    const double e1 = oracle::edge_handover_subdivision(inst, 1, Objective::energy).value;
    const double e6 = oracle::edge_handover_subdivision(inst, 6, Objective::energy).value;
    CHECK(e6 == doctest::Approx(e1));
  }
}
