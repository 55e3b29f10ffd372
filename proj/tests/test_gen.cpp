#include <cmath>

#include "doctest.h"
#include "rdd/ddc.hpp"
#include "rdd/ddt.hpp"
#include "rdd/gen.hpp"
#include "rdd/io.hpp"

using namespace rdd;

namespace {

gen::ThreeDM yes_instance(int n) {
  gen::ThreeDM d;
  d.n = n;
  for (int i = 1; i <= n; ++i) d.triples.push_back({i, i, i});
  if (n >= 2) d.triples.push_back({1, 2, 1});
  d.matching = std::vector<int>();
  for (int i = 0; i < n; ++i) d.matching->push_back(i);
  return d;
}

void check_certificate(const Instance& inst, const gen::Certificate& c, double expected) {
  CHECK(check_feasible(inst, c.schedule, CopyMode::single).feasible());
  const Evaluation ev = evaluate(inst, c.schedule);
  CHECK((c.objective == Objective::time ? ev.time : ev.energy) == expected);
  CHECK(c.value == expected);
}

}  // namespace

TEST_CASE("3DM validation and search") {
  gen::ThreeDM bad;
  bad.n = 2;
  bad.triples = {{1, 1, 1}, {2, 2, 3}};
  CHECK_THROWS_AS(gen::validate(bad), std::invalid_argument);
  bad.triples = {{1, 1, 1}, {1, 2, 2}};
  CHECK_THROWS_AS(gen::validate(bad), std::invalid_argument);

  gen::ThreeDM no;
  no.n = 2;
  no.triples = {{1, 1, 1}, {1, 2, 2}, {2, 1, 2}};
  CHECK_NOTHROW(gen::validate(no));
  CHECK_FALSE(gen::find_matching(no).has_value());
  const auto yes = gen::find_matching(yes_instance(3));
  REQUIRE(yes.has_value());
  CHECK(yes->size() == 3);

  const auto r = gen::random_3dm(3, 4, 11);
  CHECK_NOTHROW(gen::validate(r));
  CHECK(r.triples.size() >= 4);
}

TEST_CASE("3DM DDT gadget sizes and certificate") {
  for (int n = 1; n <= 3; ++n) {
    for (int q = 1; q <= 3; ++q) {
      const auto d = yes_instance(n);
      const std::size_t m = d.triples.size();
      const gen::Gadget g = gen::gen_3dm_ddt(d, q, 5.0);
      CHECK(g.instance.node_count() == (4 * n + 3 * m * n) * q + 1);
      CHECK(g.instance.agent_count() == static_cast<std::size_t>(4 * n * q));
      REQUIRE(g.certificate.has_value());
      check_certificate(g.instance, *g.certificate, 5.0);
    }
  }
  const auto plain = yes_instance(2);
  CHECK(ddt::solve_multi(gen::gen_3dm_ddt(plain, 1, 1.0).instance).time == 1.0);
  gen::ThreeDM unlabeled = plain;
  unlabeled.matching.reset();
  CHECK_FALSE(gen::gen_3dm_ddt(unlabeled).certificate.has_value());
  CHECK(gen::gen_3dm_ddt(plain, 1, 1.0, 0.01).certificate->value > 1.0);
}

TEST_CASE("3DM DDC gadget energy") {
  const auto one = gen::gen_3dm_ddc(yes_instance(1));
  REQUIRE(one.certificate.has_value());
  check_certificate(one.instance, *one.certificate, 14.0);
  for (int n = 2; n <= 3; ++n) {
    const auto g = gen::gen_3dm_ddc(yes_instance(n));
    const double expected = std::ldexp(1.0, 3 * n + 1) - 2;
    check_certificate(g.instance, *g.certificate, expected);
    CHECK(ddc::solve_multi(g.instance).energy == expected);
  }
}

TEST_CASE("EOP gadget") {
  gen::EopInput e;
  e.x = {2, 2};
  e.left = std::vector<int>{0};
  const gen::EopGadget g = gen::gen_eop(e);
  CHECK(g.L == 3.0 * 3 * 1 / 2 + 7.0 / 4 + 1);
  CHECK(g.p_speeds[0] == 1.0 / (3.0 + 2.0 / 4.0));
  CHECK(g.S == doctest::Approx(g.S_paper));
  CHECK(g.T == g.S + 3.0 * 3 / 2 + 7.0 / 4);
  CHECK(g.instance.agent_count() == 4 * 1 + 3);
  CHECK(g.instance.node_count() == 4 * 1 + 5);
  REQUIRE(g.certificate.has_value());
  CHECK(check_feasible(g.instance, g.certificate->schedule, CopyMode::single).feasible());
  CHECK(g.certificate->value == doctest::Approx(g.T).epsilon(1e-14));

  gen::EopInput bigger;
  bigger.x = {3, 1, 2, 2, 4, 2};
  const auto part = gen::find_partition(bigger);
  REQUIRE(part.has_value());
  bigger.left = part;
  const gen::EopGadget h = gen::gen_eop(bigger);
  CHECK(h.certificate->value == doctest::Approx(h.T).epsilon(1e-14));
  CHECK(check_feasible(h.instance, h.certificate->schedule, CopyMode::single).feasible());
  // every p agent reaches both of its candidate interval starts by S
  for (int k = 1; k <= 6; ++k) {
    const AgentId a = *h.instance.find_agent("p" + std::to_string(k));
    const int i = (k + 1) / 2;
    const auto& d = h.instance.distances(a);
    const NodeId b = *h.instance.find_node("b" + std::to_string(2 * i - 1));
    CHECK(d.from_start(b) / h.p_speeds[k - 1] <= h.S + 1e-12);
  }

  gen::EopInput odd;
  odd.x = {1, 2};
  CHECK_FALSE(gen::find_partition(odd).has_value());
  odd.left = std::vector<int>{0};
  CHECK_THROWS_AS(gen::validate(odd), std::invalid_argument);
}

TEST_CASE("random generator") {
  gen::RandomParams p;
  p.n = 9;
  p.k = 4;
  const Instance a = gen::gen_random(p, 42), b = gen::gen_random(p, 42);
  CHECK(io::instance_digest(a) == io::instance_digest(b));
  CHECK(io::instance_digest(a) != io::instance_digest(gen::gen_random(p, 43)));

  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    gen::RandomParams t;
    t.family = gen::Family::tree;
    t.n = 2 + static_cast<int>(seed % 9);
    t.k = 1 + static_cast<int>(seed % 4);
    const Instance tree = gen::gen_random(t, seed);
    CHECK(is_tree(tree));
    CHECK(all_isometric(tree));
    CHECK_NOTHROW(load_instance(serialize_instance(tree)));

    t.family = gen::Family::path;
    const Instance path = gen::gen_random(t, seed);
    CHECK(path.edge_count() == path.node_count() - 1);
    CHECK_NOTHROW(load_instance(serialize_instance(path)));

    const Instance single = gen::gen_single_edge(t.k, seed);
    CHECK(single.handover() == HandoverMode::edge);
    CHECK(single.agent_count() == static_cast<std::size_t>(t.k));
  }
  CHECK_THROWS_AS(gen::gen_random(gen::RandomParams{1, 1}, 1), std::invalid_argument);
}
