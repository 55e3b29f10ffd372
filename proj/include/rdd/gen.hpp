#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdd/schedule.hpp"

namespace rdd::gen {

// Triples index X, Y, Z elements 1..n. `matching` lists triple positions
// (0-based) forming a perfect matching.
struct ThreeDM {
  int n = 0;
  std::vector<std::array<int, 3>> triples;
  std::optional<std::vector<int>> matching;
};

// Throws std::invalid_argument on bad indices, an element in no triple, or
// a supplied matching that is not perfect.
void validate(const ThreeDM& d);
// Exhaustive search; n <= 4.
std::optional<std::vector<int>> find_matching(const ThreeDM& d);
ThreeDM random_3dm(int n, int m, std::uint64_t seed);

struct Certificate {
  Schedule schedule;
  Objective objective;
  double value;
};

struct Gadget {
  Instance instance;
  std::optional<Certificate> certificate;
};

// q concatenated copies of the base gadget; inner edges get length eps.
Gadget gen_3dm_ddt(const ThreeDM& d, int q = 1, double M = 1.0, double eps = 0.0);
// Outer edges at column c (1..3n) have length 2^(3n+1-c); n <= 15.
Gadget gen_3dm_ddc(const ThreeDM& d, double eps = 0.0);

struct EopInput {
  std::vector<long long> x;            // x_1..x_2n
  std::optional<std::vector<int>> left;  // per pair, 0 or 1: which member goes left of z
};
void validate(const EopInput& e);
std::optional<std::vector<int>> find_partition(const EopInput& e);

struct EopGadget {
  Instance instance;
  std::optional<Certificate> certificate;
  double C;
  double L;
  double S;        // used: max over p agents of (distance to its farther interval start) / speed
  double S_paper;  // max_i (n+1-i)(L+1) / min(v_{p_{2i-1}}, v_{p_{2i}})
  double T;        // S + 3Cn/2 + 7/4
  std::vector<double> p_speeds;
};
EopGadget gen_eop(const EopInput& e, double C = 3.0);

enum class Family { path, tree, general };

struct RandomParams {
  int n = 6;
  int k = 3;
  Family family = Family::general;
  double extra_edge_prob = 0.3;  // general graphs, on top of a spanning tree
  double density = 0.6;          // target fraction of nodes per agent range
  std::vector<double> speeds{1.0, 1.5, 2.0, 3.0, 4.0};
  std::vector<double> rates{0.5, 1.0, 2.0, 3.0};
  bool equal_speeds = false;
  bool equal_rates = false;
  int max_length = 9;  // integer lengths in [1, max_length]
  HandoverMode handover = HandoverMode::node;
};
Instance gen_random(const RandomParams& params, std::uint64_t seed);

// Edge u-v of length in [1, 4] shared by k agents; agent a starts at its own
// node h_a joined to u and v (lengths alpha, beta with alpha + beta >= l).
// Edge handover.
Instance gen_single_edge(int k, std::uint64_t seed);

}  // namespace rdd::gen
