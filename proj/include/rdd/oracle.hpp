#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rdd/schedule.hpp"

namespace rdd::oracle {

struct Stats {
  std::uint64_t explored = 0;  // simple paths, or (agent set, node) transitions
  std::uint64_t expanded = 0;  // search states expanded
  std::uint64_t pruned = 0;
};

struct OracleResult {
  double value = kInf;
  Schedule witness;
  Stats stats;
  std::optional<Instance> refined;  // set by edge_handover_subdivision
};

struct Guard {
  std::size_t max_agents = 6;
  std::size_t max_nodes = 12;
  bool override_guard = false;
};

// Hard ceiling even with the override; the state table is 2^k * n.
inline constexpr std::size_t kSubsetAgentCeiling = 20;

// Exact single-copy optimum with node handover. Dynamic program over
// (set of agents already used, node holding the package); the cheapest
// time/energy dominates because every later cost is nondecreasing in it.
OracleResult exact_single_copy(const Instance& inst, Objective objective, const Guard& guard = {},
                               Execution exec = Execution::parallel);

// Multi-copy optimum with node handover by enumerating simple s-y paths.
OracleResult exact_multi_copy_paths(const Instance& inst, Objective objective, std::size_t max_nodes = 12,
                                    bool override_guard = false);

// Splits every edge shared by two or more agents into q equal parts and
// solves node-handover multi-copy on the result.
OracleResult edge_handover_subdivision(const Instance& inst, int q, Objective objective = Objective::time,
                                       std::size_t max_refined_nodes = 200000);

}  // namespace rdd::oracle
