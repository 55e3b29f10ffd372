#pragma once

#include <vector>

#include "rdd/compaction.hpp"
#include "rdd/schedule.hpp"

namespace rdd::special {

struct PathDecomposition {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  std::vector<double> prefix;  // prefix[i] = length from s to nodes[i]
};

// The unique s-y path on a tree, otherwise a shortest s-y path of G with
// deterministic tie-breaking.
PathDecomposition delivery_path(const Instance& inst);

// Throws PreconditionError naming the offending agent when some agent is
// not isometric or speeds (time) / rates (energy) differ.
void require_uniform(const Instance& inst, Objective objective, bool need_isometric);

Compaction compact_isometric(const Instance& inst, const Schedule& sched, Objective objective);

struct TreeResult {
  Schedule schedule;
  double time = 0.0;
  std::size_t merges = 0;
};
TreeResult solve_tree_ddt(const Instance& inst);

struct FreeResult {
  Instance instance;  // input with the chosen positions fixed
  Schedule schedule;
  std::vector<NodeId> positions;
  double value = 0.0;
};
FreeResult solve_free_positions(const Instance& inst, Objective objective);

}  // namespace rdd::special
