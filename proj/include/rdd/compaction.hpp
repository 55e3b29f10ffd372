#pragma once

#include <cstddef>

#include "rdd/schedule.hpp"

namespace rdd {

struct Compaction {
  Schedule schedule;
  std::size_t merges = 0;
};

// Repeatedly takes the first agent with two or more trips and replaces its
// first through last trip by a single carry along a shortest path of G_a
// between the first pickup and the last dropoff.
Compaction merge_reused_agents(const Instance& inst, const Schedule& sched);

}  // namespace rdd
