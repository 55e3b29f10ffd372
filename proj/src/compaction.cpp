#include "rdd/compaction.hpp"

#include <vector>

namespace rdd {

namespace {

// Index of the first trip whose agent appears again later, or -1.
int first_reused(const Schedule& sched, std::size_t agents, int* last) {
  std::vector<int> last_use(agents, -1);
  for (std::size_t i = 0; i < sched.trips.size(); ++i) last_use[sched.trips[i].agent] = static_cast<int>(i);
  for (std::size_t i = 0; i < sched.trips.size(); ++i) {
    const int j = last_use[sched.trips[i].agent];
    if (j > static_cast<int>(i)) {
      *last = j;
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

Compaction merge_reused_agents(const Instance& inst, const Schedule& sched) {
  Compaction out{sched, 0};
  auto& trips = out.schedule.trips;
  int j = -1;
  for (int i = first_reused(out.schedule, inst.agent_count(), &j); i >= 0;
       i = first_reused(out.schedule, inst.agent_count(), &j)) {
    Trip& first = trips[i];
    PointPath carry = agent_point_path(inst, first.agent, first.pickup(), trips[j].dropoff());
    if (carry.length == kInf)
      throw ValidationError("agent " + inst.agent(first.agent).id + " cannot connect its first pickup to its last dropoff");
    first.carry_path = std::move(carry.points);
    trips.erase(trips.begin() + i + 1, trips.begin() + j + 1);
    ++out.merges;
  }
  return out;
}

}  // namespace rdd
