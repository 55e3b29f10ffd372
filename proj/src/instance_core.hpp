#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rdd/core.hpp"

namespace rdd::detail {

struct InstanceCore {
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> index;
  std::vector<Edge> edges;
  std::vector<std::vector<Adjacency>> adj;
  std::unordered_map<std::uint64_t, EdgeId> edge_index;
  NodeId source = kNoNode;
  NodeId target = kNoNode;
  HandoverMode handover = HandoverMode::node;
  bool positions_fixed = true;
  std::vector<Agent> agents;
  std::unordered_map<std::string, AgentId> agent_index;
  std::vector<std::vector<AgentId>> on_edge;
  std::vector<std::vector<AgentId>> at_node;
  double scale = 1.0;
  InstanceData data;

  std::vector<std::unique_ptr<DistanceMap>> agent_maps;
  std::unique_ptr<DistanceMap> whole;
};

}  // namespace rdd::detail
