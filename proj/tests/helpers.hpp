#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "rdd/core.hpp"
#include "rdd/schedule.hpp"

namespace testing {

struct AgentDef {
  std::string id;
  std::string p;
  double speed;
  double rate;
  std::vector<std::string> nodes;  // empty: every node
  std::vector<std::pair<std::string, std::string>> edges;  // empty: every edge among `nodes`
};

inline rdd::InstanceData make_data(std::vector<std::string> nodes, std::vector<rdd::InstanceData::EdgeSpec> edges,
                                   std::string s, std::string y, std::vector<AgentDef> agents,
                                   rdd::HandoverMode mode = rdd::HandoverMode::node) {
  rdd::InstanceData d;
  d.nodes = std::move(nodes);
  d.edges = std::move(edges);
  d.source = std::move(s);
  d.target = std::move(y);
  d.handover = mode;
  for (auto& a : agents) {
    rdd::InstanceData::AgentSpec spec;
    spec.id = a.id;
    spec.position = a.p;
    spec.speed = a.speed;
    spec.rate = a.rate;
    spec.nodes = a.nodes.empty() ? d.nodes : a.nodes;
    if (a.edges.empty()) {
      for (const auto& e : d.edges) {
        bool hu = false, hv = false;
        for (const auto& v : spec.nodes) {
          hu = hu || v == e.u;
          hv = hv || v == e.v;
        }
        if (hu && hv) spec.edges.emplace_back(e.u, e.v);
      }
    } else {
      spec.edges = a.edges;
    }
    d.agents.push_back(std::move(spec));
  }
  return d;
}

inline rdd::Instance make(std::vector<std::string> nodes, std::vector<rdd::InstanceData::EdgeSpec> edges,
                          std::string s, std::string y, std::vector<AgentDef> agents,
                          rdd::HandoverMode mode = rdd::HandoverMode::node) {
  return rdd::Instance::build(make_data(std::move(nodes), std::move(edges), std::move(s), std::move(y),
                                        std::move(agents), mode));
}

inline rdd::NodeId id(const rdd::Instance& inst, const std::string& name) { return *inst.find_node(name); }

inline std::vector<rdd::Point> pts(const rdd::Instance& inst, std::initializer_list<const char*> names) {
  std::vector<rdd::Point> out;
  for (const char* n : names) out.push_back(rdd::Point::at(id(inst, n)));
  return out;
}

inline rdd::Trip trip(const rdd::Instance& inst, const std::string& agent, std::initializer_list<const char*> empty,
                      std::initializer_list<const char*> carry, double start = 0.0) {
  rdd::Trip t;
  t.agent = *inst.find_agent(agent);
  t.start_time = start;
  t.empty_path = pts(inst, empty);
  t.carry_path = pts(inst, carry);
  return t;
}

}  // namespace testing
