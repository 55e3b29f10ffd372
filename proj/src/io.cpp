#include "rdd/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace rdd::io {

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(line_col(text, err.byte), "malformed JSON");
  }
}

void expect_fields(const Json& j, const std::string& where, std::initializer_list<std::string_view> required,
                   std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) throw ParseError(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto f : required) known = known || it.key() == f;
    for (auto f : optional) known = known || it.key() == f;
    if (!known) throw ParseError(where, "unknown field '" + it.key() + "'");
  }
  for (auto f : required)
    if (!j.contains(f)) throw ParseError(where, "missing field '" + std::string(f) + "'");
}

const Json& array_at(const Json& j, std::string_view key, const std::string& where) {
  const Json& a = j.at(key);
  if (!a.is_array()) throw ParseError(where + "/" + std::string(key), "expected an array");
  return a;
}

std::string string_value(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

// Agent and node ids may be written as strings or integers.
std::string id_value(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  return string_value(j, where);
}

double number_value(const Json& j, const std::string& where, bool allow_inf = false) {
  if (j.is_number()) return j.get<double>();
  if (allow_inf && j.is_string() && j.get<std::string>() == "inf") return kInf;
  throw ParseError(where, allow_inf ? "expected a number or \"inf\"" : "expected a number");
}

Json number_json(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

Point point_from_json(const Instance& inst, const Json& j, const std::string& where) {
  if (j.is_string()) {
    auto v = inst.find_node(j.get<std::string>());
    if (!v) throw ParseError(where, "unknown node '" + j.get<std::string>() + "'");
    return Point::at(*v);
  }
  expect_fields(j, where, {"edge", "offset"});
  const Json& e = j.at("edge");
  if (!e.is_array() || e.size() != 2) throw ParseError(where + "/edge", "expected [u, v]");
  auto u = inst.find_node(id_value(e[0], where + "/edge/0"));
  auto v = inst.find_node(id_value(e[1], where + "/edge/1"));
  if (!u || !v) throw ParseError(where + "/edge", "unknown node");
  try {
    return edge_point(inst, *u, *v, number_value(j.at("offset"), where + "/offset"));
  } catch (const ValidationError& err) {
    throw ParseError(where, err.what());
  }
}

}  // namespace

double report_number(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

InstanceData parse_instance_data(std::string_view text) {
  const Json doc = parse_json(text);
  InstanceData data;
  expect_fields(doc, "", {"graph", "package", "agents"}, {"handover", "positions_fixed"});

  const Json& graph = doc.at("graph");
  expect_fields(graph, "/graph", {"nodes", "edges"});
  const Json& nodes = array_at(graph, "nodes", "/graph");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    data.nodes.push_back(id_value(nodes[i], "/graph/nodes/" + std::to_string(i)));
  const Json& edges = array_at(graph, "edges", "/graph");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "/graph/edges/" + std::to_string(i);
    expect_fields(edges[i], where, {"u", "v", "length"});
    data.edges.push_back({id_value(edges[i].at("u"), where + "/u"), id_value(edges[i].at("v"), where + "/v"),
                          number_value(edges[i].at("length"), where + "/length")});
  }

  const Json& package = doc.at("package");
  expect_fields(package, "/package", {"source", "target"});
  data.source = id_value(package.at("source"), "/package/source");
  data.target = id_value(package.at("target"), "/package/target");

  if (doc.contains("handover")) {
    const std::string mode = string_value(doc.at("handover"), "/handover");
    if (mode == "node") data.handover = HandoverMode::node;
    else if (mode == "edge") data.handover = HandoverMode::edge;
    else throw ParseError("/handover", "expected \"node\" or \"edge\"");
  }
  if (doc.contains("positions_fixed")) {
    if (!doc.at("positions_fixed").is_boolean()) throw ParseError("/positions_fixed", "expected a boolean");
    data.positions_fixed = doc.at("positions_fixed").get<bool>();
  }

  const Json& agents = array_at(doc, "agents", "");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "/agents/" + std::to_string(i);
    const Json& a = agents[i];
    expect_fields(a, where, {"id", "speed", "rate", "nodes", "edges"}, {"p"});
    InstanceData::AgentSpec spec;
    spec.id = id_value(a.at("id"), where + "/id");
    if (a.contains("p") && !a.at("p").is_null()) spec.position = id_value(a.at("p"), where + "/p");
    spec.speed = number_value(a.at("speed"), where + "/speed", true);
    spec.rate = number_value(a.at("rate"), where + "/rate");
    const Json& an = array_at(a, "nodes", where);
    for (std::size_t j = 0; j < an.size(); ++j)
      spec.nodes.push_back(id_value(an[j], where + "/nodes/" + std::to_string(j)));
    const Json& ae = array_at(a, "edges", where);
    for (std::size_t j = 0; j < ae.size(); ++j) {
      const std::string ew = where + "/edges/" + std::to_string(j);
      if (!ae[j].is_array() || ae[j].size() != 2) throw ParseError(ew, "expected [u, v]");
      spec.edges.emplace_back(id_value(ae[j][0], ew + "/0"), id_value(ae[j][1], ew + "/1"));
    }
    data.agents.push_back(std::move(spec));
  }
  return data;
}

Json instance_to_json(const Instance& inst) {
  const InstanceData data = inst.to_data();
  Json doc;
  Json edges = Json::array();
  for (const auto& e : data.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  doc["graph"] = {{"nodes", data.nodes}, {"edges", edges}};
  doc["package"] = {{"source", data.source}, {"target", data.target}};
  doc["handover"] = std::string(to_string(data.handover));
  doc["positions_fixed"] = data.positions_fixed;
  Json agents = Json::array();
  for (const auto& a : data.agents) {
    Json ja;
    ja["id"] = a.id;
    if (a.position) ja["p"] = *a.position;
    ja["speed"] = number_json(a.speed);
    ja["rate"] = a.rate;
    ja["nodes"] = a.nodes;
    Json ae = Json::array();
    for (const auto& [u, v] : a.edges) ae.push_back(Json::array({u, v}));
    ja["edges"] = ae;
    agents.push_back(std::move(ja));
  }
  doc["agents"] = agents;
  return doc;
}

Json point_to_json(const Instance& inst, const Point& p) {
  if (p.is_node()) return inst.node_name(p.node);
  const Edge& e = inst.edge(p.edge);
  return Json{{"edge", Json::array({inst.node_name(e.u), inst.node_name(e.v)})}, {"offset", p.offset}};
}

Schedule schedule_from_json(const Instance& inst, const Json& doc) {
  if (!doc.is_array()) throw ParseError("", "expected an array of trips");
  Schedule sched;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "/" + std::to_string(i);
    const Json& t = doc[i];
    expect_fields(t, where, {"agent", "carry_path"}, {"start_time", "empty_path"});
    Trip trip;
    const std::string id = id_value(t.at("agent"), where + "/agent");
    auto a = inst.find_agent(id);
    if (!a) throw ParseError(where + "/agent", "unknown agent '" + id + "'");
    trip.agent = *a;
    if (t.contains("start_time")) trip.start_time = number_value(t.at("start_time"), where + "/start_time");
    if (t.contains("empty_path")) {
      const Json& ep = array_at(t, "empty_path", where);
      for (std::size_t j = 0; j < ep.size(); ++j)
        trip.empty_path.push_back(point_from_json(inst, ep[j], where + "/empty_path/" + std::to_string(j)));
    }
    const Json& cp = array_at(t, "carry_path", where);
    if (cp.empty()) throw ParseError(where + "/carry_path", "carry path needs at least one point");
    for (std::size_t j = 0; j < cp.size(); ++j)
      trip.carry_path.push_back(point_from_json(inst, cp[j], where + "/carry_path/" + std::to_string(j)));
    sched.trips.push_back(std::move(trip));
  }
  return sched;
}

Schedule parse_schedule(const Instance& inst, std::string_view text) {
  return schedule_from_json(inst, parse_json(text));
}

Json schedule_to_json(const Instance& inst, const Schedule& sched) {
  Json out = Json::array();
  for (const Trip& trip : sched.trips) {
    Json t;
    t["agent"] = inst.agent(trip.agent).id;
    t["start_time"] = trip.start_time;
    Json ep = Json::array(), cp = Json::array();
    for (const Point& p : trip.empty_path) ep.push_back(point_to_json(inst, p));
    for (const Point& p : trip.carry_path) cp.push_back(point_to_json(inst, p));
    t["empty_path"] = ep;
    t["carry_path"] = cp;
    out.push_back(std::move(t));
  }
  return out;
}

Json evaluation_to_json(const Evaluation& ev) {
  Json arr = Json::array(), en = Json::array();
  for (double x : ev.arrivals) arr.push_back(report_number(x));
  for (double x : ev.energies) en.push_back(report_number(x));
  return Json{{"arrivals", arr}, {"energies", en}, {"T", report_number(ev.time)}, {"C", report_number(ev.energy)}};
}

Json report_to_json(const FeasibilityReport& report) {
  Json v = Json::array();
  for (const auto& x : report.violations) v.push_back({{"trip", x.trip}, {"rule", x.rule}, {"message", x.message}});
  return Json{{"feasible", report.feasible()}, {"violations", v}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string instance_digest(const Instance& inst) {
  const std::string canonical = serialize_instance(inst);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rdd::io

namespace rdd {

Instance load_instance(std::string_view text) { return Instance::build(io::parse_instance_data(text)); }

std::string serialize_instance(const Instance& inst) { return io::instance_to_json(inst).dump(2); }

}  // namespace rdd
