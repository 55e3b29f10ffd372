#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "rdd/core.hpp"
#include "rdd/schedule.hpp"

namespace rdd::io {

using Json = nlohmann::ordered_json;

InstanceData parse_instance_data(std::string_view text);
Json instance_to_json(const Instance& inst);

Schedule parse_schedule(const Instance& inst, std::string_view text);
Schedule schedule_from_json(const Instance& inst, const Json& doc);
Json schedule_to_json(const Instance& inst, const Schedule& sched);

Json point_to_json(const Instance& inst, const Point& p);
Json evaluation_to_json(const Evaluation& ev);
Json report_to_json(const FeasibilityReport& report);

// Rounds to 12 significant digits so report diffs are stable.
double report_number(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// 64-bit FNV-1a of the canonical instance serialization, as hex.
std::string instance_digest(const Instance& inst);

}  // namespace rdd::io
