#pragma once

#include <string>

#include "irsa/model.hpp"

namespace irsa {

struct ParsedScenario {
    SystemConfig config;
    DegreeDistribution dist;
};

// Key-value scenario format, one `key = value` (or `key value`) pair per
// line, `#` comments. Keys: num_devices, frame_length, update_prob,
// battery_capacity (integer or "unlimited"), harvest_prob, max_degree,
// degree_table (row-major probabilities, one shared row or one row per
// battery level), adaptive (true/false).
ParsedScenario parse_scenario_text(const std::string& text, const std::string& source_name);
ParsedScenario parse_scenario_file(const std::string& path);

}  // namespace irsa
