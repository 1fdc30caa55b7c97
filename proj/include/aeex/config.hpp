#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "aeex/simulation.hpp"

namespace aeex {

/// Strict JSON <-> SimConfig. Unknown keys raise ValidationError with code
/// CONFIG_INVALID; every key is optional and falls back to the SimConfig
/// default.
SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& c);

/// Reads a JSON file. Codes: CONFIG_NOT_FOUND, CONFIG_PARSE.
nlohmann::json read_config_json(const std::string& path);

/// Applies "a.b.c=value" to j. The value is parsed as JSON when possible and
/// taken as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Human-readable schema with defaults, printed by `info`.
std::string config_schema();

}  // namespace aeex
