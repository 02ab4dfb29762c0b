#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mpqkd/scenario.hpp"

namespace mpqkd {

// Config files are flat `section.key = value` lines; `#` starts a comment.
// Missing keys keep their defaults, unknown or repeated keys are errors.
ScenarioConfig parse_config(std::string_view text, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

// Writes every key; parse_config(serialize_config(c)) == c exactly.
std::string serialize_config(const ScenarioConfig& config);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

// Sets one key from its textual value (used by the CLI overrides as well).
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);

struct DefaultInfo {
  std::string key;
  std::string value;
  std::string origin;  // "reference" for the published parameter set, "design" otherwise
  std::string note;
};

std::vector<DefaultInfo> explain_defaults();

}  // namespace mpqkd
