#pragma once

#include <filesystem>
#include <string_view>

#include "tracklab/scenario.hpp"

namespace tracklab {

/// Parses the flat `key = value` scenario format: one assignment per
/// line, `#` comments, dotted keys, angles with an optional `deg`
/// suffix, repeatable `reference.segment = <duration> <v> <w>` lines.
/// Unknown keys, syntax errors, and invariant violations raise
/// ConfigError with the line number or offending key. Empty text yields
/// the all-defaults scenario.
ScenarioConfig parse_config(std::string_view text);

/// parse_config over the file contents; IO failure raises
/// std::runtime_error naming the path.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace tracklab
