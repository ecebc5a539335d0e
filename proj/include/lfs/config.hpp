#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lfs/scenario.hpp"

namespace lfs {

// Line-oriented config:
//
//   # comment
//   preset = fig2a          # optional, before the first section
//   [pulse]
//   rabi = 10*pi
//   duration = 1.9
//   [medium]
//   B = 0.32                # or C = ..., not both
//
// Sections: [pulse] [medium] [grid] [numerics] [output]. Unknown sections or keys
// are errors. Numbers accept a trailing `pi` factor (`pi`, `10pi`, `10*pi`).

/// Names accepted by preset().
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig preset(std::string_view name);

/// Parses text on top of `base`, then validates. Errors carry the line number.
ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base = {});
ScenarioConfig load_config(const std::filesystem::path& path, const ScenarioConfig& base = {});

/// Every key, one per line, with 17 significant digits; parse_config(write_config(c)) == c.
std::string write_config(const ScenarioConfig& config);

/// Number formatting shared by all writers.
std::string format_number(double v);

/// Parses a number with the optional `pi` factor; throws ConfigError.
double parse_number(std::string_view text, int line = 0);

}  // namespace lfs
