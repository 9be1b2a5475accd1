#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "pss/simulation.hpp"

namespace pss::cli {

// Scenario files are sectioned key = value text:
//
//   [scenario]      t_end, dt, control_period, controller
//   [generator]     one or two; machine constants plus x1d or u_d
//   [disturbance]   zero or more; kind, t_start, t_end, magnitude
//   [cpss] [fpss] [smc] [fsmc]   controller settings; an absent section
//                                leaves that controller unconfigured
//
// '#' and ';' start comments. Keys may appear in any order within a section.

/// Throws ConfigError naming the line and key of the first problem.
sim::ScenarioConfig parse_config(std::istream& in);

/// Reads and parses a file. Throws ConfigError if it cannot be opened.
sim::ScenarioConfig load_config(const std::filesystem::path& path);

/// Serializes cfg so that parse_config reproduces it exactly.
std::string format_config(const sim::ScenarioConfig& cfg);

/// The standard scenario with every key written out and commented.
std::string config_template();

}  // namespace pss::cli
