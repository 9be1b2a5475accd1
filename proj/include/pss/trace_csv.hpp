#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "pss/simulation.hpp"

namespace pss::cli {

/// Shortest decimal text that parses back to exactly v.
std::string format_number(double v);

/// Whole-string decimal parse; nullopt on trailing junk or an empty string.
std::optional<double> parse_number(std::string_view text);

void write_trace_csv(std::ostream& out, const sim::SimulationTrace& trace);
sim::SimulationTrace read_trace_csv(std::istream& in);

/// Writes content to a sibling temporary file and renames it over path,
/// so a failed write never leaves a partial file. Throws OutputError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void save_trace_csv(const std::filesystem::path& path, const sim::SimulationTrace& trace);
/// Throws Error on a missing file or malformed content.
sim::SimulationTrace load_trace_csv(const std::filesystem::path& path);

}  // namespace pss::cli
