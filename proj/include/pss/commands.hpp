#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "pss/metrics.hpp"
#include "pss/simulation.hpp"

namespace pss::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitSimulation = 3,
    kExitOutput = 4,
    kExitOrdering = 5,
};

struct RunArgs {
    std::filesystem::path config;
    std::optional<stab::StabilizerKind> controller;  // overrides [scenario] controller
    std::filesystem::path output = "trace.csv";
};

struct CompareArgs {
    std::filesystem::path config;
    std::filesystem::path out_dir = ".";
    bool assert_ordering = false;
};

/// Output file for generator `index` (0-based): the path itself for a single
/// generator, otherwise "<stem>_g<index+1><ext>".
std::filesystem::path generator_output_path(const std::filesystem::path& base, std::size_t index,
                                            std::size_t count);

/// Aligned text table with ranking, one block per generator.
std::string format_report_text(const std::vector<metrics::MetricsReport>& reports);
/// One row per controller and generator.
std::string format_report_csv(const std::vector<metrics::MetricsReport>& reports);

std::string format_rules(std::string_view which);

int run_command(const RunArgs& args, std::ostream& out, std::ostream& err);
int compare_command(const CompareArgs& args, std::ostream& out, std::ostream& err);
/// which is "fpss" or "fsmc"; anything else is a usage error.
int dump_rules_command(std::string_view which, std::ostream& out, std::ostream& err);
int dump_config_template_command(std::ostream& out);

}  // namespace pss::cli
