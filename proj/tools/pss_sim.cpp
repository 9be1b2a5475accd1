// Batch front-end: single runs, five-way comparisons and rule-base dumps.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pss/commands.hpp"
#include "pss/errors.hpp"
#include "pss/stabilizers.hpp"

int main(int argc, char** argv) {
    using namespace pss;
    CLI::App app{"Power system stabilizer simulator"};
    app.require_subcommand(1);

    cli::RunArgs run;
    std::string controller;
    auto* run_cmd = app.add_subcommand("run", "simulate one scenario and write its trace CSV");
    run_cmd->add_option("config", run.config, "scenario file")->required();
    run_cmd->add_option("-c,--controller", controller, "override the scenario's controller")
        ->check(CLI::IsMember({"nopss", "cpss", "fpss", "smcpss", "fsmcpss"}));
    run_cmd->add_option("-o,--output", run.output, "trace CSV path (_g1/_g2 added for two generators)");

    cli::CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand("compare", "run every controller and write traces plus a report");
    cmp_cmd->add_option("config", cmp.config, "scenario file")->required();
    cmp_cmd->add_option("-o,--out-dir", cmp.out_dir, "output directory");
    cmp_cmd->add_flag("--assert-ordering", cmp.assert_ordering,
                      "exit 5 when the expected settling-time ordering does not hold");

    std::string which;
    auto* rules_cmd = app.add_subcommand("dump-rules", "print a fuzzy rule base");
    rules_cmd->add_option("which", which, "fpss or fsmc")->required()->check(CLI::IsMember({"fpss", "fsmc"}));

    auto* tmpl_cmd = app.add_subcommand("dump-config-template", "print a commented scenario file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsage;
    }

    if (*run_cmd) {
        if (!controller.empty()) run.controller = stab::parse_kind(controller);
        return cli::run_command(run, std::cout, std::cerr);
    }
    if (*cmp_cmd) return cli::compare_command(cmp, std::cout, std::cerr);
    if (*rules_cmd) return cli::dump_rules_command(which, std::cout, std::cerr);
    if (*tmpl_cmd) return cli::dump_config_template_command(std::cout);
    return cli::kExitUsage;
}
