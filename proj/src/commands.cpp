#include "pss/commands.hpp"

#include <cstdio>
#include <future>
#include <map>
#include <sstream>
#include <vector>

#include "pss/config.hpp"
#include "pss/errors.hpp"
#include "pss/stabilizers.hpp"
#include "pss/trace_csv.hpp"

namespace pss::cli {

std::filesystem::path generator_output_path(const std::filesystem::path& base, std::size_t index,
                                            std::size_t count) {
    if (count <= 1) return base;
    std::filesystem::path p = base.parent_path() / base.stem();
    p += "_g" + std::to_string(index + 1);
    p += base.extension();
    return p;
}

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string opt_text(const std::optional<double>& v, const char* f, const char* none) {
    return v ? fmt(f, *v) : std::string(none);
}

// Maps library errors onto exit codes; everything else propagates.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const MissingConfig& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidParams& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NonfiniteState& e) {
        err << "simulation failed: " << e.what() << '\n';
        return kExitSimulation;
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << '\n';
        return kExitOutput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "output error: " << e.what() << '\n';
        return kExitOutput;
    } catch (const Error& e) {
        err << "simulation failed: " << e.what() << '\n';
        return kExitSimulation;
    }
}

metrics::ReportOptions report_options(const sim::ScenarioConfig& cfg) {
    metrics::ReportOptions o;
    o.clearance_time = sim::clearance_time(cfg.disturbances);
    return o;
}

}  // namespace

std::string format_report_text(const std::vector<metrics::MetricsReport>& reports) {
    std::ostringstream os;
    for (std::size_t g = 0; g < reports.size(); ++g) {
        if (g) os << '\n';
        if (reports.size() > 1) os << "generator " << g + 1 << '\n';
        char line[256];
        std::snprintf(line, sizeof line, "%-4s  %-8s  %10s  %9s  %11s  %11s  %11s  %9s\n", "rank",
                      "kind", "settling_s", "overshoot", "ise", "itae", "chattering", "max_abs_S");
        os << line;
        std::vector<const metrics::MetricsRow*> by_rank;
        for (const auto& r : reports[g].rows) by_rank.push_back(&r);
        std::sort(by_rank.begin(), by_rank.end(), [](auto* a, auto* b) { return a->rank < b->rank; });
        for (const auto* r : by_rank) {
            std::snprintf(line, sizeof line, "%-4d  %-8s  %10s  %9s  %11.4e  %11.4e  %11.4e  %9.4f\n",
                          r->rank, std::string(stab::to_string(r->kind)).c_str(),
                          opt_text(r->settling_time, "%.4f", "not-settled").c_str(),
                          opt_text(r->overshoot, "%.4f", "n/a").c_str(), r->ise, r->itae, r->chattering,
                          r->max_abs_S);
            os << line;
        }
        if (reports[g].violations.empty()) {
            os << "expected ordering: holds\n";
        } else {
            for (const auto& v : reports[g].violations) os << "violation: " << v << '\n';
        }
    }
    return os.str();
}

std::string format_report_csv(const std::vector<metrics::MetricsReport>& reports) {
    std::ostringstream os;
    os << "generator,kind,rank,settling_time,overshoot,ise,itae,chattering,reached,max_abs_S\n";
    auto num_or_empty = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (std::size_t g = 0; g < reports.size(); ++g) {
        for (const auto& r : reports[g].rows) {
            os << g + 1 << ',' << stab::to_string(r.kind) << ',' << r.rank << ','
               << num_or_empty(r.settling_time) << ',' << num_or_empty(r.overshoot) << ','
               << format_number(r.ise) << ',' << format_number(r.itae) << ',' << format_number(r.chattering)
               << ',' << (r.reached ? 1 : 0) << ',' << format_number(r.max_abs_S) << '\n';
        }
    }
    return os.str();
}

std::string format_rules(std::string_view which) {
    std::ostringstream os;
    if (which == "fpss") {
        const auto sys = stab::make_fpss_system();
        const auto& speed = sys.inputs()[0];
        const auto& accel = sys.inputs()[1];
        os << "speed\\accel";
        for (const auto& t : accel.terms) os << "  " << t.label;
        os << '\n';
        // rebuild the grid from the rule base itself, not from the constant table
        std::vector<std::vector<std::string>> grid(speed.terms.size(),
                                                   std::vector<std::string>(accel.terms.size(), "--"));
        for (const auto& r : sys.rules().rules) {
            grid[r.antecedent[0]][r.antecedent[1]] = sys.output().terms[r.consequent].label;
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            char head[16];
            std::snprintf(head, sizeof head, "%-11s", speed.terms[i].label.c_str());
            os << head;
            for (std::size_t j = 0; j < grid[i].size(); ++j) {
                char cell[16];
                std::snprintf(cell, sizeof cell, "  %-2s", grid[i][j].c_str());
                os << cell;
            }
            os << '\n';
        }
    } else if (which == "fsmc") {
        const auto sys = stab::make_fsmc_system();
        for (const auto& r : sys.rules().rules) {
            os << sys.inputs()[0].terms[r.antecedent[0]].label << " → "
               << sys.output().terms[r.consequent].label << '\n';
        }
    } else {
        throw InvalidParams("unknown rule base '" + std::string(which) + "' (expected fpss or fsmc)");
    }
    return os.str();
}

int run_command(const RunArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        sim::ScenarioConfig cfg = load_config(args.config);
        if (args.controller) cfg.controller = *args.controller;
        cfg.validate();

        const std::vector<sim::SimulationTrace> traces = sim::simulate(cfg);
        for (std::size_t g = 0; g < traces.size(); ++g) {
            save_trace_csv(generator_output_path(args.output, g, traces.size()), traces[g]);
        }
        for (std::size_t g = 0; g < traces.size(); ++g) {
            const metrics::MetricsRow r = metrics::row_for(cfg.controller, traces[g]);
            out << "generator " << g + 1 << " (" << stab::to_string(cfg.controller) << "): "
                << "settling_time=" << opt_text(r.settling_time, "%.4f", "not-settled")
                << " overshoot=" << opt_text(r.overshoot, "%.4f", "n/a") << " ise=" << fmt("%.4e", r.ise)
                << " itae=" << fmt("%.4e", r.itae) << " chattering=" << fmt("%.4e", r.chattering)
                << " max_abs_S=" << fmt("%.4f", r.max_abs_S) << '\n';
        }
        return static_cast<int>(kExitOk);
    });
}

int compare_command(const CompareArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const sim::ScenarioConfig base = load_config(args.config);
        for (stab::StabilizerKind k : stab::kAllKinds) {
            sim::ScenarioConfig cfg = base;
            cfg.controller = k;
            cfg.validate();
        }

        // independent runs; each task owns its config copy and controller memory
        std::vector<std::future<std::vector<sim::SimulationTrace>>> jobs;
        for (stab::StabilizerKind k : stab::kAllKinds) {
            jobs.push_back(std::async(std::launch::async, [base, k] {
                sim::ScenarioConfig cfg = base;
                cfg.controller = k;
                return sim::simulate(cfg);
            }));
        }
        std::map<stab::StabilizerKind, std::vector<sim::SimulationTrace>> runs;
        for (std::size_t i = 0; i < jobs.size(); ++i) runs[stab::kAllKinds[i]] = jobs[i].get();

        const std::size_t gens = base.generators.size();
        std::vector<metrics::MetricsReport> reports;
        for (std::size_t g = 0; g < gens; ++g) {
            std::map<stab::StabilizerKind, sim::SimulationTrace> per_kind;
            for (const auto& [k, traces] : runs) per_kind.emplace(k, traces[g]);
            reports.push_back(metrics::compare_report(per_kind, report_options(base)));
        }

        std::filesystem::create_directories(args.out_dir);
        for (const auto& [k, traces] : runs) {
            const auto base_path = args.out_dir / (std::string(stab::to_string(k)) + ".csv");
            for (std::size_t g = 0; g < gens; ++g) {
                save_trace_csv(generator_output_path(base_path, g, gens), traces[g]);
            }
        }
        const std::string text = format_report_text(reports);
        write_file_atomic(args.out_dir / "report.csv", format_report_csv(reports));
        write_file_atomic(args.out_dir / "report.txt", text);
        out << text;

        if (args.assert_ordering) {
            for (const auto& r : reports) {
                if (!r.violations.empty()) {
                    err << "expected ordering does not hold\n";
                    return static_cast<int>(kExitOrdering);
                }
            }
        }
        return static_cast<int>(kExitOk);
    });
}

int dump_rules_command(std::string_view which, std::ostream& out, std::ostream& err) {
    try {
        out << format_rules(which);
        return kExitOk;
    } catch (const InvalidParams& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }
}

int dump_config_template_command(std::ostream& out) {
    out << config_template();
    return kExitOk;
}

}  // namespace pss::cli
