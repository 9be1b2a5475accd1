#include "pss/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "pss/errors.hpp"
#include "pss/trace_csv.hpp"

namespace pss::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    int line = 0;
    std::string key;
    std::string value;
};

struct Section {
    int line = 0;
    std::string name;
    std::vector<Entry> entries;
};

double number(const Entry& e) {
    const auto v = parse_number(e.value);
    if (!v || !std::isfinite(*v)) {
        throw ConfigError(e.line, "key '" + e.key + "': expected a finite number, got '" + e.value + "'");
    }
    return *v;
}

// Binds each key of a section to a handler; unknown or repeated keys are errors.
class KeyTable {
public:
    explicit KeyTable(const Section& sec) : sec_(sec) {}

    KeyTable& num(const std::string& key, double& target) {
        handlers_[key] = [&target](const Entry& e) { target = number(e); };
        return *this;
    }
    KeyTable& custom(const std::string& key, std::function<void(const Entry&)> fn) {
        handlers_[key] = std::move(fn);
        return *this;
    }

    void apply() const {
        std::set<std::string> seen;
        for (const Entry& e : sec_.entries) {
            auto it = handlers_.find(e.key);
            if (it == handlers_.end()) {
                throw ConfigError(e.line, "unknown key '" + e.key + "' in [" + sec_.name + "]");
            }
            if (!seen.insert(e.key).second) {
                throw ConfigError(e.line, "key '" + e.key + "' repeated in [" + sec_.name + "]");
            }
            it->second(e);
        }
    }

private:
    const Section& sec_;
    std::map<std::string, std::function<void(const Entry&)>> handlers_;
};

// Runs a section's own validation and pins any failure to the section header.
template <typename Fn>
void checked(const Section& sec, Fn&& fn) {
    try {
        fn();
    } catch (const InvalidParams& e) {
        throw ConfigError(sec.line, "[" + sec.name + "]: " + e.what());
    }
}

std::vector<Section> split_sections(std::istream& in) {
    std::vector<Section> out;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
            out.push_back(Section{line_no, std::string(trim(line.substr(1, line.size() - 2))), {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        if (out.empty()) throw ConfigError(line_no, "key outside of any section");
        Entry e{line_no, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
        if (e.key.empty()) throw ConfigError(line_no, "empty key");
        if (e.value.empty()) throw ConfigError(line_no, "key '" + e.key + "' has no value");
        out.back().entries.push_back(std::move(e));
    }
    return out;
}

void parse_scenario(const Section& sec, sim::ScenarioConfig& cfg) {
    KeyTable(sec)
        .custom("t_end", [&](const Entry& e) {
            cfg.t_end = number(e);
            if (!(cfg.t_end > 0.0)) throw ConfigError(e.line, "key 't_end' must be > 0");
        })
        .custom("dt", [&](const Entry& e) {
            cfg.dt = number(e);
            if (!(cfg.dt > 0.0)) throw ConfigError(e.line, "key 'dt' must be > 0");
        })
        .custom("control_period", [&](const Entry& e) {
            const double v = number(e);
            if (!(v >= 1.0 && v == std::floor(v) && v <= 1e9)) {
                throw ConfigError(e.line, "key 'control_period' must be an integer >= 1");
            }
            cfg.control_period = static_cast<int>(v);
        })
        .custom("controller", [&](const Entry& e) {
            try {
                cfg.controller = stab::parse_kind(e.value);
            } catch (const InvalidParams& ex) {
                throw ConfigError(e.line, "key 'controller': " + std::string(ex.what()));
            }
        })
        .apply();
}

void parse_generator(const Section& sec, sim::GeneratorSetup& g) {
    auto& p = g.params;
    bool have_angle = false;
    bool have_input = false;
    KeyTable(sec)
        .num("w0", p.w0)
        .num("H", p.H)
        .num("K_D", p.K_D)
        .num("P_m", p.P_m)
        .num("X_d", p.X_d)
        .num("X_dp", p.X_dp)
        .num("T_dop", p.T_dop)
        .num("k_c", p.k_c)
        .num("V_s", p.V_s)
        .custom("x1d", [&](const Entry& e) {
            if (have_input) throw ConfigError(e.line, "key 'x1d' conflicts with 'u_d'");
            have_angle = true;
            g.equilibrium = {sim::EquilibriumSpec::By::angle, number(e)};
        })
        .custom("u_d", [&](const Entry& e) {
            if (have_angle) throw ConfigError(e.line, "key 'u_d' conflicts with 'x1d'");
            have_input = true;
            g.equilibrium = {sim::EquilibriumSpec::By::input, number(e)};
        })
        .apply();
    checked(sec, [&] { p.validate(); });
}

void parse_disturbance(const Section& sec, sim::Disturbance& d) {
    bool have_kind = false;
    KeyTable(sec)
        .custom("kind", [&](const Entry& e) {
            try {
                d.kind = sim::parse_disturbance_kind(e.value);
            } catch (const InvalidParams& ex) {
                throw ConfigError(e.line, "key 'kind': " + std::string(ex.what()));
            }
            have_kind = true;
        })
        .num("t_start", d.t_start)
        .num("t_end", d.t_end)
        .num("magnitude", d.magnitude)
        .apply();
    if (!have_kind) throw ConfigError(sec.line, "[disturbance] needs key 'kind'");
    checked(sec, [&] { d.validate(); });
}

void parse_cpss(const Section& sec, stab::LeadLagPssConfig& c) {
    KeyTable(sec)
        .num("K", c.K)
        .num("T_lp", c.T_lp)
        .num("T_w", c.T_w)
        .num("T1", c.T1)
        .num("T2", c.T2)
        .num("T3", c.T3)
        .num("T4", c.T4)
        .num("v_min", c.v_min)
        .num("v_max", c.v_max)
        .apply();
    checked(sec, [&] { c.validate(); });
}

void parse_fpss(const Section& sec, stab::FpssConfig& c) {
    KeyTable(sec)
        .num("k_w", c.k_w)
        .num("k_a", c.k_a)
        .num("k_out", c.k_out)
        .num("accel_filter_tau", c.accel_filter_tau)
        .apply();
    checked(sec, [&] { c.validate(); });
}

void parse_smc(const Section& sec, smc::SmcGains& g) {
    KeyTable(sec)
        .num("rho1", g.rho1)
        .num("rho2", g.rho2)
        .num("eta", g.eta)
        .num("phi", g.phi)
        .num("eps_sin", g.eps_sin)
        .num("u_max", g.u_max)
        .apply();
    checked(sec, [&] { g.validate(); });
}

void parse_fsmc(const Section& sec, stab::FsmcConfig& c) {
    KeyTable(sec)
        .custom("s_max", [&](const Entry& e) {
            if (e.value == "auto") {
                c.s_max.reset();
            } else {
                c.s_max = number(e);
            }
        })
        .num("eta_min", c.eta_min)
        .num("eta_max", c.eta_max)
        .apply();
    checked(sec, [&] { c.validate(); });
}

}  // namespace

sim::ScenarioConfig parse_config(std::istream& in) {
    const std::vector<Section> sections = split_sections(in);

    sim::ScenarioConfig cfg;
    cfg.generators.clear();
    std::set<std::string> singletons;
    bool have_scenario = false;

    for (const Section& sec : sections) {
        const std::string& n = sec.name;
        if (n != "generator" && n != "disturbance" && !singletons.insert(n).second) {
            throw ConfigError(sec.line, "section [" + n + "] appears twice");
        }
        if (n == "scenario") {
            have_scenario = true;
            parse_scenario(sec, cfg);
        } else if (n == "generator") {
            if (cfg.generators.size() == 2) throw ConfigError(sec.line, "at most two [generator] sections");
            parse_generator(sec, cfg.generators.emplace_back());
        } else if (n == "disturbance") {
            parse_disturbance(sec, cfg.disturbances.emplace_back());
        } else if (n == "cpss") {
            parse_cpss(sec, cfg.configs.cpss.emplace());
        } else if (n == "fpss") {
            parse_fpss(sec, cfg.configs.fpss.emplace());
        } else if (n == "smc") {
            parse_smc(sec, cfg.configs.smc.emplace());
        } else if (n == "fsmc") {
            parse_fsmc(sec, cfg.configs.fsmc.emplace());
        } else {
            throw ConfigError(sec.line, "unknown section [" + n + "]");
        }
    }
    if (!have_scenario) throw ConfigError(0, "missing [scenario] section");
    if (cfg.generators.empty()) throw ConfigError(0, "missing [generator] section");
    return cfg;
}

sim::ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(0, "cannot open config file " + path.string());
    return parse_config(f);
}

namespace {

void kv(std::ostream& os, std::string_view key, double v, std::string_view note = {}) {
    os << key << " = " << format_number(v);
    if (!note.empty()) os << "  # " << note;
    os << '\n';
}

void write_config(std::ostream& os, const sim::ScenarioConfig& cfg, bool notes) {
    auto n = [notes](std::string_view s) { return notes ? s : std::string_view{}; };

    os << "[scenario]\n";
    kv(os, "t_end", cfg.t_end, n("s"));
    kv(os, "dt", cfg.dt, n("s, integration step"));
    kv(os, "control_period", cfg.control_period, n("integration steps per controller update"));
    os << "controller = " << stab::to_string(cfg.controller);
    if (notes) os << "  # nopss | cpss | fpss | smcpss | fsmcpss";
    os << '\n';

    for (const auto& g : cfg.generators) {
        const auto& p = g.params;
        os << "\n[generator]\n";
        kv(os, "w0", p.w0, n("rad/s"));
        kv(os, "H", p.H, n("s"));
        kv(os, "K_D", p.K_D, n("pu"));
        kv(os, "P_m", p.P_m, n("pu"));
        kv(os, "X_d", p.X_d, n("pu, machine plus network"));
        kv(os, "X_dp", p.X_dp, n("pu, machine plus network"));
        kv(os, "T_dop", p.T_dop, n("s"));
        kv(os, "k_c", p.k_c);
        kv(os, "V_s", p.V_s, n("pu"));
        if (g.equilibrium.by == sim::EquilibriumSpec::By::angle) {
            kv(os, "x1d", g.equilibrium.value, n("rad; or give u_d instead"));
        } else {
            kv(os, "u_d", g.equilibrium.value, n("holding input; or give x1d instead"));
        }
    }

    for (const auto& d : cfg.disturbances) {
        os << "\n[disturbance]\n";
        os << "kind = " << sim::to_string(d.kind);
        if (notes) os << "  # mech-power-step | vs-dip | initial-angle-offset";
        os << '\n';
        kv(os, "t_start", d.t_start, n("s"));
        kv(os, "t_end", d.t_end, n("s, vs-dip only"));
        kv(os, "magnitude", d.magnitude, n("dP_m pu | V_fault pu | angle kick rad"));
    }

    if (const auto& c = cfg.configs.cpss) {
        os << "\n[cpss]\n";
        kv(os, "K", c->K);
        kv(os, "T_lp", c->T_lp, n("s"));
        kv(os, "T_w", c->T_w, n("s"));
        kv(os, "T1", c->T1, n("s"));
        kv(os, "T2", c->T2, n("s"));
        kv(os, "T3", c->T3, n("s"));
        kv(os, "T4", c->T4, n("s"));
        kv(os, "v_min", c->v_min, n("pu"));
        kv(os, "v_max", c->v_max, n("pu"));
    }
    if (const auto& c = cfg.configs.fpss) {
        os << "\n[fpss]\n";
        kv(os, "k_w", c->k_w, n("s/rad, signed"));
        kv(os, "k_a", c->k_a, n("s^2/rad, signed"));
        kv(os, "k_out", c->k_out, n("pu"));
        kv(os, "accel_filter_tau", c->accel_filter_tau, n("s"));
    }
    if (const auto& g = cfg.configs.smc) {
        os << "\n[smc]\n";
        kv(os, "rho1", g->rho1, n("1/s"));
        kv(os, "rho2", g->rho2, n("1/s^2"));
        kv(os, "eta", g->eta, n("reaching gain"));
        kv(os, "phi", g->phi, n("boundary layer, 0 = pure sign"));
        kv(os, "eps_sin", g->eps_sin, n("rad"));
        kv(os, "u_max", g->u_max, n("bound on |u - u_d|"));
    }
    if (const auto& c = cfg.configs.fsmc) {
        os << "\n[fsmc]\n";
        if (c->s_max) {
            kv(os, "s_max", *c->s_max, n("or auto for |S(0)|"));
        } else {
            os << "s_max = auto\n";
        }
        kv(os, "eta_min", c->eta_min);
        kv(os, "eta_max", c->eta_max);
    }
}

}  // namespace

std::string format_config(const sim::ScenarioConfig& cfg) {
    std::ostringstream os;
    write_config(os, cfg, false);
    return os.str();
}

std::string config_template() {
    std::ostringstream os;
    os << "# pss_sim scenario\n"
          "# Sections without a matching controller are optional; [generator] may repeat\n"
          "# once for a second machine and [disturbance] any number of times.\n\n";
    write_config(os, sim::standard_scenario(), true);
    return os.str();
}

}  // namespace pss::cli
