#include "pss/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "pss/errors.hpp"
#include "pss/smc.hpp"

namespace pss::sim {

std::string_view to_string(DisturbanceKind kind) {
    switch (kind) {
        case DisturbanceKind::mech_power_step: return "mech-power-step";
        case DisturbanceKind::vs_dip: return "vs-dip";
        case DisturbanceKind::initial_angle_offset: return "initial-angle-offset";
    }
    return "unknown";
}

DisturbanceKind parse_disturbance_kind(std::string_view name) {
    for (auto k : {DisturbanceKind::mech_power_step, DisturbanceKind::vs_dip,
                   DisturbanceKind::initial_angle_offset}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidParams("unknown disturbance kind '" + std::string(name) +
                        "' (expected mech-power-step, vs-dip or initial-angle-offset)");
}

void Disturbance::validate() const {
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(magnitude)) {
        throw InvalidParams("disturbance values must be finite");
    }
    if (t_start < 0.0) throw InvalidParams("disturbance t_start must be >= 0");
    if (kind == DisturbanceKind::vs_dip) {
        if (!(t_end > t_start)) throw InvalidParams("vs-dip needs t_end > t_start");
        if (!(magnitude > 0.0)) throw InvalidParams("vs-dip V_fault must be > 0");
    }
}

model::Equilibrium EquilibriumSpec::solve(const model::AlphaCoefficients& a) const {
    return by == By::angle ? model::equilibrium_from_angle(value, a)
                           : model::equilibrium_from_input(value, a);
}

std::size_t ScenarioConfig::steps() const {
    return static_cast<std::size_t>(std::llround(t_end / dt));
}

void ScenarioConfig::validate() const {
    if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidParams("dt must be > 0");
    if (!(std::isfinite(t_end) && t_end > 0.0)) throw InvalidParams("t_end must be > 0");
    if (steps() == 0) throw InvalidParams("t_end must span at least one step of dt");
    if (control_period < 1) throw InvalidParams("control_period must be >= 1");
    if (generators.empty() || generators.size() > 2) {
        throw InvalidParams("a scenario has one or two generators");
    }
    for (const auto& g : generators) g.params.validate();
    for (const auto& d : disturbances) d.validate();

    configs.require(controller);
    if (configs.cpss) configs.cpss->validate();
    if (configs.fpss) configs.fpss->validate();
    if (configs.smc) configs.smc->validate();
    if (configs.fsmc) configs.fsmc->validate();

    if (controller == stab::StabilizerKind::cpss) {
        const auto& c = *configs.cpss;
        const double tc = dt * control_period;
        if (tc > 0.5 * std::min({c.T_lp, c.T2, c.T4})) {
            throw InvalidParams("control period dt * control_period exceeds half the fastest CPSS lag");
        }
    }
}

void SimulationTrace::reserve(std::size_t n) {
    for (auto* col : {&t, &x1, &x2, &x3, &u, &v_stab, &S, &eta, &P_e, &y}) col->reserve(n);
}

model::GeneratorParams effective_params(const model::GeneratorParams& p,
                                        std::span<const Disturbance> disturbances, double t) {
    model::GeneratorParams out = p;
    for (const Disturbance& d : disturbances) {
        switch (d.kind) {
            case DisturbanceKind::mech_power_step:
                if (t >= d.t_start) out.P_m += d.magnitude;
                break;
            case DisturbanceKind::vs_dip:
                if (t >= d.t_start && t < d.t_end) out.V_s = d.magnitude;
                break;
            case DisturbanceKind::initial_angle_offset:
                break;
        }
    }
    return out;
}

model::AlphaCoefficients alphas_for_time(const model::GeneratorParams& p,
                                         std::span<const Disturbance> disturbances, double t) {
    return model::compute_alphas(effective_params(p, disturbances, t));
}

std::optional<double> clearance_time(std::span<const Disturbance> disturbances) {
    std::optional<double> out;
    for (const Disturbance& d : disturbances) {
        const double t = d.kind == DisturbanceKind::vs_dip ? d.t_end : d.t_start;
        out = out ? std::max(*out, t) : t;
    }
    return out;
}

namespace {

SimulationTrace simulate_one(const ScenarioConfig& cfg, const GeneratorSetup& gen) {
    const model::AlphaCoefficients nominal = model::compute_alphas(gen.params);
    const model::Equilibrium eq = gen.equilibrium.solve(nominal);
    const smc::SmcGains gains = cfg.configs.smc.value_or(smc::SmcGains{});

    const std::size_t n = cfg.steps();
    const double dt = cfg.dt;
    const auto period = static_cast<std::size_t>(cfg.control_period);

    std::vector<std::pair<std::size_t, double>> kicks;
    for (const Disturbance& d : cfg.disturbances) {
        if (d.kind == DisturbanceKind::initial_angle_offset) {
            kicks.emplace_back(static_cast<std::size_t>(std::llround(d.t_start / dt)), d.magnitude);
        }
    }

    model::GeneratorState state = eq.state();
    for (const auto& [step, delta] : kicks) {
        if (step == 0) state.x1 += delta;
    }
    double s_max_fallback = std::fabs(smc::surface(state, eq, nominal, gains));
    if (!(s_max_fallback > 0.0)) s_max_fallback = 1.0;

    SimulationTrace tr;
    tr.reserve(n + 1);
    stab::ControllerMemory memory;
    stab::ControlOutput ctrl;

    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * dt;
        // disturbance activity over [t, t + dt) is probed at the step midpoint
        const double probe = t + 0.5 * dt;
        if (i > 0) {
            for (const auto& [step, delta] : kicks) {
                if (step == i) state.x1 += delta;
            }
        }
        if (i % period == 0) {
            ctrl = stab::control_input(cfg.controller, state, eq, nominal, cfg.configs, memory,
                                       dt * static_cast<double>(period), s_max_fallback);
        }
        const model::GeneratorParams active = effective_params(gen.params, cfg.disturbances, probe);

        tr.t.push_back(t);
        tr.x1.push_back(state.x1);
        tr.x2.push_back(state.x2);
        tr.x3.push_back(state.x3);
        tr.u.push_back(ctrl.u);
        tr.v_stab.push_back(ctrl.v_stab);
        tr.S.push_back(smc::surface(state, eq, nominal, gains));
        tr.eta.push_back(ctrl.eta);
        tr.P_e.push_back(model::electrical_power(state, active));
        tr.y.push_back(state.x1 - eq.x1d);

        if (i == n) break;
        const model::AlphaCoefficients a = model::compute_alphas(active);
        const double u = ctrl.u;
        state = rk4_step([&](const model::GeneratorState& x) { return model::dynamics(x, u, a); },
                         state, dt, t);
    }
    return tr;
}

}  // namespace

std::vector<SimulationTrace> simulate(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<SimulationTrace> out;
    out.reserve(cfg.generators.size());
    for (const GeneratorSetup& g : cfg.generators) out.push_back(simulate_one(cfg, g));
    return out;
}

ScenarioConfig standard_scenario() {
    ScenarioConfig cfg;
    cfg.t_end = 10.0;
    cfg.dt = 1e-4;
    cfg.control_period = 1;
    cfg.generators = {GeneratorSetup{}};
    cfg.disturbances = {
        Disturbance{DisturbanceKind::initial_angle_offset, 0.0, 0.0, 0.1},
        Disturbance{DisturbanceKind::vs_dip, 1.0, 1.1, 0.5},
    };
    cfg.controller = stab::StabilizerKind::fsmcpss;
    cfg.configs.cpss = stab::LeadLagPssConfig{};
    cfg.configs.fpss = stab::FpssConfig{};
    cfg.configs.smc = smc::SmcGains{};
    cfg.configs.fsmc = stab::FsmcConfig{};
    return cfg;
}

}  // namespace pss::sim
