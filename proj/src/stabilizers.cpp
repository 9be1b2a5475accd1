#include "pss/stabilizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pss/errors.hpp"

namespace pss::stab {

std::string_view to_string(StabilizerKind kind) {
    switch (kind) {
        case StabilizerKind::nopss: return "nopss";
        case StabilizerKind::cpss: return "cpss";
        case StabilizerKind::fpss: return "fpss";
        case StabilizerKind::smcpss: return "smcpss";
        case StabilizerKind::fsmcpss: return "fsmcpss";
    }
    return "unknown";
}

StabilizerKind parse_kind(std::string_view name) {
    for (StabilizerKind k : kAllKinds) {
        if (to_string(k) == name) return k;
    }
    throw InvalidParams("unknown stabilizer kind '" + std::string(name) +
                        "' (expected nopss, cpss, fpss, smcpss or fsmcpss)");
}

// ---------------------------------------------------------------------------

void LeadLagPssConfig::validate() const {
    auto fail = [](const char* what) { throw InvalidParams(std::string("invalid CPSS config: ") + what); };
    if (!(K > 0.0)) fail("K > 0");
    if (!(T_lp > 0.0 && T_w > 0.0 && T1 > 0.0 && T2 > 0.0 && T3 > 0.0 && T4 > 0.0)) {
        fail("all time constants must be positive");
    }
    if (!(v_min < 0.0 && 0.0 < v_max)) fail("v_min < 0 < v_max");
}

namespace {

// Trapezoidal discretization of (b1 s + b0) / (a1 s + a0).
double bilinear(FirstOrderSection& sec, double b1, double b0, double a1, double a0, double x, double dt) {
    const double k = 2.0 / dt;
    const double n0 = b1 * k + b0;
    const double n1 = b0 - b1 * k;
    const double d0 = a1 * k + a0;
    const double d1 = a0 - a1 * k;
    const double y = (n0 * x + n1 * sec.x_prev - d1 * sec.y_prev) / d0;
    sec.x_prev = x;
    sec.y_prev = y;
    return y;
}

}  // namespace

double cpss_step(const LeadLagPssConfig& cfg, LeadLagPssState& st, double omega_dev, double dt) {
    if (!(dt > 0.0) || dt > 0.5 * std::min({cfg.T_lp, cfg.T2, cfg.T4})) {
        throw InvalidParams("cpss_step: dt = " + std::to_string(dt) +
                            " must be positive and at most half the fastest lag time constant");
    }
    double v = bilinear(st.low_pass, 0.0, 1.0, cfg.T_lp, 1.0, omega_dev, dt);
    v *= cfg.K;
    v = bilinear(st.washout, cfg.T_w, 0.0, cfg.T_w, 1.0, v, dt);
    v = bilinear(st.lead_lag1, cfg.T1, 1.0, cfg.T2, 1.0, v, dt);
    v = bilinear(st.lead_lag2, cfg.T3, 1.0, cfg.T4, 1.0, v, dt);
    return std::clamp(v, cfg.v_min, cfg.v_max);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> labels_of(const std::array<std::string_view, 7>& labels) {
    return {labels.begin(), labels.end()};
}

}  // namespace

fuzzy::FuzzySystem make_fpss_system() {
    const auto labels = labels_of(kSevenLabels);
    auto speed = fuzzy::seven_term_partition("speed_deviation", -1.0, 1.0, labels);
    auto accel = fuzzy::seven_term_partition("acceleration", -1.0, 1.0, labels);
    auto out = fuzzy::seven_term_partition("v_stab", -1.0, 1.0, labels);

    fuzzy::RuleBase rb{2, {}};
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            rb.rules.push_back({{i, j}, out.index_of(kFpssRuleTable[i][j])});
        }
    }
    return fuzzy::FuzzySystem({std::move(speed), std::move(accel)}, std::move(out), std::move(rb));
}

bool matches_fpss_table(const fuzzy::FuzzySystem& system) {
    if (system.inputs().size() != 2 || system.rules().rules.size() != 49) return false;
    const auto& speed = system.inputs()[0];
    const auto& accel = system.inputs()[1];
    const auto& out = system.output();
    for (const fuzzy::Rule& r : system.rules().rules) {
        const auto& row = speed.terms.at(r.antecedent[0]).label;
        const auto& col = accel.terms.at(r.antecedent[1]).label;
        const auto ri = std::find(kSevenLabels.begin(), kSevenLabels.end(), row);
        const auto ci = std::find(kSevenLabels.begin(), kSevenLabels.end(), col);
        if (ri == kSevenLabels.end() || ci == kSevenLabels.end()) return false;
        const auto expected = kFpssRuleTable[ri - kSevenLabels.begin()][ci - kSevenLabels.begin()];
        if (out.terms.at(r.consequent).label != expected) return false;
    }
    return true;
}

void FpssConfig::validate() const {
    // input gains are signed: the sign selects the polarity of each feedback path
    if (!(std::isfinite(k_w) && k_w != 0.0 && std::isfinite(k_a) && k_a != 0.0)) {
        throw InvalidParams("invalid FPSS config: k_w and k_a must be finite and nonzero");
    }
    if (!(k_out > 0.0)) throw InvalidParams("invalid FPSS config: k_out must be positive");
    if (!(accel_filter_tau > 0.0)) throw InvalidParams("invalid FPSS config: accel_filter_tau > 0");
    if (!matches_fpss_table(system)) throw InvalidParams("invalid FPSS config: rule base differs from the FPSS table");
}

double fpss_eval(const FpssConfig& cfg, double omega_dev, double accel) {
    const std::array<double, 2> in = {cfg.k_w * omega_dev, cfg.k_a * accel};
    return std::clamp(cfg.k_out * cfg.system.infer(in), -cfg.k_out, cfg.k_out);
}

// ---------------------------------------------------------------------------

fuzzy::FuzzySystem make_fsmc_system() {
    const auto labels = labels_of(kSizeLabels);
    auto size = fuzzy::seven_term_partition("surface_magnitude", 0.0, 1.0, labels);
    auto gain = fuzzy::seven_term_partition("reaching_gain", 0.0, 1.0, labels);
    fuzzy::RuleBase rb{1, {}};
    for (std::size_t i = 0; i < 7; ++i) rb.rules.push_back({{i}, gain.index_of(kFsmcRuleTable[i])});
    return fuzzy::FuzzySystem({std::move(size)}, std::move(gain), std::move(rb));
}

bool matches_fsmc_table(const fuzzy::FuzzySystem& system) {
    if (system.inputs().size() != 1 || system.rules().rules.size() != 7) return false;
    const auto& in = system.inputs()[0];
    for (const fuzzy::Rule& r : system.rules().rules) {
        const auto& label = in.terms.at(r.antecedent[0]).label;
        const auto it = std::find(kSizeLabels.begin(), kSizeLabels.end(), label);
        if (it == kSizeLabels.end()) return false;
        if (system.output().terms.at(r.consequent).label != kFsmcRuleTable[it - kSizeLabels.begin()]) {
            return false;
        }
    }
    return true;
}

void FsmcConfig::validate() const {
    if (s_max && !(*s_max > 0.0)) throw InvalidParams("invalid FSMC config: s_max > 0");
    if (!(eta_min > 0.0 && eta_max > 0.0)) throw InvalidParams("invalid FSMC config: eta_min, eta_max > 0");
    if (!(eta_min <= eta_max)) throw InvalidParams("invalid FSMC config: eta_min <= eta_max");
    if (!matches_fsmc_table(system)) throw InvalidParams("invalid FSMC config: rule base differs from the FSMC table");
}

double fsmc_eta(const FsmcConfig& cfg, double S, std::optional<double> s_max_fallback) {
    if (!cfg.s_max && !s_max_fallback) throw MissingConfig("fsmc_eta: s_max is not resolved");
    const double scale = cfg.s_max ? *cfg.s_max : *s_max_fallback;
    const std::array<double, 1> in = {std::min(std::fabs(S) / scale, 1.0)};
    return cfg.eta_min + (cfg.eta_max - cfg.eta_min) * cfg.system.infer(in);
}

// ---------------------------------------------------------------------------

void StabilizerConfigs::require(StabilizerKind kind) const {
    switch (kind) {
        case StabilizerKind::nopss: return;
        case StabilizerKind::cpss:
            if (!cpss) throw MissingConfig("missing [cpss] section");
            return;
        case StabilizerKind::fpss:
            if (!fpss) throw MissingConfig("missing [fpss] section");
            return;
        case StabilizerKind::smcpss:
            if (!smc) throw MissingConfig("missing [smc] section");
            return;
        case StabilizerKind::fsmcpss:
            if (!smc) throw MissingConfig("missing [smc] section");
            if (!fsmc) throw MissingConfig("missing [fsmc] section");
            return;
    }
}

double AccelerationEstimator::update(double omega_dev, double dt, double tau) {
    if (!primed_) {
        primed_ = true;
        prev_omega_ = omega_dev;
        return filtered_;
    }
    const double raw = (omega_dev - prev_omega_) / dt;
    prev_omega_ = omega_dev;
    filtered_ += dt / (tau + dt) * (raw - filtered_);
    return filtered_;
}

ControlOutput control_input(StabilizerKind kind, const model::GeneratorState& s,
                            const model::Equilibrium& e, const model::AlphaCoefficients& a,
                            const StabilizerConfigs& configs, ControllerMemory& memory, double dt,
                            double s_max_fallback) {
    configs.require(kind);
    const smc::SmcGains gains = configs.smc.value_or(smc::SmcGains{});

    ControlOutput out;
    out.S = smc::surface(s, e, a, gains);
    switch (kind) {
        case StabilizerKind::nopss:
            out.u = e.u_d;
            break;
        case StabilizerKind::cpss:
            out.u = e.u_d + cpss_step(*configs.cpss, memory.cpss, s.x2, dt);
            break;
        case StabilizerKind::fpss: {
            const double accel = memory.accel.update(s.x2, dt, configs.fpss->accel_filter_tau);
            out.u = e.u_d + fpss_eval(*configs.fpss, s.x2, accel);
            break;
        }
        case StabilizerKind::smcpss: {
            const smc::SmcOutput r = smc::smc_control(s, e, a, gains);
            out.u = r.u;
            out.gain_clamped = r.gain_clamped;
            break;
        }
        case StabilizerKind::fsmcpss: {
            out.eta = fsmc_eta(*configs.fsmc, out.S, s_max_fallback);
            const smc::SmcOutput r = smc::smc_control(s, e, a, gains, out.eta);
            out.u = r.u;
            out.gain_clamped = r.gain_clamped;
            break;
        }
    }
    out.v_stab = out.u - e.u_d;
    return out;
}

}  // namespace pss::stab
