#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "pss/fuzzy.hpp"
#include "pss/gen_model.hpp"
#include "pss/smc.hpp"

namespace pss::stab {

enum class StabilizerKind { nopss, cpss, fpss, smcpss, fsmcpss };

inline constexpr std::array<StabilizerKind, 5> kAllKinds = {
    StabilizerKind::nopss, StabilizerKind::cpss, StabilizerKind::fpss, StabilizerKind::smcpss,
    StabilizerKind::fsmcpss};

std::string_view to_string(StabilizerKind kind);
/// Throws InvalidParams on an unknown name.
StabilizerKind parse_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Conventional lead-lag PSS

/// Sensor low-pass, gain, washout, two lead-lag stages and an output limiter.
struct LeadLagPssConfig {
    double K = 0.3;
    double T_lp = 0.03;
    double T_w = 2.0;
    double T1 = 0.05;
    double T2 = 0.02;
    double T3 = 0.05;
    double T4 = 0.02;
    double v_min = -0.15;
    double v_max = 0.15;

    void validate() const;
};

/// One bilinear-discretized first-order section: y = (b0 x + b1 x_prev - a1 y_prev).
struct FirstOrderSection {
    double x_prev = 0.0;
    double y_prev = 0.0;
};

struct LeadLagPssState {
    FirstOrderSection low_pass;
    FirstOrderSection washout;
    FirstOrderSection lead_lag1;
    FirstOrderSection lead_lag2;

    void reset() { *this = LeadLagPssState{}; }
};

/// Advances the filter chain by dt and returns the limited stabilizing signal.
/// Throws InvalidParams when dt is not positive or exceeds half the fastest
/// filter pole time constant.
double cpss_step(const LeadLagPssConfig& cfg, LeadLagPssState& st, double omega_dev, double dt);

// ---------------------------------------------------------------------------
// Fuzzy PSS

inline constexpr std::array<std::string_view, 7> kSevenLabels = {"NB", "NM", "NS", "ZE", "PS", "PM", "PB"};

/// Consequent labels indexed [speed deviation term][acceleration term].
inline constexpr std::array<std::array<std::string_view, 7>, 7> kFpssRuleTable = {{
    {"NB", "NB", "NB", "NB", "NM", "NM", "NS"},
    {"NB", "NM", "NM", "NM", "NS", "NS", "ZE"},
    {"NM", "NM", "NS", "NS", "ZE", "ZE", "PS"},
    {"NM", "NS", "NS", "ZE", "PS", "PS", "PM"},
    {"NS", "ZE", "ZE", "PS", "PS", "PM", "PM"},
    {"ZE", "PS", "PS", "PM", "PM", "PM", "PB"},
    {"PS", "PM", "PM", "PB", "PB", "PB", "PB"},
}};

fuzzy::FuzzySystem make_fpss_system();
/// True when the rule base is the 49-rule speed/acceleration table above.
bool matches_fpss_table(const fuzzy::FuzzySystem& system);

struct FpssConfig {
    double k_w = -4.0;    // s/rad, signed
    double k_a = 0.5;     // s^2/rad, signed
    double k_out = 0.15;  // pu
    double accel_filter_tau = 0.02;  // s, low-pass on the differenced speed
    fuzzy::FuzzySystem system = make_fpss_system();

    void validate() const;
};

double fpss_eval(const FpssConfig& cfg, double omega_dev, double accel);

// ---------------------------------------------------------------------------
// Fuzzy tuning of the sliding-mode reaching gain

inline constexpr std::array<std::string_view, 7> kSizeLabels = {"VVS", "VS", "S", "M", "L", "VL", "VVL"};

/// Consequent per |S| term, in rule order. The printed table gives "VSS" as
/// the second consequent; it is read as "VS".
inline constexpr std::array<std::string_view, 7> kFsmcRuleTable = {"VVS", "VS", "S", "M", "L", "VL", "VVL"};

fuzzy::FuzzySystem make_fsmc_system();
bool matches_fsmc_table(const fuzzy::FuzzySystem& system);

struct FsmcConfig {
    std::optional<double> s_max = 0.1;  // unset: |S(0)| of the run it is used in
    double eta_min = 20.0;
    double eta_max = 60.0;
    fuzzy::FuzzySystem system = make_fsmc_system();

    void validate() const;
};

/// Reaching gain for surface value S; depends on |S| only. `s_max_fallback`
/// is used when cfg.s_max is unset; with neither, throws MissingConfig.
double fsmc_eta(const FsmcConfig& cfg, double S, std::optional<double> s_max_fallback = std::nullopt);

// ---------------------------------------------------------------------------
// Dispatch

struct StabilizerConfigs {
    std::optional<LeadLagPssConfig> cpss;
    std::optional<FpssConfig> fpss;
    std::optional<smc::SmcGains> smc;
    std::optional<FsmcConfig> fsmc;

    /// Throws MissingConfig naming the absent section required by kind.
    void require(StabilizerKind kind) const;
};

/// Backward difference of speed deviation through a first-order low-pass.
class AccelerationEstimator {
public:
    double update(double omega_dev, double dt, double tau);
    void reset() { *this = AccelerationEstimator{}; }

private:
    bool primed_ = false;
    double prev_omega_ = 0.0;
    double filtered_ = 0.0;
};

/// Per-generator controller memory. Never shared between runs.
struct ControllerMemory {
    LeadLagPssState cpss;
    AccelerationEstimator accel;

    void reset() {
        cpss.reset();
        accel.reset();
    }
};

struct ControlOutput {
    double u = 0.0;
    double v_stab = 0.0;  // u - u_d
    double S = 0.0;
    double eta = 0.0;     // reaching gain in use (fsmcpss only, else 0)
    bool gain_clamped = false;
};

/// Computes the excitation input for one control period of length dt.
/// `s_max_fallback` stands in for an unset FsmcConfig::s_max.
ControlOutput control_input(StabilizerKind kind, const model::GeneratorState& s,
                            const model::Equilibrium& e, const model::AlphaCoefficients& a,
                            const StabilizerConfigs& configs, ControllerMemory& memory, double dt,
                            double s_max_fallback = 1.0);

}  // namespace pss::stab
