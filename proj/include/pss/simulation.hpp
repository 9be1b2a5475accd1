#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pss/errors.hpp"
#include "pss/gen_model.hpp"
#include "pss/stabilizers.hpp"

namespace pss::sim {

enum class DisturbanceKind { mech_power_step, vs_dip, initial_angle_offset };

std::string_view to_string(DisturbanceKind kind);
DisturbanceKind parse_disturbance_kind(std::string_view name);

/// Scripted event. magnitude is dP_m [pu], V_fault [pu] or an angle kick [rad]
/// depending on kind; t_end is used by vs-dip only.
struct Disturbance {
    DisturbanceKind kind = DisturbanceKind::initial_angle_offset;
    double t_start = 0.0;
    double t_end = 0.0;
    double magnitude = 0.0;

    void validate() const;
};

/// How the nominal operating point is chosen for a generator.
struct EquilibriumSpec {
    enum class By { angle, input };
    By by = By::angle;
    double value = 0.8;  // x1d [rad] or u_d [pu/s]

    model::Equilibrium solve(const model::AlphaCoefficients& a) const;
};

struct GeneratorSetup {
    model::GeneratorParams params;
    EquilibriumSpec equilibrium;
};

struct ScenarioConfig {
    double t_end = 10.0;
    double dt = 1e-4;
    int control_period = 1;  // steps between controller evaluations
    std::vector<GeneratorSetup> generators{GeneratorSetup{}};
    std::vector<Disturbance> disturbances;
    stab::StabilizerKind controller = stab::StabilizerKind::fsmcpss;
    stab::StabilizerConfigs configs;

    /// Throws InvalidParams (or MissingConfig) on the first violated constraint.
    void validate() const;
    std::size_t steps() const;
};

/// Column-oriented record on a uniform time grid, one row per step.
struct SimulationTrace {
    std::vector<double> t, x1, x2, x3, u, v_stab, S, eta, P_e, y;

    std::size_t size() const { return t.size(); }
    void reserve(std::size_t n);
    bool operator==(const SimulationTrace&) const = default;
};

inline constexpr std::size_t kTraceColumns = 10;
inline constexpr std::string_view kTraceHeader = "t,x1,x2,x3,u,v_stab,S,eta,P_e,y";

/// One classical RK4 step with the input held over the step.
/// Throws NonfiniteState(t) when the result has a non-finite component.
template <typename Derivative>
model::GeneratorState rk4_step(Derivative&& derivative, const model::GeneratorState& s, double dt,
                               double t = 0.0) {
    const model::GeneratorState k1 = derivative(s);
    const model::GeneratorState k2 = derivative(s + (0.5 * dt) * k1);
    const model::GeneratorState k3 = derivative(s + (0.5 * dt) * k2);
    const model::GeneratorState k4 = derivative(s + dt * k3);
    model::GeneratorState next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.finite()) throw NonfiniteState(t + dt, "non-finite generator state");
    return next;
}

/// Generator parameters with the disturbances active at time t applied.
model::GeneratorParams effective_params(const model::GeneratorParams& p,
                                        std::span<const Disturbance> disturbances, double t);

model::AlphaCoefficients alphas_for_time(const model::GeneratorParams& p,
                                         std::span<const Disturbance> disturbances, double t);

/// Time at which the last disturbance is over: the end of a vs-dip, the start
/// of a step or kick. nullopt when there are no disturbances.
std::optional<double> clearance_time(std::span<const Disturbance> disturbances);

/// Runs each generator's closed loop independently; one trace per generator.
std::vector<SimulationTrace> simulate(const ScenarioConfig& cfg);

/// Default scenario: initial angle offset of 0.1 rad and a 100 ms bus-voltage
/// dip to 0.5 pu at t = 1 s, all controller sections populated.
ScenarioConfig standard_scenario();

}  // namespace pss::sim
