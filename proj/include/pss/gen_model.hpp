#pragma once

#include <cmath>

namespace pss::model {

/// Guard for divisions by sin(x1), rad.
inline constexpr double kEpsSin = 1e-3;

/// Physical constants of one machine connected to an infinite bus.
/// Reactances are totals (machine plus network), all in per unit.
struct GeneratorParams {
    double w0 = 376.991;  // synchronous speed, rad/s
    double H = 3.5;       // inertia constant, s
    double K_D = 1.0;     // damping constant, pu
    double P_m = 0.9;     // mechanical input power, pu
    double X_d = 1.8;     // total direct-axis reactance, pu
    double X_dp = 0.3;    // total transient reactance, pu
    double T_dop = 8.0;   // d-axis transient open-circuit time constant, s
    double k_c = 1.0;     // excitation amplifier gain
    double V_s = 1.0;     // infinite bus voltage, pu

    /// Throws InvalidParams naming the first violated constraint.
    void validate() const;
};

/// Reduced model constants. a1 carries the damping sign (a1 = -K_D / 2H).
struct AlphaCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;
    double a5 = 0.0;
    double a6 = 0.0;
};

/// (rotor angle [rad], speed deviation [rad/s], transient EMF E'q [pu]).
/// Also used for state derivatives.
struct GeneratorState {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    friend GeneratorState operator+(const GeneratorState& a, const GeneratorState& b) {
        return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
    }
    friend GeneratorState operator*(double k, const GeneratorState& s) {
        return {k * s.x1, k * s.x2, k * s.x3};
    }
    friend bool operator==(const GeneratorState&, const GeneratorState&) = default;

    bool finite() const { return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3); }
    double max_abs() const { return std::fmax(std::fabs(x1), std::fmax(std::fabs(x2), std::fabs(x3))); }
};

/// Operating point the controllers regulate to, with its holding input u_d.
struct Equilibrium {
    double x1d = 0.0;
    double x2d = 0.0;
    double x3d = 0.0;
    double u_d = 0.0;

    GeneratorState state() const { return {x1d, x2d, x3d}; }
};

/// Output-tracking coordinates: angle error and its first two derivatives.
struct ZState {
    double z1 = 0.0;
    double z2 = 0.0;
    double z3 = 0.0;
};

/// Drift and input gain of the z3 channel: dz3/dt = f + G u.
struct DriftGain {
    double f = 0.0;
    double G = 0.0;
};

AlphaCoefficients compute_alphas(const GeneratorParams& p);

/// Second state derivative without the input, i.e. the rotor acceleration.
double acceleration(const GeneratorState& s, const AlphaCoefficients& a);

GeneratorState dynamics(const GeneratorState& s, double u, const AlphaCoefficients& a);

/// q-axis EMF E_q from the transient EMF and rotor angle.
double q_axis_emf(const GeneratorState& s, const GeneratorParams& p);

/// Active electrical power delivered to the infinite bus, pu.
double electrical_power(const GeneratorState& s, const GeneratorParams& p);

/// Closed-form operating point for a prescribed rotor angle.
/// Throws SingularAngle when sin(x1d) < kEpsSin.
Equilibrium equilibrium_from_angle(double x1d, const AlphaCoefficients& a);

/// Finds the smallest rotor angle in (0, pi/2] held by the constant input u_d.
/// Throws NoRoot when the bracketing scan finds no sign change.
Equilibrium equilibrium_from_input(double u_d, const AlphaCoefficients& a);

/// Residual of the scalar equation whose roots are equilibrium angles for input u_d.
double equilibrium_residual(double x1, double u_d, const AlphaCoefficients& a);

ZState to_z(const GeneratorState& s, const Equilibrium& e, const AlphaCoefficients& a);

/// Inverse of to_z. Throws SingularAngle when |sin(z1 + x1d)| < kEpsSin.
GeneratorState from_z(const ZState& z, const Equilibrium& e, const AlphaCoefficients& a);

DriftGain f_and_g(const GeneratorState& s, const AlphaCoefficients& a);

/// Parameters used by the examples and the standard scenario.
inline GeneratorParams kundur_params() { return GeneratorParams{}; }

}  // namespace pss::model
