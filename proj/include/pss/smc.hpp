#pragma once

#include <optional>

#include "pss/gen_model.hpp"

namespace pss::smc {

/// Surface coefficients, reaching gain and chattering/safety limits.
struct SmcGains {
    double rho1 = 9.0;     // 1/s
    double rho2 = 20.0;    // 1/s^2
    double eta = 60.0;     // reaching gain, rad/s^3
    double phi = 0.0;      // boundary-layer half-width; 0 selects the pure sign law
    double eps_sin = model::kEpsSin;
    double u_max = 10.0;   // bound on |u - u_d|

    void validate() const;
};

/// sign(0) = 0 when phi == 0, otherwise clip(s / phi, -1, 1).
double switching(double s, double phi);

/// S = z3 + rho1 z2 + rho2 z1.
double surface(const model::GeneratorState& s, const model::Equilibrium& e,
               const model::AlphaCoefficients& a, const SmcGains& g);

/// Same surface written directly in the original coordinates.
double surface_expanded(const model::GeneratorState& s, const model::Equilibrium& e,
                        const model::AlphaCoefficients& a, const SmcGains& g);

struct SmcOutput {
    double u = 0.0;
    double S = 0.0;
    double eta = 0.0;
    bool gain_clamped = false;  // |sin x1| < eps_sin, G replaced by +-a2 eps_sin
    bool saturated = false;     // |u - u_d| hit u_max
};

SmcOutput smc_control(const model::GeneratorState& s, const model::Equilibrium& e,
                      const model::AlphaCoefficients& a, const SmcGains& g,
                      std::optional<double> eta_override = std::nullopt);

/// Time derivative of S when input u is applied at state s.
double surface_rate(const model::GeneratorState& s, double u, const model::AlphaCoefficients& a,
                    const SmcGains& g);

/// S * dS/dt under the sliding-mode input. Equals -eta |S| whenever the
/// input is neither clamped nor saturated.
double reaching_product(const model::GeneratorState& s, const model::Equilibrium& e,
                        const model::AlphaCoefficients& a, const SmcGains& g,
                        std::optional<double> eta_override = std::nullopt);

}  // namespace pss::smc
