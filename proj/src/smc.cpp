#include "pss/smc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pss/errors.hpp"

namespace pss::smc {

using model::AlphaCoefficients;
using model::Equilibrium;
using model::GeneratorState;

void SmcGains::validate() const {
    auto fail = [](const char* what) { throw InvalidParams(std::string("invalid SMC gains: ") + what); };
    if (!(rho1 > 0.0)) fail("rho1 > 0");
    if (!(rho2 > 0.0)) fail("rho2 > 0");
    if (!(eta > 0.0)) fail("eta > 0");
    if (!(phi >= 0.0)) fail("phi >= 0");
    if (!(eps_sin > 0.0)) fail("eps_sin > 0");
    if (!(u_max > 0.0)) fail("u_max > 0");
}

double switching(double s, double phi) {
    if (phi > 0.0) return std::clamp(s / phi, -1.0, 1.0);
    if (s > 0.0) return 1.0;
    if (s < 0.0) return -1.0;
    return 0.0;
}

double surface(const GeneratorState& s, const Equilibrium& e, const AlphaCoefficients& a,
               const SmcGains& g) {
    const model::ZState z = model::to_z(s, e, a);
    return z.z3 + g.rho1 * z.z2 + g.rho2 * z.z1;
}

double surface_expanded(const GeneratorState& s, const Equilibrium& e, const AlphaCoefficients& a,
                        const SmcGains& g) {
    return a.a1 * s.x2 - a.a2 * s.x3 * std::sin(s.x1) + a.a3 * std::sin(2.0 * s.x1) + a.a4 +
           g.rho1 * s.x2 + g.rho2 * (s.x1 - e.x1d);
}

SmcOutput smc_control(const GeneratorState& s, const Equilibrium& e, const AlphaCoefficients& a,
                      const SmcGains& g, std::optional<double> eta_override) {
    const model::ZState z = model::to_z(s, e, a);
    model::DriftGain fg = model::f_and_g(s, a);

    SmcOutput out;
    out.S = z.z3 + g.rho1 * z.z2 + g.rho2 * z.z1;
    out.eta = eta_override.value_or(g.eta);

    if (std::fabs(std::sin(s.x1)) < g.eps_sin) {
        const double sign = std::sin(s.x1) < 0.0 ? -1.0 : 1.0;
        fg.G = -a.a2 * g.eps_sin * sign;
        out.gain_clamped = true;
    }

    const double u = (-fg.f - g.rho1 * z.z3 - g.rho2 * z.z2 - out.eta * switching(out.S, g.phi)) / fg.G;
    const double du = u - e.u_d;
    if (std::fabs(du) > g.u_max) {
        out.u = e.u_d + std::copysign(g.u_max, du);
        out.saturated = true;
    } else {
        out.u = u;
    }
    return out;
}

double surface_rate(const GeneratorState& s, double u, const AlphaCoefficients& a, const SmcGains& g) {
    const model::DriftGain fg = model::f_and_g(s, a);
    return fg.f + fg.G * u + g.rho1 * model::acceleration(s, a) + g.rho2 * s.x2;
}

double reaching_product(const GeneratorState& s, const Equilibrium& e, const AlphaCoefficients& a,
                        const SmcGains& g, std::optional<double> eta_override) {
    const SmcOutput out = smc_control(s, e, a, g, eta_override);
    return out.S * surface_rate(s, out.u, a, g);
}

}  // namespace pss::smc
