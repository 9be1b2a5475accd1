#include "pss/gen_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pss/errors.hpp"

namespace pss::model {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParams(std::string("invalid generator parameters: ") + what);
}

}  // namespace

void GeneratorParams::validate() const {
    require(std::isfinite(w0) && std::isfinite(H) && std::isfinite(K_D) && std::isfinite(P_m) &&
                std::isfinite(X_d) && std::isfinite(X_dp) && std::isfinite(T_dop) &&
                std::isfinite(k_c) && std::isfinite(V_s),
            "all values must be finite");
    require(w0 > 0.0, "w0 > 0");
    require(H > 0.0, "H > 0");
    require(T_dop > 0.0, "T_dop > 0");
    require(k_c > 0.0, "k_c > 0");
    require(V_s > 0.0, "V_s > 0");
    require(X_dp > 0.0, "X_dp > 0");
    require(X_d >= X_dp, "X_d >= X_dp");
    require(K_D >= 0.0, "K_D >= 0");
    require(P_m >= 0.0, "P_m >= 0");
}

AlphaCoefficients compute_alphas(const GeneratorParams& p) {
    p.validate();
    const double dx = p.X_d - p.X_dp;
    AlphaCoefficients a;
    a.a1 = -p.K_D / (2.0 * p.H);
    a.a2 = p.w0 * p.V_s / (2.0 * p.H * p.X_dp);
    a.a3 = p.w0 * dx * p.V_s * p.V_s / (4.0 * p.H * p.X_d * p.X_dp);
    a.a4 = p.w0 * p.P_m / (2.0 * p.H);
    a.a5 = -p.X_d / (p.T_dop * p.X_dp);
    a.a6 = dx * p.V_s / (p.T_dop * p.X_dp);
    return a;
}

double acceleration(const GeneratorState& s, const AlphaCoefficients& a) {
    return a.a1 * s.x2 - a.a2 * s.x3 * std::sin(s.x1) + a.a3 * std::sin(2.0 * s.x1) + a.a4;
}

GeneratorState dynamics(const GeneratorState& s, double u, const AlphaCoefficients& a) {
    return {s.x2, acceleration(s, a), a.a5 * s.x3 + a.a6 * std::cos(s.x1) + u};
}

double q_axis_emf(const GeneratorState& s, const GeneratorParams& p) {
    return (p.X_d / p.X_dp) * s.x3 - ((p.X_d - p.X_dp) / p.X_dp) * p.V_s * std::cos(s.x1);
}

double electrical_power(const GeneratorState& s, const GeneratorParams& p) {
    return p.V_s * q_axis_emf(s, p) * std::sin(s.x1) / p.X_d;
}

Equilibrium equilibrium_from_angle(double x1d, const AlphaCoefficients& a) {
    const double sn = std::sin(x1d);
    if (!(x1d > 0.0 && x1d < std::numbers::pi) || sn < kEpsSin) {
        throw SingularAngle("equilibrium angle " + std::to_string(x1d) +
                            " rad is outside (0, pi) or too close to a singularity");
    }
    Equilibrium e;
    e.x1d = x1d;
    e.x2d = 0.0;
    e.x3d = (a.a3 * std::sin(2.0 * x1d) + a.a4) / (a.a2 * sn);
    e.u_d = -a.a5 * e.x3d - a.a6 * std::cos(x1d);
    return e;
}

// x3 eliminated through dx3/dt = 0, leaving dx2/dt = 0 as a function of x1 alone.
double equilibrium_residual(double x1, double u_d, const AlphaCoefficients& a) {
    return (a.a2 * a.a6 / (2.0 * a.a5) + a.a3) * std::sin(2.0 * x1) +
           (a.a2 / a.a5) * u_d * std::sin(x1) + a.a4;
}

Equilibrium equilibrium_from_input(double u_d, const AlphaCoefficients& a) {
    constexpr int kScanPoints = 1000;
    constexpr double kTol = 1e-12;
    const double lo = kEpsSin;
    const double hi = std::numbers::pi / 2.0;
    const double step = (hi - lo) / (kScanPoints - 1);

    auto g = [&](double x) { return equilibrium_residual(x, u_d, a); };

    double left = lo;
    double g_left = g(left);
    for (int i = 1; i < kScanPoints; ++i) {
        double right = (i == kScanPoints - 1) ? hi : lo + i * step;
        double g_right = g(right);
        if (g_left == 0.0) return equilibrium_from_angle(left, a);
        if (std::signbit(g_left) != std::signbit(g_right) || g_right == 0.0) {
            // bisection on [left, right]
            while (right - left > kTol) {
                const double mid = 0.5 * (left + right);
                const double g_mid = g(mid);
                if (g_mid == 0.0) {
                    left = right = mid;
                    break;
                }
                if (std::signbit(g_mid) == std::signbit(g_left)) {
                    left = mid;
                    g_left = g_mid;
                } else {
                    right = mid;
                }
            }
            Equilibrium e = equilibrium_from_angle(0.5 * (left + right), a);
            if (std::fabs(e.u_d - u_d) > 1e-9 * std::fmax(1.0, std::fabs(u_d))) {
                throw NoRoot("equilibrium root for u_d = " + std::to_string(u_d) +
                             " does not reproduce the input");
            }
            return e;
        }
        left = right;
        g_left = g_right;
    }
    throw NoRoot("no equilibrium angle in (0, pi/2] for u_d = " + std::to_string(u_d));
}

ZState to_z(const GeneratorState& s, const Equilibrium& e, const AlphaCoefficients& a) {
    return {s.x1 - e.x1d, s.x2, acceleration(s, a)};
}

GeneratorState from_z(const ZState& z, const Equilibrium& e, const AlphaCoefficients& a) {
    const double x1 = z.z1 + e.x1d;
    const double sn = std::sin(x1);
    if (std::fabs(sn) < kEpsSin) {
        throw SingularAngle("from_z: |sin(x1)| < eps_sin at x1 = " + std::to_string(x1));
    }
    const double x3 = (a.a1 * z.z2 + a.a3 * std::sin(2.0 * x1) + a.a4 - z.z3) / (a.a2 * sn);
    return {x1, z.z2, x3};
}

DriftGain f_and_g(const GeneratorState& s, const AlphaCoefficients& a) {
    const double sn = std::sin(s.x1);
    const double cs = std::cos(s.x1);
    DriftGain out;
    out.f = a.a1 * acceleration(s, a) - a.a2 * (a.a5 * s.x3 + a.a6 * cs) * sn -
            a.a2 * s.x2 * s.x3 * cs + 2.0 * a.a3 * s.x2 * std::cos(2.0 * s.x1);
    out.G = -a.a2 * sn;
    return out;
}

}  // namespace pss::model
