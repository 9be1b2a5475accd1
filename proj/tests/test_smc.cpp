#include <cmath>

#include "doctest.h"
#include "pss/errors.hpp"
#include "pss/simulation.hpp"
#include "pss/smc.hpp"

using namespace pss;
using namespace pss::model;
using namespace pss::smc;

namespace {

struct Fixture {
    AlphaCoefficients a = compute_alphas(kundur_params());
    Equilibrium e = equilibrium_from_angle(0.8, a);
    SmcGains g;
};

}  // namespace

TEST_CASE("switching function") {
    CHECK(switching(0.0, 0.0) == 0.0);
    CHECK(switching(-3.0, 0.0) == -1.0);
    CHECK(switching(1e-300, 0.0) == 1.0);
    CHECK(switching(0.05, 0.1) == doctest::Approx(0.5));
    CHECK(switching(-0.2, 0.1) == -1.0);
}

TEST_CASE("gain validation") {
    SmcGains g;
    CHECK_NOTHROW(g.validate());
    g.eta = 0.0;
    CHECK_THROWS_AS(g.validate(), InvalidParams);
    g = SmcGains{};
    g.phi = -1.0;
    CHECK_THROWS_AS(g.validate(), InvalidParams);
    g = SmcGains{};
    g.rho2 = -1.0;
    CHECK_THROWS_AS(g.validate(), InvalidParams);
}

TEST_CASE("surface vanishes at the operating point and matches its expanded form") {
    Fixture fx;
    CHECK(std::fabs(surface(fx.e.state(), fx.e, fx.a, fx.g)) <= 1e-12);
    const GeneratorState s{0.95, -0.4, 1.02};
    CHECK(surface(s, fx.e, fx.a, fx.g) == doctest::Approx(surface_expanded(s, fx.e, fx.a, fx.g)).epsilon(1e-14));
}

TEST_CASE("control at the operating point holds the equilibrium input") {
    Fixture fx;
    fx.g.phi = 0.01;  // S is zero only to rounding
    const SmcOutput out = smc_control(fx.e.state(), fx.e, fx.a, fx.g);
    CHECK(std::fabs(out.u - fx.e.u_d) <= 1e-9);
    CHECK(!out.saturated);
    CHECK(!out.gain_clamped);
}

TEST_CASE("reaching product equals -eta |S|") {
    Fixture fx;
    fx.g.eta = 2.0;
    const GeneratorState s{0.85, 0.1, 0.98};
    const double S = surface(s, fx.e, fx.a, fx.g);
    REQUIRE(S != 0.0);
    CHECK(reaching_product(s, fx.e, fx.a, fx.g) == doctest::Approx(-2.0 * std::fabs(S)).epsilon(1e-9));
}

TEST_CASE("closed-loop surface rate from one short integration step") {
    Fixture fx;
    fx.g.eta = 3.0;
    const GeneratorState s{0.9, 0.2, 1.0};
    const SmcOutput out = smc_control(s, fx.e, fx.a, fx.g);
    REQUIRE(!out.saturated);
    const double h = 1e-6;
    const auto field = [&](const GeneratorState& x) { return dynamics(x, out.u, fx.a); };
    const GeneratorState ahead = sim::rk4_step(field, s, h);
    const GeneratorState behind = sim::rk4_step(field, s, -h);
    const double rate = (surface(ahead, fx.e, fx.a, fx.g) - surface(behind, fx.e, fx.a, fx.g)) / (2.0 * h);
    CHECK(std::fabs(rate - (-fx.g.eta * (out.S > 0 ? 1.0 : -1.0))) <= 1e-6 * fx.g.eta + 1e-6);
}

TEST_CASE("gain clamp near a singular angle") {
    Fixture fx;
    const GeneratorState s{1e-5, 0.0, 1.0};
    const SmcOutput out = smc_control(s, fx.e, fx.a, fx.g);
    CHECK(out.gain_clamped);
    CHECK(std::isfinite(out.u));
}

TEST_CASE("input saturation") {
    Fixture fx;
    fx.g.u_max = 0.01;
    const GeneratorState s{1.2, 1.0, 1.0};
    const SmcOutput out = smc_control(s, fx.e, fx.a, fx.g);
    CHECK(out.saturated);
    CHECK(std::fabs(out.u - fx.e.u_d) == doctest::Approx(0.01));
}

TEST_CASE("eta override") {
    Fixture fx;
    const GeneratorState s{0.9, 0.2, 1.0};
    CHECK(smc_control(s, fx.e, fx.a, fx.g, 7.0).eta == 7.0);
    CHECK(smc_control(s, fx.e, fx.a, fx.g).eta == fx.g.eta);

    // raising eta pushes u further in the direction that drives S to zero
    const double S = surface(s, fx.e, fx.a, fx.g);
    const double G = f_and_g(s, fx.a).G;
    const double dir = -(S > 0 ? 1.0 : -1.0) / G;
    double prev = smc_control(s, fx.e, fx.a, fx.g, 0.5).u;
    for (double eta = 1.0; eta <= 50.0; eta += 0.5) {
        const double u = smc_control(s, fx.e, fx.a, fx.g, eta).u;
        CHECK((u - prev) * dir >= 0.0);
        prev = u;
    }
}
