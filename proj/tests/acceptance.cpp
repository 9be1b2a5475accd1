// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pss/commands.hpp"
#include "pss/config.hpp"
#include "pss/metrics.hpp"
#include "pss/simulation.hpp"
#include "pss/smc.hpp"
#include "pss/stabilizers.hpp"
#include "pss/trace_csv.hpp"

using namespace pss;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

struct Rng {
    std::mt19937_64 rng{20240601};
    double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    model::GeneratorParams params() {
        model::GeneratorParams p;
        p.w0 = (*this)(300.0, 400.0);
        p.H = (*this)(2.0, 9.0);
        p.K_D = (*this)(0.0, 3.0);
        p.P_m = (*this)(0.2, 1.2);
        p.X_d = (*this)(1.0, 2.5);
        p.X_dp = (*this)(0.15, 0.9 * p.X_d);
        p.T_dop = (*this)(3.0, 10.0);
        p.k_c = (*this)(0.5, 2.0);
        p.V_s = (*this)(0.9, 1.1);
        return p;
    }
};

Outcome equilibrium_residual() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto a = model::compute_alphas(rng.params());
        const auto e = model::equilibrium_from_angle(rng(0.1, std::numbers::pi - 0.1), a);
        worst = std::fmax(worst, model::dynamics(e.state(), e.u_d, a).max_abs());
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-10 && secs < 1.0, fmt("max residual %.3g, %.3f s", worst, secs)};
}

Outcome transformation_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng;
    const double h = 1e-6;
    double round_trip = 0.0;
    double chain = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto a = model::compute_alphas(rng.params());
        const auto e = model::equilibrium_from_angle(rng(0.1, std::numbers::pi - 0.1), a);
        const double x1 = std::clamp(e.x1d + rng(-0.5, 0.5), 0.05, std::numbers::pi - 0.05);
        const model::GeneratorState s{x1, rng(-3.0, 3.0), e.x3d * rng(0.7, 1.3)};
        const auto r = model::from_z(model::to_z(s, e, a), e, a);
        round_trip = std::fmax(round_trip, model::GeneratorState{r.x1 - s.x1, r.x2 - s.x2, r.x3 - s.x3}.max_abs());

        const double u = rng(-2.0, 2.0);
        const auto d = model::dynamics(s, u, a);
        const double rate = (model::acceleration(s + h * d, a) - model::acceleration(s + (-h) * d, a)) / (2.0 * h);
        const auto fg = model::f_and_g(s, a);
        const double want = fg.f + fg.G * u;
        chain = std::fmax(chain, std::fabs(rate - want) / std::fmax(1.0, std::fabs(want)));
    }
    const double secs = seconds_since(t0);
    return {round_trip <= 1e-12 && chain <= 1e-6 && secs < 5.0,
            fmt("round trip %.3g, chain rule %.3g relative, %.3f s", round_trip, chain, secs)};
}

// Standard scenario with the bus-voltage dip removed; the initial angle offset
// is kept because it is what puts the state off the surface.
sim::ScenarioConfig undisturbed_smc() {
    sim::ScenarioConfig cfg = sim::standard_scenario();
    std::erase_if(cfg.disturbances,
                  [](const sim::Disturbance& d) { return d.kind != sim::DisturbanceKind::initial_angle_offset; });
    cfg.controller = stab::StabilizerKind::smcpss;
    cfg.configs.smc->phi = 0.0;
    cfg.dt = 1e-4;
    return cfg;
}

Outcome reaching_law() {
    const auto t0 = std::chrono::steady_clock::now();
    const sim::ScenarioConfig cfg = undisturbed_smc();
    const sim::SimulationTrace tr = sim::simulate(cfg).front();
    const double eta = cfg.configs.smc->eta;
    const double S0 = std::fabs(tr.S.front());
    const auto reach = metrics::reach_index(tr.S);
    if (!reach) return {false, "surface never reached"};

    // least-squares slope of |S| over the reaching phase
    double st = 0, ss = 0, stt = 0, sts = 0;
    const double n = static_cast<double>(*reach);
    for (std::size_t k = 0; k < *reach; ++k) {
        const double t = tr.t[k], s = std::fabs(tr.S[k]);
        st += t;
        ss += s;
        stt += t * t;
        sts += t * s;
    }
    const double slope = (n * sts - st * ss) / (n * stt - st * st);
    const double t_reach = tr.t[*reach];
    const double t_pred = S0 / eta;

    // sign of S dS/dt on every step, both measured across the step and from the model
    const auto a = model::compute_alphas(cfg.generators[0].params);
    const auto e = cfg.generators[0].equilibrium.solve(a);
    std::size_t bad_measured = 0, bad_model = 0, checked = 0;
    for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
        if (std::fabs(tr.S[k]) <= 1e-8) continue;
        ++checked;
        if (tr.S[k] * (tr.S[k + 1] - tr.S[k]) >= 0.0) ++bad_measured;
        const model::GeneratorState s{tr.x1[k], tr.x2[k], tr.x3[k]};
        if (smc::reaching_product(s, e, a, *cfg.configs.smc) >= 0.0) ++bad_model;
    }
    const double secs = seconds_since(t0);
    const bool ok = std::fabs(slope + eta) <= 0.02 * eta && std::fabs(t_reach - t_pred) <= 0.05 * t_pred &&
                    bad_measured == 0 && bad_model == 0 && secs < 10.0;
    return {ok, fmt("slope %.4f vs %.1f, reach %.5f s vs %.5f s", slope, -eta, t_reach, t_pred) +
                    ", S*dS/dt >= 0 on " + std::to_string(bad_measured + bad_model) + " of " +
                    std::to_string(2 * checked) + " checks" + fmt(", %.2f s", secs)};
}

Outcome sliding_dynamics() {
    const sim::ScenarioConfig cfg = undisturbed_smc();
    const sim::SimulationTrace tr = sim::simulate(cfg).front();
    const auto reach = metrics::reach_index(tr.S);
    if (!reach) return {false, "surface never reached"};
    const double r1 = cfg.configs.smc->rho1, r2 = cfg.configs.smc->rho2;

    // y'' + r1 y' + r2 y = 0 from the entry point; y' is the speed deviation
    const std::size_t k0 = *reach;
    const double y0 = tr.y[k0], v0 = tr.x2[k0];
    const double disc = r1 * r1 - 4.0 * r2;
    std::function<double(double)> y_exact;
    if (disc > 0.0) {
        const double l1 = (-r1 + std::sqrt(disc)) / 2.0, l2 = (-r1 - std::sqrt(disc)) / 2.0;
        const double c1 = (v0 - l2 * y0) / (l1 - l2), c2 = y0 - c1;
        y_exact = [=](double t) { return c1 * std::exp(l1 * t) + c2 * std::exp(l2 * t); };
    } else {
        const double sigma = -r1 / 2.0, w = std::sqrt(std::fmax(-disc, 1e-300)) / 2.0;
        const double b = (v0 - sigma * y0) / w;
        y_exact = [=](double t) { return std::exp(sigma * t) * (y0 * std::cos(w * t) + b * std::sin(w * t)); };
    }
    double err = 0.0, scale = 0.0;
    for (std::size_t k = k0; k < tr.size(); ++k) {
        const double ye = y_exact(tr.t[k] - tr.t[k0]);
        err = std::fmax(err, std::fabs(tr.y[k] - ye));
        scale = std::fmax(scale, std::fabs(ye));
    }
    const double ratio = err / scale;
    return {ratio <= 0.10, fmt("entry t = %.4f s, y0 = %.5f, max error %.3g of peak %.3g", tr.t[k0], y0, err, scale) +
                               fmt(" (%.2f%%)", 100.0 * ratio)};
}

Outcome fuzzy_engine() {
    const stab::FpssConfig cfg;
    const double origin = stab::fpss_eval(cfg, 0.0, 0.0);
    // cover both universes past their clipping edges
    const double w_span = 1.5 / std::fabs(cfg.k_w), a_span = 1.5 / std::fabs(cfg.k_a);
    double odd = 0.0;
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            const double w = -w_span + 2.0 * w_span * i / 49.0;
            const double acc = -a_span + 2.0 * a_span * j / 49.0;
            odd = std::fmax(odd, std::fabs(stab::fpss_eval(cfg, w, acc) + stab::fpss_eval(cfg, -w, -acc)));
        }
    }

    const auto fp = stab::make_fpss_system();
    std::size_t fpss_ok = 0;
    for (const auto& r : fp.rules().rules) {
        const auto want = stab::kFpssRuleTable[r.antecedent[0]][r.antecedent[1]];
        if (fp.output().terms[r.consequent].label == want &&
            fp.inputs()[0].terms[r.antecedent[0]].label == stab::kSevenLabels[r.antecedent[0]] &&
            fp.inputs()[1].terms[r.antecedent[1]].label == stab::kSevenLabels[r.antecedent[1]]) {
            ++fpss_ok;
        }
    }
    const auto fs_sys = stab::make_fsmc_system();
    std::size_t fsmc_ok = 0;
    for (std::size_t i = 0; i < fs_sys.rules().rules.size(); ++i) {
        const auto& r = fs_sys.rules().rules[i];
        if (fs_sys.inputs()[0].terms[r.antecedent[0]].label == stab::kSizeLabels[i] &&
            fs_sys.output().terms[r.consequent].label == stab::kSizeLabels[i]) {
            ++fsmc_ok;
        }
    }
    const bool tables = fpss_ok == 49 && fp.rules().rules.size() == 49 && fsmc_ok == 7 &&
                        fs_sys.rules().rules.size() == 7 && stab::matches_fpss_table(fp) &&
                        stab::matches_fsmc_table(fs_sys);

    const stab::FsmcConfig fc;
    std::mt19937_64 rng(7);
    std::vector<double> mags;
    for (int i = 0; i < 1000; ++i) mags.push_back(std::uniform_real_distribution<double>(0.0, 2.0 * *fc.s_max)(rng));
    std::sort(mags.begin(), mags.end());
    std::size_t drops = 0;
    for (std::size_t i = 1; i < mags.size(); ++i) {
        if (stab::fsmc_eta(fc, mags[i]) < stab::fsmc_eta(fc, mags[i - 1])) ++drops;
    }
    const bool ok = std::fabs(origin) <= 1e-9 && odd <= 1e-6 && tables && drops == 0;
    return {ok, fmt("fpss(0,0) = %.3g, odd symmetry %.3g, rules %g/49 + %g/7", origin, odd,
                    static_cast<double>(fpss_ok), static_cast<double>(fsmc_ok)) +
                    ", eta decreases " + std::to_string(drops) + " times"};
}

using Runs = std::map<stab::StabilizerKind, sim::SimulationTrace>;

Runs standard_runs(double& secs) {
    const auto t0 = std::chrono::steady_clock::now();
    Runs runs;
    for (stab::StabilizerKind k : stab::kAllKinds) {
        sim::ScenarioConfig cfg = sim::standard_scenario();
        cfg.controller = k;
        runs.emplace(k, sim::simulate(cfg).front());
    }
    secs = seconds_since(t0);
    return runs;
}

std::string opt(const std::optional<double>& v) { return v ? fmt("%.4f", *v) : std::string("none"); }

Outcome ordering(const Runs& runs, double secs) {
    using K = stab::StabilizerKind;
    std::map<K, std::optional<double>> ts;
    for (const auto& [k, tr] : runs) ts[k] = metrics::row_for(k, tr).settling_time;
    // a run that never settles counts as infinitely slow
    auto v = [&](K k) { return ts[k].value_or(INFINITY); };
    const double clearance = *sim::clearance_time(sim::standard_scenario().disturbances);
    const bool ok = ts[K::fsmcpss].has_value() && v(K::fsmcpss) <= v(K::smcpss) && v(K::smcpss) < v(K::fpss) &&
                    v(K::fpss) < v(K::nopss) && v(K::cpss) < v(K::nopss) && v(K::fsmcpss) <= clearance + 2.0 &&
                    secs < 60.0;
    return {ok, "settling fsmcpss " + opt(ts[K::fsmcpss]) + ", smcpss " + opt(ts[K::smcpss]) + ", fpss " +
                    opt(ts[K::fpss]) + ", cpss " + opt(ts[K::cpss]) + ", nopss " + opt(ts[K::nopss]) +
                    fmt("; clearance %.2f s; five runs %.2f s", clearance, secs)};
}

Outcome chattering(const Runs& runs) {
    const auto f = metrics::row_for(stab::StabilizerKind::fsmcpss, runs.at(stab::StabilizerKind::fsmcpss));
    const auto s = metrics::row_for(stab::StabilizerKind::smcpss, runs.at(stab::StabilizerKind::smcpss));
    const double eta_max = sim::standard_scenario().configs.fsmc->eta_max;
    const bool same_gain = sim::standard_scenario().configs.smc->eta == eta_max;
    return {same_gain && f.reached && s.reached && f.chattering < s.chattering,
            fmt("fsmcpss %.4g vs smcpss %.4g (fixed eta %.0f)", f.chattering, s.chattering, eta_max)};
}

Outcome integrator_order() {
    // Smooth sliding-mode run. The controller is sampled on a fixed 1 ms grid
    // for every step size, so only the plant integration error changes.
    const double T = 1e-3;
    auto run = [&](int sub) {
        sim::ScenarioConfig cfg = sim::standard_scenario();
        cfg.t_end = 2.0;
        std::erase_if(cfg.disturbances,
                      [](const sim::Disturbance& d) { return d.kind != sim::DisturbanceKind::initial_angle_offset; });
        cfg.controller = stab::StabilizerKind::smcpss;
        cfg.configs.smc->phi = 0.01;
        cfg.configs.smc->eta = 10.0;
        cfg.dt = T / sub;
        cfg.control_period = sub;
        return sim::simulate(cfg).front();
    };
    const auto coarse = run(1), fine = run(2), ref = run(32);
    auto error = [&](const sim::SimulationTrace& tr, int stride) {
        double e = 0.0;
        for (std::size_t k = 0; k < coarse.size(); ++k) {
            const std::size_t i = k * static_cast<std::size_t>(stride), j = k * 32;
            e = std::fmax(e, std::fabs(tr.x1[i] - ref.x1[j]));
            e = std::fmax(e, std::fabs(tr.x2[i] - ref.x2[j]) / 10.0);
            e = std::fmax(e, std::fabs(tr.x3[i] - ref.x3[j]));
        }
        return e;
    };
    const double e1 = error(coarse, 1), e2 = error(fine, 2);
    const double ratio = e1 / e2;
    return {ratio >= 12.0 && ratio <= 20.0, fmt("error %.3g at dt, %.3g at dt/2, ratio %.2f", e1, e2, ratio)};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome determinism(const Runs& runs) {
    const fs::path dir = fs::temp_directory_path() / "pss_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    cli::write_file_atomic(dir / "std.cfg", cli::config_template());
    std::ostringstream sink;
    cli::CompareArgs a{dir / "std.cfg", dir / "a", false};
    cli::CompareArgs b{dir / "std.cfg", dir / "b", false};
    const int ca = cli::compare_command(a, sink, sink);
    const int cb = cli::compare_command(b, sink, sink);

    std::size_t files = 0, same = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        ++files;
        if (slurp(entry.path()) == slurp(dir / "b" / entry.path().filename())) ++same;
    }
    std::size_t parsed_equal = 0;
    for (const auto& [k, tr] : runs) {
        const auto p = dir / "a" / (std::string(stab::to_string(k)) + ".csv");
        if (cli::load_trace_csv(p) == tr) ++parsed_equal;
    }
    fs::remove_all(dir);
    const bool ok = ca == 0 && cb == 0 && files == 7 && same == files && parsed_equal == runs.size();
    return {ok, std::to_string(same) + "/" + std::to_string(files) + " files identical across runs, " +
                    std::to_string(parsed_equal) + "/" + std::to_string(runs.size()) +
                    " parsed traces equal the in-memory runs"};
}

}  // namespace

int main() {
    double secs = 0.0;
    const Runs runs = standard_runs(secs);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"equilibrium residual", equilibrium_residual},
        {"coordinate transform", transformation_fidelity},
        {"reaching law", reaching_law},
        {"sliding-phase dynamics", sliding_dynamics},
        {"fuzzy engine", fuzzy_engine},
        {"settling-time ordering", [&] { return ordering(runs, secs); }},
        {"chattering", [&] { return chattering(runs); }},
        {"integrator order", integrator_order},
        {"determinism and CSV", [&] { return determinism(runs); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s  %zu %-24s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
