#include "pss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pss/errors.hpp"

namespace pss::metrics {

std::optional<double> settling_time(std::span<const double> series, double dt, double final_value,
                                    double band_fraction) {
    if (series.empty()) throw InvalidParams("settling_time: empty series");
    if (!(band_fraction > 0.0 && band_fraction < 1.0)) {
        throw InvalidParams("settling_time: band_fraction must lie in (0, 1)");
    }
    double peak = 0.0;
    for (double v : series) peak = std::max(peak, std::fabs(v - final_value));
    const double threshold = band_fraction * peak;

    // last sample outside the band
    std::size_t i = series.size();
    while (i > 0 && std::fabs(series[i - 1] - final_value) <= threshold) --i;
    if (i == 0) return 0.0;
    if (i == series.size()) return std::nullopt;
    return static_cast<double>(i) * dt;
}

std::optional<double> peak_overshoot(std::span<const double> series, double final_value) {
    if (series.empty()) throw InvalidParams("peak_overshoot: empty series");
    const double step = series.front() - final_value;
    if (step == 0.0) return std::nullopt;
    const double direction = step > 0.0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (double v : series) worst = std::max(worst, -direction * (v - final_value));
    return worst / std::fabs(step);
}

IntegralIndices integral_indices(std::span<const double> y, double dt) {
    IntegralIndices out;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double t0 = static_cast<double>(i - 1) * dt;
        const double t1 = static_cast<double>(i) * dt;
        out.ise += 0.5 * dt * (y[i - 1] * y[i - 1] + y[i] * y[i]);
        out.itae += 0.5 * dt * (t0 * std::fabs(y[i - 1]) + t1 * std::fabs(y[i]));
    }
    return out;
}

double chattering_index(std::span<const double> u, std::size_t begin, std::size_t end) {
    end = std::min(end, u.size());
    double total = 0.0;
    for (std::size_t i = begin; i + 1 < end; ++i) total += std::fabs(u[i + 1] - u[i]);
    return total;
}

std::optional<std::size_t> reach_index(std::span<const double> S, double fraction) {
    if (S.empty()) return std::nullopt;
    const double threshold = fraction * std::fabs(S.front());
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (std::fabs(S[i]) <= threshold) return i;
    }
    return std::nullopt;
}

const MetricsRow* MetricsReport::find(stab::StabilizerKind kind) const {
    for (const auto& r : rows) {
        if (r.kind == kind) return &r;
    }
    return nullptr;
}

namespace {

double trace_dt(const sim::SimulationTrace& tr) {
    return tr.size() > 1 ? tr.t[1] - tr.t[0] : 0.0;
}

double settle_or_inf(const MetricsRow& r) {
    return r.settling_time.value_or(std::numeric_limits<double>::infinity());
}

}  // namespace

MetricsRow row_for(stab::StabilizerKind kind, const sim::SimulationTrace& tr, double band_fraction) {
    const double dt = trace_dt(tr);
    MetricsRow row;
    row.kind = kind;
    row.settling_time = settling_time(tr.y, dt, 0.0, band_fraction);
    row.overshoot = peak_overshoot(tr.y, 0.0);
    const IntegralIndices ii = integral_indices(tr.y, dt);
    row.ise = ii.ise;
    row.itae = ii.itae;
    const auto reach = reach_index(tr.S);
    row.reached = reach.has_value();
    row.chattering = chattering_index(tr.u, reach.value_or(0), tr.u.size());
    for (double s : tr.S) row.max_abs_S = std::max(row.max_abs_S, std::fabs(s));
    return row;
}

MetricsReport compare_report(const std::map<stab::StabilizerKind, sim::SimulationTrace>& traces,
                             const ReportOptions& options) {
    MetricsReport report;
    if (traces.empty()) return report;

    const sim::SimulationTrace& ref = traces.begin()->second;
    for (const auto& [kind, tr] : traces) {
        if (tr.size() == 0 || tr.t != ref.t || tr.x1.front() != ref.x1.front() ||
            tr.x2.front() != ref.x2.front() || tr.x3.front() != ref.x3.front()) {
            throw MismatchedScenarios("trace for " + std::string(stab::to_string(kind)) +
                                      " does not share the time grid and initial state");
        }
        report.rows.push_back(row_for(kind, tr, options.band_fraction));
    }

    std::vector<std::size_t> order(report.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return settle_or_inf(report.rows[a]) < settle_or_inf(report.rows[b]);
    });
    for (std::size_t r = 0; r < order.size(); ++r) report.rows[order[r]].rank = static_cast<int>(r + 1);

    using K = stab::StabilizerKind;
    auto check_order = [&](K lhs, K rhs, bool strict) {
        const MetricsRow* a = report.find(lhs);
        const MetricsRow* b = report.find(rhs);
        if (!a || !b) return;
        const double ta = settle_or_inf(*a);
        const double tb = settle_or_inf(*b);
        const bool ok = strict ? ta < tb : ta <= tb;
        if (!ok) {
            report.violations.push_back("settling time " + std::string(stab::to_string(lhs)) +
                                        (strict ? " < " : " <= ") + std::string(stab::to_string(rhs)) +
                                        " does not hold");
        }
    };
    check_order(K::fsmcpss, K::smcpss, false);
    check_order(K::smcpss, K::fpss, true);
    check_order(K::fpss, K::nopss, true);
    check_order(K::cpss, K::nopss, true);

    if (options.clearance_time) {
        if (const MetricsRow* f = report.find(K::fsmcpss)) {
            const double limit = *options.clearance_time + options.settle_after_clearance;
            if (!(settle_or_inf(*f) <= limit)) {
                report.violations.push_back("fsmcpss does not settle within " +
                                            std::to_string(options.settle_after_clearance) +
                                            " s of disturbance clearance");
            }
        }
    }
    const MetricsRow* f = report.find(K::fsmcpss);
    const MetricsRow* s = report.find(K::smcpss);
    if (f && s && !(f->chattering < s->chattering)) {
        report.violations.push_back("chattering index fsmcpss < smcpss does not hold");
    }
    return report;
}

}  // namespace pss::metrics
