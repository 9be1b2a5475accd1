#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pss/simulation.hpp"
#include "pss/stabilizers.hpp"

namespace pss::metrics {

inline constexpr double kDefaultBand = 0.02;

// Every time-valued metric measures time from the first sample of the series,
// so results do not depend on where the series sits on an absolute clock.

/// Earliest time after which |series - final_value| stays within
/// band_fraction * max|series - final_value|. nullopt when never settled.
std::optional<double> settling_time(std::span<const double> series, double dt, double final_value,
                                    double band_fraction = kDefaultBand);

/// Largest excursion past final_value (on the side opposite the initial
/// value) over |initial - final|. nullopt when initial == final.
std::optional<double> peak_overshoot(std::span<const double> series, double final_value);

struct IntegralIndices {
    double ise = 0.0;
    double itae = 0.0;
};

/// Trapezoidal integrals of y^2 and t |y| on a uniform grid.
IntegralIndices integral_indices(std::span<const double> y, double dt);

/// Total variation of u over samples [begin, end).
double chattering_index(std::span<const double> u, std::size_t begin, std::size_t end);

/// First index where |S| <= 1e-3 |S(0)|; nullopt when the surface is never reached.
std::optional<std::size_t> reach_index(std::span<const double> S, double fraction = 1e-3);

struct MetricsRow {
    stab::StabilizerKind kind = stab::StabilizerKind::nopss;
    std::optional<double> settling_time;
    std::optional<double> overshoot;
    double ise = 0.0;
    double itae = 0.0;
    double chattering = 0.0;
    bool reached = false;  // chattering window started at the reach index
    double max_abs_S = 0.0;
    int rank = 0;          // 1-based, by settling time
};

struct MetricsReport {
    std::vector<MetricsRow> rows;  // in StabilizerKind order
    std::vector<std::string> violations;

    const MetricsRow* find(stab::StabilizerKind kind) const;
};

struct ReportOptions {
    double band_fraction = kDefaultBand;
    /// Clearance time of the last disturbance; enables the settle-after-clearance check.
    std::optional<double> clearance_time;
    double settle_after_clearance = 2.0;  // s
};

MetricsRow row_for(stab::StabilizerKind kind, const sim::SimulationTrace& trace,
                   double band_fraction = kDefaultBand);

/// Computes every metric on the rotor-angle error column, ranks by settling
/// time (not settled ranks last, ties by kind order) and lists violations of
/// the expected controller ordering. Throws MismatchedScenarios if the traces
/// do not share a time grid and initial state.
MetricsReport compare_report(const std::map<stab::StabilizerKind, sim::SimulationTrace>& traces,
                             const ReportOptions& options = {});

}  // namespace pss::metrics
