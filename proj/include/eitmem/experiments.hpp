#pragma once

// Control-amplitude optimization and parameter sweeps. Sweep points run on a
// worker pool and are aggregated by input index, so tables do not depend on
// the worker count.

#include "eitmem/dynamics.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace eitmem {

/// Extended: uniform control (w_c -> infinity). Finite: control shares the probe mode.
enum class ControlConfig { Extended, FiniteWaist };

std::string_view to_string(ControlConfig kind);
ControlConfig parse_control_config(std::string_view name);

/// Returns `base` with the control profile set for `kind`.
SimulationConfig with_control(SimulationConfig base, ControlConfig kind);

struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi]; stops
/// when the bracket is narrower than tol and returns the best point evaluated.
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol);

struct AmplitudeSearch {
    double lo = 0.2;
    double hi = 8.0;
    double tol = 0.02;

    void validate() const;
};

struct AmplitudeOptimum {
    double a_opt = 0.0;
    double eta_tot = 0.0;
    double eta_w = 0.0;
    double eta_r = 0.0;
    double n_eff = 0.0;
    double cooperativity = 0.0;
    std::size_t n_shells = 0;
    std::size_t evaluations = 0;
    bool at_bound = false;
    std::vector<std::string> warnings;
};

/// Maximizes eta_tot over A_w = A_r = A.
AmplitudeOptimum optimize_amplitude(const SimulationConfig& config,
                                    const AmplitudeSearch& search = {});

struct SweepRow {
    ModeKind mode = ModeKind::TEM00;
    ControlConfig config = ControlConfig::Extended;
    double L_mm = 0.0;
    double R_um = 0.0;
    std::size_t n_shells = 0;
    double n_eff = 0.0;
    double cooperativity = 0.0;
    double a_opt = 0.0;
    double eta_w = 0.0;
    double eta_r = 0.0;
    double eta_tot = 0.0;
    std::string status = "ok";

    /// "bound" marks a successful point whose optimum touched the bracket.
    bool ok() const { return status == "ok" || status == "bound"; }
};

struct SweepOptions {
    AmplitudeSearch search{};
    unsigned workers = 0;  ///< 0 uses hardware concurrency
};

/// Runs fn(0..count-1) on a worker pool; results land at their input index.
template <class Row>
std::vector<Row> parallel_map(std::size_t count, unsigned workers,
                              const std::function<Row(std::size_t)>& fn);

/// One optimized row at the configuration's own geometry.
SweepRow evaluate_point(const SimulationConfig& config, ControlConfig kind,
                        const AmplitudeSearch& search);

/// Radius sweep for one control configuration; radii in metres.
std::vector<SweepRow> sweep_radius(const SimulationConfig& base, ControlConfig kind,
                                   const std::vector<double>& radii, const SweepOptions& opts = {});

/// Cartesian L x R sweep (L-major order); lengths and radii in metres.
std::vector<SweepRow> sweep_dimensions(const SimulationConfig& base, ControlConfig kind,
                                       const std::vector<double>& lengths,
                                       const std::vector<double>& radii,
                                       const SweepOptions& opts = {});

struct ModeComparison {
    std::vector<SweepRow> tem00_extended;
    std::vector<SweepRow> tem00_finite;
    std::vector<SweepRow> lg01_extended;
    std::vector<SweepRow> lg01_finite;

    std::vector<SweepRow> all() const;
};

/// TEM00 and LG01 probes (same waist as `base.probe`) in both configurations.
ModeComparison compare_modes(const SimulationConfig& base, const std::vector<double>& radii,
                             const SweepOptions& opts = {});

struct InvarianceReport {
    double a_opt = 0.0;
    double eta_baseline = 0.0;

    double max_asymmetric_gain = 0.0;  ///< best eta(A_w, A_r) - eta(A_opt, A_opt)
    double best_amp_write = 0.0;
    double best_amp_read = 0.0;

    std::vector<double> durations;  ///< probe durations tried (s)
    std::vector<double> duration_etas;
    double max_duration_change = 0.0;

    double storage_change = 0.0;  ///< |eta(2 T_s) - eta(T_s)|
};

/// Checks that decoupled write/read amplitudes, T within +-50% and a doubled
/// storage time do not improve (or change) the optimized efficiency.
InvarianceReport invariance_checks(const SimulationConfig& config,
                                   const AmplitudeSearch& search = {});

/// Index of the row with the largest eta_tot among successful rows.
std::size_t argmax_eta(const std::vector<SweepRow>& rows);

/// Radii k * w for k = first, first+step, ..., last (inclusive, rounded).
std::vector<double> radius_grid(double waist, double first, double last, double step);

}  // namespace eitmem

#include "eitmem/detail/parallel_map.hpp"
