#pragma once

// Adaptive Dormand-Prince 5(4) integrator with 4th-order continuous output.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace eitmem {

struct IntegratorOptions {
    double rtol = 1.0e-9;
    double atol = 1.0e-11;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  ///< 0 selects a step automatically
    std::size_t max_steps = 50'000'000;
    /// State is [real parts | imaginary parts]; weight errors by complex
    /// magnitude |y_i + i y_{i+n/2}| so step control is phase invariant.
    bool complex_halves = false;

    void validate() const;
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
    /// Sum over accepted steps of the max-norm embedded error estimate.
    double error_estimate = 0.0;

    IntegrationStats& operator+=(const IntegrationStats& o);
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

using RhsFunction = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using SampleObserver = std::function<void(std::size_t index, double t, std::span<const double> y)>;

/// Integrates y' = f(t, y) from t0 to t1 in place. The observer is called for
/// every entry of `sample_times` (sorted, within [t0, t1]) with the
/// interpolated state. Throws IntegrationError on step-size underflow.
IntegrationStats integrate(const RhsFunction& rhs, std::span<double> y, double t0, double t1,
                           std::span<const double> sample_times, const SampleObserver& observe,
                           const IntegratorOptions& opts = {});

}  // namespace eitmem
