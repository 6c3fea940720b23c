#pragma once

// Property suites run by the `validate` command. Each suite measures one
// invariant of the model or the numerics and compares it to a tolerance.

#include "eitmem/dynamics.hpp"

#include <string>
#include <vector>

namespace eitmem {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< measured figure (residual, difference, ...)
    double tolerance = 0.0;  ///< pass iff value <= tolerance
    std::string detail;
};

/// Running energy balance with gamma = gamma0 = 0, shell and collective
/// models, driven by the base configuration's pulses. Tolerance 1e-6.
SuiteResult check_norm_conservation(const SimulationConfig& base);

/// Shell model with uniform control against the collective model:
/// |delta eta_tot| and max |a_shell(t) - a_coll(t)| / max |a|. Tolerance 1e-6.
SuiteResult check_collective_equivalence(const SimulationConfig& base);

/// a_in -> c a_in with complex c: efficiencies unchanged and a(t) scaled by c.
/// Tolerance 1e-10.
SuiteResult check_linearity(const SimulationConfig& base);

/// Doubling the shell count from the default. Tolerance 1e-4.
SuiteResult check_grid_convergence(const SimulationConfig& base);

/// Empty cavity (g = 0) driven by a constant input against
/// a(t) = sqrt(2 kappa) u (1 - exp(-kappa t)) / kappa, relative to the
/// steady-state amplitude. Tolerance 1e-7.
SuiteResult check_step_response(const SimulationConfig& base);

/// Every runnable SIMD kernel against the scalar reference on a fixed
/// deterministic state. Tolerance 1e-12 relative.
SuiteResult check_kernel_equivalence();

/// Doubled storage time with gamma0 = 0. Tolerance 1e-6.
SuiteResult check_storage_doubling(const SimulationConfig& base);

/// |eta_tot - eta_w eta_r| for the extended configuration. Tolerance 1e-3.
SuiteResult check_factorization(const SimulationConfig& base);

/// Halving rtol and atol changes eta_tot by less than the accumulated local
/// error estimate of the coarser run.
SuiteResult check_tolerance_convergence(const SimulationConfig& base);

/// Extended configuration with A = 1 against (2C/(1+2C))^2 at
/// C in {5, 10, 15, 20}, reached by scaling the crystal length. Tolerance 0.01.
SuiteResult check_adiabatic_limit(const SimulationConfig& base);

/// All suites in a fixed order.
std::vector<SuiteResult> run_property_suites(const SimulationConfig& base);

}  // namespace eitmem
