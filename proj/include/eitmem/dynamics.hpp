#pragma once

// Equations of motion for the cylindrical shell model and its collective
// (uniform control) reduction, and the write-store-read driver.
//
// Shell amplitudes use a symmetric normalization: P_j and S_j are the shell
// coherences scaled by sqrt(n_j), so |S_j|^2 counts excitations in shell j and
//   da/dt   = -kappa a + i g sum_j sqrt(n_j) Psi_p(r_j) P_j + sqrt(2 kappa) a_in
//   dP_j/dt = -gamma P_j + i g sqrt(n_j) Psi_p(r_j) a + i Omega Psi_c(r_j) S_j
//   dS_j/dt = -gamma0 S_j + i Omega Psi_c(r_j) P_j
// With Psi_c == 1 the combination S = sum_j sqrt(n_j) Psi_p(r_j) S_j / sqrt(N)
// obeys the collective equations with g_N = g sqrt(N).

#include "eitmem/core_model.hpp"
#include "eitmem/integrator.hpp"
#include "eitmem/pulses.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace eitmem {

using cplx = std::complex<double>;

/// Time-dependent inputs: probe amplitude a_in(t) and real control Omega(t).
struct Drive {
    std::function<cplx(double)> input;
    std::function<double(double)> omega;
};

struct ShellState {
    cplx a{};
    std::vector<cplx> P;
    std::vector<cplx> S;
};

struct CollectiveState {
    cplx a{};
    cplx P{};
    cplx S{};
};

/// a_out = sqrt(2 kappa) a - a_in.
inline cplx output_field(cplx a, cplx a_in, double kappa) {
    return std::sqrt(2.0 * kappa) * a - a_in;
}

class ShellModel {
public:
    ShellModel(const SystemRates& rates, const ShellGrid& grid, const ModeProfile& probe,
               const ModeProfile& control, Drive drive);

    std::size_t shells() const { return coupling_.size(); }
    std::size_t dimension() const { return 2 + 4 * shells(); }
    const SystemRates& rates() const { return rates_; }
    const Drive& drive() const { return drive_; }
    std::span<const double> coupling() const { return coupling_; }
    std::span<const double> control_profile() const { return control_; }

    /// Flat layout: [re a, re P[n], re S[n], im a, im P[n], im S[n]].
    void rhs(double t, std::span<const double> y, std::span<double> dydt) const;

    /// Same equations on the structured state; throws on size mismatch.
    ShellState derivative(double t, const ShellState& state) const;

    std::vector<double> pack(const ShellState& state) const;
    ShellState unpack(std::span<const double> y) const;

private:
    SystemRates rates_;
    std::vector<double> coupling_;
    std::vector<double> control_;
    Drive drive_;
};

class CollectiveModel {
public:
    CollectiveModel(const SystemRates& rates, double n_eff, Drive drive);

    static constexpr std::size_t dimension() { return 6; }
    double collective_coupling() const { return g_n_; }
    const SystemRates& rates() const { return rates_; }
    const Drive& drive() const { return drive_; }

    /// Flat layout: [re a, re P, re S, im a, im P, im S].
    void rhs(double t, std::span<const double> y, std::span<double> dydt) const;
    CollectiveState derivative(double t, const CollectiveState& state) const;

private:
    SystemRates rates_;
    double g_n_;
    Drive drive_;
};

struct SimulationConfig {
    SystemRates rates = SystemRates::from_mhz(0.37, 1.5, 11.3);
    CrystalGeometry geometry{6.1e14, 3.0e-3, 100.0e-6};
    ModeProfile probe = ModeProfile::tem00(37.0e-6);
    ModeProfile control = ModeProfile::uniform();
    PulseSchedule schedule = PulseSchedule::with_defaults(2.0e-6);
    bool control_enabled = true;
    std::size_t n_shells = 0;  ///< 0 selects default_shell_count
    IntegratorOptions integrator{};
    double samples_per_kappa = 40.0;  ///< reporting points per cavity lifetime 1/kappa
    cplx input_scale{1.0, 0.0};       ///< multiplies a_in(t)

    std::size_t resolved_shells() const;
    void validate() const;
};

struct SimulationDiagnostics {
    double norm_residual = 0.0;  ///< max |energy balance| / input photons
    double adiabaticity = 0.0;   ///< 2 T C gamma
    IntegrationStats stats;
    std::string kernel;
    std::vector<std::string> warnings;
};

struct SimulationResult {
    std::vector<double> times;
    std::vector<cplx> a_in;
    std::vector<cplx> a;
    std::vector<cplx> a_out;
    std::vector<double> omega;
    std::size_t write_end_index = 0;   ///< sample at T_w
    std::size_t read_start_index = 0;  ///< sample at T_r

    std::vector<cplx> S_final_write;  ///< per-shell S_j(T_w)
    ShellGrid grid;
    double n_eff = 0.0;
    double cooperativity = 0.0;

    double input_photons = 0.0;   ///< write-window integral of |a_in|^2
    double output_photons = 0.0;  ///< read-window integral of |a_out|^2
    double stored_write = 0.0;    ///< sum |S_j(T_w)|^2
    double stored_read = 0.0;     ///< sum |S_j(T_r)|^2
    double eta_w = 0.0;
    double eta_r = 0.0;
    double eta_tot = 0.0;

    SimulationDiagnostics diagnostics;
};

/// Shell-model write-store-read sequence from vacuum.
SimulationResult run_sequence(const SimulationConfig& config);

/// Same sequence through the collective equations (uniform control only);
/// S_final_write holds the single collective amplitude.
SimulationResult run_collective_sequence(const SimulationConfig& config);

/// Per-ion excitation density |S_j(T_w)|^2 / n_j at each populated shell.
struct DensityPoint {
    double r = 0.0;
    double population = 0.0;
    double density = 0.0;
};
std::vector<DensityPoint> radial_excitation_density(std::span<const cplx> s_final_write,
                                                    const ShellGrid& grid);

/// Composite trapezoid of |f|^2 over samples [first, last].
double trapezoid_intensity(std::span<const double> t, std::span<const cplx> f, std::size_t first,
                           std::size_t last);

}  // namespace eitmem
