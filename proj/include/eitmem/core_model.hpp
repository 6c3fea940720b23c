#pragma once

// Crystal geometry, transverse mode functions and the cylindrical shell
// discretization of a uniform-density ion Coulomb crystal.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace eitmem {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Coupling and decay rates, all stored as angular frequencies (rad/s).
struct SystemRates {
    double g = 0.0;       ///< single-ion coupling at the mode centre
    double kappa = 0.0;   ///< cavity field decay
    double gamma = 0.0;   ///< optical dipole decay
    double gamma0 = 0.0;  ///< ground-state coherence decay

    /// Builds rates from values quoted as ω/2π in MHz.
    static SystemRates from_mhz(double g_mhz, double kappa_mhz, double gamma_mhz,
                                double gamma0_mhz = 0.0);

    void validate() const;
    bool operator==(const SystemRates&) const = default;
};

/// Uniform-density cylinder. SI units: rho in m^-3, length and radius in m.
struct CrystalGeometry {
    double rho = 0.0;
    double length = 0.0;
    double radius = 0.0;

    /// Ions per unit cross-sectional area (rho * L).
    double areal_density() const { return rho * length; }
    double total_ions() const;

    void validate() const;
    bool operator==(const CrystalGeometry&) const = default;
};

enum class ModeKind { TEM00, LG01, Uniform };

std::string_view to_string(ModeKind kind);
ModeKind parse_mode_kind(std::string_view name);

struct ModeProfile {
    ModeKind kind = ModeKind::TEM00;
    double waist = 0.0;  ///< 1/e amplitude radius (m); ignored for Uniform

    static ModeProfile tem00(double waist) { return {ModeKind::TEM00, waist}; }
    static ModeProfile lg01(double waist) { return {ModeKind::LG01, waist}; }
    static ModeProfile uniform() { return {ModeKind::Uniform, 0.0}; }

    bool is_uniform() const { return kind == ModeKind::Uniform; }
    void validate() const;
    bool operator==(const ModeProfile&) const = default;
};

/// Dimensionless transverse amplitude of `mode` at radius r (m). Throws on r < 0.
double mode_amplitude(const ModeProfile& mode, double r);

/// Concentric shells of equal thickness. Populations are real-valued
/// mean-field ion counts.
struct ShellGrid {
    double thickness = 0.0;
    std::vector<double> radii;        ///< shell mid-radii r_j = d (j - 1/2)
    std::vector<double> populations;  ///< n_j = rho L pi d^2 (2j - 1)

    std::size_t size() const { return radii.size(); }
    double total_population() const;
};

ShellGrid build_shell_grid(const CrystalGeometry& geom, std::size_t n_shells);

/// Shell count such that d = min(w_p, w_c, R) / 40, capped at 2000.
std::size_t default_shell_count(const CrystalGeometry& geom, const ModeProfile& probe,
                                const ModeProfile& control);

/// N = sum_j n_j Psi_p(r_j)^2.
double effective_atom_number(const ShellGrid& grid, const ModeProfile& probe);

/// C = g^2 N / (2 kappa gamma).
double cooperativity(const SystemRates& rates, double n_eff);

/// Optimal write-store-read efficiency in the collective limit, (2C/(1+2C))^2.
double analytic_optimal_efficiency(double cooperativity);

}  // namespace eitmem
