#include "eitmem/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eitmem {

SystemRates SystemRates::from_mhz(double g_mhz, double kappa_mhz, double gamma_mhz,
                                  double gamma0_mhz) {
    const double scale = kTwoPi * 1.0e6;
    return {g_mhz * scale, kappa_mhz * scale, gamma_mhz * scale, gamma0_mhz * scale};
}

void SystemRates::validate() const {
    if (!(g >= 0.0) || !(kappa >= 0.0) || !(gamma >= 0.0) || !(gamma0 >= 0.0))
        throw std::invalid_argument("SystemRates: all rates must be >= 0");
}

double CrystalGeometry::total_ions() const {
    return areal_density() * kPi * radius * radius;
}

void CrystalGeometry::validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("CrystalGeometry: rho must be > 0");
    if (!(length > 0.0)) throw std::invalid_argument("CrystalGeometry: length must be > 0");
    if (!(radius >= 0.0)) throw std::invalid_argument("CrystalGeometry: radius must be >= 0");
}

std::string_view to_string(ModeKind kind) {
    switch (kind) {
        case ModeKind::TEM00: return "tem00";
        case ModeKind::LG01: return "lg01";
        case ModeKind::Uniform: return "uniform";
    }
    return "?";
}

ModeKind parse_mode_kind(std::string_view name) {
    if (name == "tem00" || name == "TEM00") return ModeKind::TEM00;
    if (name == "lg01" || name == "LG01") return ModeKind::LG01;
    if (name == "uniform") return ModeKind::Uniform;
    throw std::invalid_argument("unknown mode kind '" + std::string(name) + "'");
}

void ModeProfile::validate() const {
    if (kind != ModeKind::Uniform && !(waist > 0.0))
        throw std::invalid_argument("ModeProfile: waist must be > 0");
}

double mode_amplitude(const ModeProfile& mode, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("mode_amplitude: radius must be >= 0");
    switch (mode.kind) {
        case ModeKind::TEM00: {
            const double x = r / mode.waist;
            return std::exp(-x * x);
        }
        case ModeKind::LG01: {
            const double x = r / mode.waist;
            return std::sqrt(2.0) * x * std::exp(-x * x);
        }
        case ModeKind::Uniform: return 1.0;
    }
    return 0.0;
}

double ShellGrid::total_population() const {
    return std::accumulate(populations.begin(), populations.end(), 0.0);
}

ShellGrid build_shell_grid(const CrystalGeometry& geom, std::size_t n_shells) {
    if (n_shells == 0) throw std::invalid_argument("build_shell_grid: n_shells must be >= 1");
    geom.validate();

    ShellGrid grid;
    grid.thickness = geom.radius / static_cast<double>(n_shells);
    grid.radii.resize(n_shells);
    grid.populations.resize(n_shells);

    const double d = grid.thickness;
    const double unit = geom.areal_density() * kPi * d * d;
    for (std::size_t i = 0; i < n_shells; ++i) {
        const double j = static_cast<double>(i + 1);
        grid.radii[i] = d * (j - 0.5);
        grid.populations[i] = unit * (2.0 * j - 1.0);
    }
    return grid;
}

std::size_t default_shell_count(const CrystalGeometry& geom, const ModeProfile& probe,
                                const ModeProfile& control) {
    constexpr std::size_t kMaxShells = 2000;
    if (!(geom.radius > 0.0)) return 1;

    double scale = geom.radius;
    if (!probe.is_uniform()) scale = std::min(scale, probe.waist);
    if (!control.is_uniform()) scale = std::min(scale, control.waist);

    const double d = scale / 40.0;
    const auto n = static_cast<std::size_t>(std::ceil(geom.radius / d - 1e-9));
    return std::clamp<std::size_t>(n, 1, kMaxShells);
}

double effective_atom_number(const ShellGrid& grid, const ModeProfile& probe) {
    double n_eff = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double psi = mode_amplitude(probe, grid.radii[j]);
        n_eff += grid.populations[j] * psi * psi;
    }
    return n_eff;
}

double cooperativity(const SystemRates& rates, double n_eff) {
    if (!(rates.kappa > 0.0) || !(rates.gamma > 0.0))
        throw std::invalid_argument("cooperativity: kappa and gamma must be > 0");
    return rates.g * rates.g * n_eff / (2.0 * rates.kappa * rates.gamma);
}

double analytic_optimal_efficiency(double c) {
    const double eta = 2.0 * c / (1.0 + 2.0 * c);
    return eta * eta;
}

}  // namespace eitmem
