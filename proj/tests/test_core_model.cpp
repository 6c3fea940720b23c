#include "eitmem/core_model.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace eitmem;

namespace {

// Closed-form effective ion numbers for a uniform disc of radius R:
//   TEM00: rho L pi w^2 / 2 (1 - e^-U),           U = 2 R^2 / w^2
//   LG01:  rho L pi w^2 / 2 (1 - (1 + U) e^-U)
double n_tem00_exact(double areal, double w, double R) {
    const double u = 2.0 * R * R / (w * w);
    return areal * kPi * w * w / 2.0 * (1.0 - std::exp(-u));
}

double n_lg01_exact(double areal, double w, double R) {
    const double u = 2.0 * R * R / (w * w);
    return areal * kPi * w * w / 2.0 * (1.0 - (1.0 + u) * std::exp(-u));
}

const CrystalGeometry kCrystal{6.1e14, 3.0e-3, 100.0e-6};

}  // namespace

TEST_SUITE("core_model") {

TEST_CASE("rates convert from MHz to angular frequency") {
    const SystemRates r = SystemRates::from_mhz(0.37, 1.5, 11.3);
    CHECK(r.g == doctest::Approx(2.0 * 3.141592653589793 * 0.37e6).epsilon(1e-15));
    CHECK(r.kappa == doctest::Approx(2.0 * 3.141592653589793 * 1.5e6).epsilon(1e-15));
    CHECK(r.gamma0 == 0.0);
    CHECK_THROWS_AS(SystemRates::from_mhz(-1.0, 1.0, 1.0).validate(), std::invalid_argument);
}

TEST_CASE("geometry preconditions") {
    CHECK_NOTHROW(kCrystal.validate());
    CHECK_THROWS_AS((CrystalGeometry{0.0, 1e-3, 1e-5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((CrystalGeometry{1e14, -1e-3, 1e-5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((CrystalGeometry{1e14, 1e-3, -1e-5}).validate(), std::invalid_argument);
    CHECK_NOTHROW((CrystalGeometry{1e14, 1e-3, 0.0}).validate());
    CHECK(kCrystal.total_ions() == doctest::Approx(6.1e14 * 3e-3 * kPi * 1e-8));
}

TEST_CASE("mode amplitudes") {
    const auto tem = ModeProfile::tem00(37e-6);
    const auto lg = ModeProfile::lg01(37e-6);
    CHECK(mode_amplitude(tem, 0.0) == 1.0);
    CHECK(mode_amplitude(tem, 37e-6) == doctest::Approx(std::exp(-1.0)));
    CHECK(mode_amplitude(lg, 0.0) == 0.0);
    // LG01 peaks at r = w / sqrt(2).
    const double rp = 37e-6 / std::sqrt(2.0);
    CHECK(mode_amplitude(lg, rp) > mode_amplitude(lg, 0.99 * rp));
    CHECK(mode_amplitude(lg, rp) > mode_amplitude(lg, 1.01 * rp));
    CHECK(mode_amplitude(ModeProfile::uniform(), 1.0) == 1.0);
    for (double r = 0.0; r < 2e-4; r += 1e-6) CHECK(std::abs(mode_amplitude(tem, r)) <= 1.0);
    CHECK_THROWS_AS(mode_amplitude(tem, -1e-9), std::invalid_argument);
    CHECK_THROWS_AS(ModeProfile::tem00(0.0).validate(), std::invalid_argument);
    CHECK_NOTHROW(ModeProfile::uniform().validate());
}

TEST_CASE("mode kind names round-trip") {
    for (ModeKind k : {ModeKind::TEM00, ModeKind::LG01, ModeKind::Uniform})
        CHECK(parse_mode_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_mode_kind("hermite"), std::invalid_argument);
}

TEST_CASE("shell grid follows the annulus-area formula") {
    const ShellGrid g = build_shell_grid(kCrystal, 50);
    REQUIRE(g.size() == 50);
    CHECK(g.thickness * 50 == doctest::Approx(100e-6));
    const double d = g.thickness;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double j = static_cast<double>(i + 1);
        CHECK(g.radii[i] == doctest::Approx(d * (j - 0.5)));
        const double annulus = kPi * (std::pow(j * d, 2) - std::pow((j - 1) * d, 2));
        CHECK(g.populations[i] == doctest::Approx(kCrystal.areal_density() * annulus).epsilon(1e-12));
    }
    CHECK(std::abs(g.total_population() / kCrystal.total_ions() - 1.0) < 1e-12);
    CHECK_THROWS_AS(build_shell_grid(kCrystal, 0), std::invalid_argument);
}

TEST_CASE("single shell holds every ion") {
    const ShellGrid g = build_shell_grid(kCrystal, 1);
    CHECK(g.radii[0] == doctest::Approx(50e-6));
    CHECK(g.populations[0] == doctest::Approx(kCrystal.total_ions()));
}

TEST_CASE("default shell count resolves the narrowest scale") {
    const auto tem = ModeProfile::tem00(37e-6);
    const std::size_t n = default_shell_count(kCrystal, tem, ModeProfile::uniform());
    CHECK(kCrystal.radius / static_cast<double>(n) <= 37e-6 / 40.0 * (1 + 1e-12));
    CHECK(kCrystal.radius / static_cast<double>(n) <= 37e-6 / 20.0);
    // Small crystals are resolved in units of R.
    CrystalGeometry small = kCrystal;
    small.radius = 5e-6;
    CHECK(default_shell_count(small, tem, tem) == 40);
    // Cap.
    CrystalGeometry huge = kCrystal;
    huge.radius = 1.0;
    CHECK(default_shell_count(huge, tem, tem) == 2000);
}

TEST_CASE("effective ion number matches the Gaussian integrals") {
    const double w = 37e-6;
    for (double ratio : {0.3, 0.95, 1.5, 100e-6 / 37e-6, 3.0}) {
        CrystalGeometry g = kCrystal;
        g.radius = ratio * w;
        const auto tem = ModeProfile::tem00(w);
        const auto lg = ModeProfile::lg01(w);
        const ShellGrid grid = build_shell_grid(g, default_shell_count(g, tem, tem));
        // Midpoint rule with d <= w/40: relative error well below 1e-3.
        CHECK(effective_atom_number(grid, tem) ==
              doctest::Approx(n_tem00_exact(g.areal_density(), w, g.radius)).epsilon(1e-3));
        CHECK(effective_atom_number(grid, lg) ==
              doctest::Approx(n_lg01_exact(g.areal_density(), w, g.radius)).epsilon(2e-3));
    }
}

TEST_CASE("effective ion number converges quadratically in the shell thickness") {
    const auto tem = ModeProfile::tem00(37e-6);
    const double exact = n_tem00_exact(kCrystal.areal_density(), 37e-6, kCrystal.radius);
    const double e1 = std::abs(effective_atom_number(build_shell_grid(kCrystal, 100), tem) - exact);
    const double e2 = std::abs(effective_atom_number(build_shell_grid(kCrystal, 200), tem) - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("uniform probe counts every ion") {
    const ShellGrid g = build_shell_grid(kCrystal, 30);
    CHECK(effective_atom_number(g, ModeProfile::uniform()) == doctest::Approx(kCrystal.total_ions()));
}

TEST_CASE("cooperativity and analytic bound") {
    const SystemRates r = SystemRates::from_mhz(0.37, 1.5, 11.3);
    const double n = 3936.0;
    const double c = cooperativity(r, n);
    CHECK(c == doctest::Approx(r.g * r.g * n / (2.0 * r.kappa * r.gamma)));
    // g^2 N / (2 kappa gamma) in MHz units: 0.37^2 * 3936 / (2 * 1.5 * 11.3) = 15.89.
    CHECK(c == doctest::Approx(0.37 * 0.37 * 3936.0 / (2.0 * 1.5 * 11.3)));
    CHECK(cooperativity(r, 0.0) == 0.0);
    CHECK_THROWS_AS(cooperativity(SystemRates::from_mhz(0.37, 0.0, 11.3), n), std::invalid_argument);
    CHECK_THROWS_AS(cooperativity(SystemRates::from_mhz(0.37, 1.5, 0.0), n), std::invalid_argument);

    CHECK(analytic_optimal_efficiency(0.0) == 0.0);
    CHECK(analytic_optimal_efficiency(10.0) == doctest::Approx(std::pow(20.0 / 21.0, 2)));
    CHECK(analytic_optimal_efficiency(1e9) == doctest::Approx(1.0));
}

}  // TEST_SUITE
