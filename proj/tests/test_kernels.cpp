#include "eitmem/kernels.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"

using namespace eitmem::kernels;

namespace {

struct Fixture {
    std::vector<double> coupling, control, pr, pi, sr, si, dpr, dpi, dsr, dsi;

    explicit Fixture(std::size_t n)
        : coupling(n), control(n), pr(n), pi(n), sr(n), si(n), dpr(n), dpi(n), dsr(n), dsi(n) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = static_cast<double>(j) + 0.5;
            coupling[j] = 3e4 * std::sqrt(x) * std::exp(-x / 50.0);
            control[j] = std::cos(x / 40.0);
            pr[j] = std::sin(2.1 * x);
            pi[j] = std::cos(0.3 * x);
            sr[j] = 1e-2 * x;
            si[j] = -std::sin(x * x);
        }
    }

    ComplexSum run(ShellRhsFn fn) {
        ShellRhsArgs a;
        a.coupling = coupling;
        a.control = control;
        a.gamma = 7.1e7;
        a.gamma0 = 2e3;
        a.omega = 5e6;
        a.a_re = -0.4;
        a.a_im = 1.1;
        a.p_re = pr;
        a.p_im = pi;
        a.s_re = sr;
        a.s_im = si;
        a.dp_re = dpr;
        a.dp_im = dpi;
        a.ds_re = dsr;
        a.ds_im = dsi;
        return fn(a);
    }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernel matches the shell equations") {
    Fixture f(7);
    const ComplexSum sum = f.run(shell_rhs_scalar);
    double sre = 0.0, sim = 0.0;
    for (std::size_t j = 0; j < 7; ++j) {
        const std::complex<double> a{-0.4, 1.1}, p{f.pr[j], f.pi[j]}, s{f.sr[j], f.si[j]};
        const std::complex<double> I{0.0, 1.0};
        const auto dp = -7.1e7 * p + I * f.coupling[j] * a + I * 5e6 * f.control[j] * s;
        const auto ds = -2e3 * s + I * 5e6 * f.control[j] * p;
        CHECK(f.dpr[j] == doctest::Approx(dp.real()).epsilon(1e-14));
        CHECK(f.dpi[j] == doctest::Approx(dp.imag()).epsilon(1e-14));
        CHECK(f.dsr[j] == doctest::Approx(ds.real()).epsilon(1e-14));
        CHECK(f.dsi[j] == doctest::Approx(ds.imag()).epsilon(1e-14));
        sre += f.coupling[j] * p.real();
        sim += f.coupling[j] * p.imag();
    }
    CHECK(sum.re == doctest::Approx(sre).epsilon(1e-13));
    CHECK(sum.im == doctest::Approx(sim).epsilon(1e-13));
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
    const auto all = available_kernels();
    REQUIRE(!all.empty());
    CHECK(all.front().name == "scalar");
    for (const auto& k : all) {
        for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 109u, 1000u}) {
            CAPTURE(k.name);
            CAPTURE(n);
            Fixture ref(n), got(n);
            const ComplexSum sr = ref.run(shell_rhs_scalar);
            const ComplexSum sg = got.run(k.shell_rhs);
            double scale = 1.0;
            for (double v : ref.dpr) scale = std::max(scale, std::abs(v));
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(std::abs(got.dpr[j] - ref.dpr[j]) <= 1e-14 * scale);
                CHECK(std::abs(got.dpi[j] - ref.dpi[j]) <= 1e-14 * scale);
                CHECK(std::abs(got.dsr[j] - ref.dsr[j]) <= 1e-14 * scale);
                CHECK(std::abs(got.dsi[j] - ref.dsi[j]) <= 1e-14 * scale);
            }
            const double sum_scale = std::max(1.0, std::abs(sr.re) + std::abs(sr.im)) * (1.0 + n);
            CHECK(std::abs(sg.re - sr.re) <= 1e-14 * sum_scale);
            CHECK(std::abs(sg.im - sr.im) <= 1e-14 * sum_scale);
        }
    }
}

TEST_CASE("kernel selection") {
    const std::string before(active_kernel().name);
    CHECK(find_kernel("scalar") != nullptr);
    CHECK(find_kernel("no-such-kernel") == nullptr);
    CHECK_FALSE(select_kernel("no-such-kernel"));
    CHECK(std::string(active_kernel().name) == before);
    for (const auto& k : available_kernels()) {
        CHECK(select_kernel(k.name));
        CHECK(active_kernel().name == k.name);
    }
    CHECK(select_kernel(before));
}

}  // TEST_SUITE
