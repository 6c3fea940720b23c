#include "eitmem/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace eitmem {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Norsett & Wanner, dense output of DOPRI5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

// Per-component magnitude used in the error weights.
void magnitudes(std::span<const double> y, bool complex_halves, std::vector<double>& out) {
    const std::size_t n = y.size();
    if (!complex_halves) {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(y[i]);
        return;
    }
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const double m = std::hypot(y[i], y[i + half]);
        out[i] = m;
        out[i + half] = m;
    }
}

}  // namespace

void IntegratorOptions::validate() const {
    if (!(rtol >= 1e-12 && rtol <= 1e-4))
        throw std::invalid_argument("IntegratorOptions: rtol must lie in [1e-12, 1e-4]");
    if (!(atol > 0.0)) throw std::invalid_argument("IntegratorOptions: atol must be > 0");
    if (!(max_step > 0.0)) throw std::invalid_argument("IntegratorOptions: max_step must be > 0");
}

IntegrationStats& IntegrationStats::operator+=(const IntegrationStats& o) {
    accepted += o.accepted;
    rejected += o.rejected;
    rhs_evals += o.rhs_evals;
    error_estimate += o.error_estimate;
    return *this;
}

IntegrationStats integrate(const RhsFunction& rhs, std::span<double> y, double t0, double t1,
                           std::span<const double> sample_times, const SampleObserver& observe,
                           const IntegratorOptions& opts) {
    opts.validate();
    if (!(t1 > t0)) throw std::invalid_argument("integrate: t_span must satisfy t0 < t1");

    const std::size_t n = y.size();
    IntegrationStats stats;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), yout(n);
    std::vector<double> r1(n), r2(n), r3(n), r4(n), r5(n);
    std::vector<double> mag0(n), mag1(n);
    if (opts.complex_halves && n % 2 != 0)
        throw std::invalid_argument("integrate: complex_halves needs an even state size");

    std::size_t next_sample = 0;
    auto emit_exact = [&](double t, std::span<const double> state) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
            if (observe) observe(next_sample, sample_times[next_sample], state);
            ++next_sample;
        }
    };

    rhs(t0, y, k1);
    ++stats.rhs_evals;

    // Samples at (or before) t0.
    emit_exact(t0, y);

    const double span = t1 - t0;
    double h = opts.initial_step;
    if (!(h > 0.0)) {
        // Starting step from the ratio of solution to derivative magnitudes.
        double dnf = 0.0, dny = 0.0;
        magnitudes(y, opts.complex_halves, mag0);
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = opts.atol + opts.rtol * mag0[i];
            dnf += (k1[i] / sk) * (k1[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * span : 0.01 * std::sqrt(dny / dnf);
        h = std::min(h, opts.max_step);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k1[i];
        rhs(t0 + h, ytmp, k2);
        ++stats.rhs_evals;
        double der2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = opts.atol + opts.rtol * mag0[i];
            const double v = (k2[i] - k1[i]) / sk;
            der2 += v * v;
        }
        der2 = std::sqrt(der2 / static_cast<double>(std::max<std::size_t>(n, 1))) / h;
        const double der12 = std::max(std::abs(der2), std::sqrt(dnf / static_cast<double>(std::max<std::size_t>(n, 1))));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6 * span, h * 1e-3)
                                         : std::pow(0.01 / der12, 0.2);
        h = std::min({100.0 * h, h1, opts.max_step, span});
    }

    double t = t0;
    bool last_rejected = false;
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon();

    while (t < t1) {
        if (stats.accepted + stats.rejected >= opts.max_steps) {
            std::ostringstream msg;
            msg << "integrate: step budget exhausted at t = " << t;
            throw IntegrationError(msg.str(), t);
        }
        if (h < h_floor * std::max(std::abs(t), span)) {
            std::ostringstream msg;
            msg << "integrate: step size underflow (h = " << h << ") at t = " << t;
            throw IntegrationError(msg.str(), t);
        }
        bool final_step = false;
        if (t + h >= t1 || t + 1.01 * h >= t1) {
            h = t1 - t;
            final_step = true;
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double t_new = final_step ? t1 : t + h;
        rhs(t_new, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(t_new, ynew, k7);
        stats.rhs_evals += 6;

        magnitudes(y, opts.complex_halves, mag0);
        magnitudes(ynew, opts.complex_halves, mag1);
        double err_sq = 0.0;
        double err_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double s = e / (opts.atol + opts.rtol * std::max(mag0[i], mag1[i]));
            err_sq += s * s;
            err_max = std::max(err_max, std::abs(e));
        }
        const double err = n == 0 ? 0.0 : std::sqrt(err_sq / static_cast<double>(n));

        if (!std::isfinite(err)) {
            std::ostringstream msg;
            msg << "integrate: non-finite error estimate at t = " << t;
            throw IntegrationError(msg.str(), t);
        }

        if (err <= 1.0) {
            ++stats.accepted;
            stats.error_estimate += err_max;

            if (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    r1[i] = y[i];
                    r2[i] = ydiff;
                    r3[i] = bspl;
                    r4[i] = ydiff - h * k7[i] - bspl;
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                while (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
                    const double ts = sample_times[next_sample];
                    if (ts == t_new) {
                        if (observe) observe(next_sample, ts, ynew);
                    } else {
                        const double theta = (ts - t) / h;
                        const double theta1 = 1.0 - theta;
                        for (std::size_t i = 0; i < n; ++i)
                            yout[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
                        if (observe) observe(next_sample, ts, yout);
                    }
                    ++next_sample;
                }
            }

            std::copy(ynew.begin(), ynew.end(), y.begin());
            std::swap(k1, k7);  // first-same-as-last
            t = t_new;
            if (final_step) break;

            double fac = err == 0.0 ? kMaxFactor : kSafety * std::pow(err, -0.2);
            fac = std::clamp(fac, kMinFactor, kMaxFactor);
            if (last_rejected) fac = std::min(fac, 1.0);
            h = std::min(h * fac, opts.max_step);
            last_rejected = false;
        } else {
            ++stats.rejected;
            const double fac = std::max(kMinFactor, kSafety * std::pow(err, -0.2));
            h *= fac;
            last_rejected = true;
        }
    }
    return stats;
}

}  // namespace eitmem
