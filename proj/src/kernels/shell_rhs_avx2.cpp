// Compiled with -mavx2 -mfma; only called after a runtime CPU check.
#include "eitmem/kernels.hpp"

#include <immintrin.h>

namespace eitmem::kernels {

namespace {
inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

ComplexSum shell_rhs_avx2(const ShellRhsArgs& args) {
    const std::size_t n = args.coupling.size();
    const double* cp = args.coupling.data();
    const double* kp = args.control.data();
    const double* prp = args.p_re.data();
    const double* pip = args.p_im.data();
    const double* srp = args.s_re.data();
    const double* sip = args.s_im.data();
    double* dprp = args.dp_re.data();
    double* dpip = args.dp_im.data();
    double* dsrp = args.ds_re.data();
    double* dsip = args.ds_im.data();

    const __m256d neg_gamma = _mm256_set1_pd(-args.gamma);
    const __m256d neg_gamma0 = _mm256_set1_pd(-args.gamma0);
    const __m256d omega = _mm256_set1_pd(args.omega);
    const __m256d a_re = _mm256_set1_pd(args.a_re);
    const __m256d a_im = _mm256_set1_pd(args.a_im);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d c = _mm256_loadu_pd(cp + j);
        const __m256d w = _mm256_mul_pd(omega, _mm256_loadu_pd(kp + j));
        const __m256d pr = _mm256_loadu_pd(prp + j);
        const __m256d pi = _mm256_loadu_pd(pip + j);
        const __m256d sr = _mm256_loadu_pd(srp + j);
        const __m256d si = _mm256_loadu_pd(sip + j);

        __m256d dpr = _mm256_mul_pd(neg_gamma, pr);
        dpr = _mm256_fnmadd_pd(c, a_im, dpr);
        dpr = _mm256_fnmadd_pd(w, si, dpr);
        __m256d dpi = _mm256_mul_pd(neg_gamma, pi);
        dpi = _mm256_fmadd_pd(c, a_re, dpi);
        dpi = _mm256_fmadd_pd(w, sr, dpi);
        const __m256d dsr = _mm256_fnmadd_pd(w, pi, _mm256_mul_pd(neg_gamma0, sr));
        const __m256d dsi = _mm256_fmadd_pd(w, pr, _mm256_mul_pd(neg_gamma0, si));

        _mm256_storeu_pd(dprp + j, dpr);
        _mm256_storeu_pd(dpip + j, dpi);
        _mm256_storeu_pd(dsrp + j, dsr);
        _mm256_storeu_pd(dsip + j, dsi);

        acc_re = _mm256_fmadd_pd(c, pr, acc_re);
        acc_im = _mm256_fmadd_pd(c, pi, acc_im);
    }

    ComplexSum sum{hsum(acc_re), hsum(acc_im)};
    for (; j < n; ++j) {
        const double c = cp[j];
        const double w = args.omega * kp[j];
        dprp[j] = -args.gamma * prp[j] - c * args.a_im - w * sip[j];
        dpip[j] = -args.gamma * pip[j] + c * args.a_re + w * srp[j];
        dsrp[j] = -args.gamma0 * srp[j] - w * pip[j];
        dsip[j] = -args.gamma0 * sip[j] + w * prp[j];
        sum.re += c * prp[j];
        sum.im += c * pip[j];
    }
    return sum;
}

}  // namespace eitmem::kernels
