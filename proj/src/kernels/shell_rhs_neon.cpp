// AArch64 only; NEON is part of the base ISA there.
#include "eitmem/kernels.hpp"

#include <arm_neon.h>

namespace eitmem::kernels {

ComplexSum shell_rhs_neon(const ShellRhsArgs& args) {
    const std::size_t n = args.coupling.size();
    const double* cp = args.coupling.data();
    const double* kp = args.control.data();
    const double* prp = args.p_re.data();
    const double* pip = args.p_im.data();
    const double* srp = args.s_re.data();
    const double* sip = args.s_im.data();

    const float64x2_t neg_gamma = vdupq_n_f64(-args.gamma);
    const float64x2_t neg_gamma0 = vdupq_n_f64(-args.gamma0);
    const float64x2_t omega = vdupq_n_f64(args.omega);
    const float64x2_t a_re = vdupq_n_f64(args.a_re);
    const float64x2_t a_im = vdupq_n_f64(args.a_im);
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);

    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t c = vld1q_f64(cp + j);
        const float64x2_t w = vmulq_f64(omega, vld1q_f64(kp + j));
        const float64x2_t pr = vld1q_f64(prp + j);
        const float64x2_t pi = vld1q_f64(pip + j);
        const float64x2_t sr = vld1q_f64(srp + j);
        const float64x2_t si = vld1q_f64(sip + j);

        float64x2_t dpr = vmulq_f64(neg_gamma, pr);
        dpr = vfmsq_f64(dpr, c, a_im);
        dpr = vfmsq_f64(dpr, w, si);
        float64x2_t dpi = vmulq_f64(neg_gamma, pi);
        dpi = vfmaq_f64(dpi, c, a_re);
        dpi = vfmaq_f64(dpi, w, sr);

        vst1q_f64(args.dp_re.data() + j, dpr);
        vst1q_f64(args.dp_im.data() + j, dpi);
        vst1q_f64(args.ds_re.data() + j, vfmsq_f64(vmulq_f64(neg_gamma0, sr), w, pi));
        vst1q_f64(args.ds_im.data() + j, vfmaq_f64(vmulq_f64(neg_gamma0, si), w, pr));

        acc_re = vfmaq_f64(acc_re, c, pr);
        acc_im = vfmaq_f64(acc_im, c, pi);
    }

    ComplexSum sum{vaddvq_f64(acc_re), vaddvq_f64(acc_im)};
    for (; j < n; ++j) {
        const double c = cp[j];
        const double w = args.omega * kp[j];
        args.dp_re[j] = -args.gamma * prp[j] - c * args.a_im - w * sip[j];
        args.dp_im[j] = -args.gamma * pip[j] + c * args.a_re + w * srp[j];
        args.ds_re[j] = -args.gamma0 * srp[j] - w * pip[j];
        args.ds_im[j] = -args.gamma0 * sip[j] + w * prp[j];
        sum.re += c * prp[j];
        sum.im += c * pip[j];
    }
    return sum;
}

}  // namespace eitmem::kernels
