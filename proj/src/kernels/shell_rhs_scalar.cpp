#include "eitmem/kernels.hpp"

namespace eitmem::kernels {

ComplexSum shell_rhs_scalar(const ShellRhsArgs& args) {
    const std::size_t n = args.coupling.size();
    ComplexSum sum;
    for (std::size_t j = 0; j < n; ++j) {
        const double c = args.coupling[j];
        const double w = args.omega * args.control[j];
        const double pr = args.p_re[j], pi = args.p_im[j];
        const double sr = args.s_re[j], si = args.s_im[j];

        // dP = -gamma P + i c a + i w S
        args.dp_re[j] = -args.gamma * pr - c * args.a_im - w * si;
        args.dp_im[j] = -args.gamma * pi + c * args.a_re + w * sr;
        // dS = -gamma0 S + i w P
        args.ds_re[j] = -args.gamma0 * sr - w * pi;
        args.ds_im[j] = -args.gamma0 * si + w * pr;

        sum.re += c * pr;
        sum.im += c * pi;
    }
    return sum;
}

}  // namespace eitmem::kernels
