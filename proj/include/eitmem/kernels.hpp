#pragma once

// Shell-model right-hand-side kernels. The state is stored structure-of-arrays
// (real and imaginary parts of P_j and S_j in separate arrays) so the per-shell
// update vectorizes directly. One scalar reference plus SIMD variants; the
// active variant is picked at runtime from CPU features, or forced through the
// EITMEM_KERNEL environment variable ("scalar", "avx2", "neon").

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace eitmem::kernels {

struct ShellRhsArgs {
    std::span<const double> coupling;  ///< g sqrt(n_j) Psi_p(r_j)
    std::span<const double> control;   ///< Psi_c(r_j)
    double gamma = 0.0;
    double gamma0 = 0.0;
    double omega = 0.0;
    double a_re = 0.0;
    double a_im = 0.0;
    std::span<const double> p_re, p_im, s_re, s_im;
    std::span<double> dp_re, dp_im, ds_re, ds_im;
};

struct ComplexSum {
    double re = 0.0;
    double im = 0.0;
};

/// Writes dP_j/dt and dS_j/dt and returns sum_j coupling_j * P_j.
using ShellRhsFn = ComplexSum (*)(const ShellRhsArgs&);

struct KernelInfo {
    std::string_view name;
    ShellRhsFn shell_rhs = nullptr;
};

ComplexSum shell_rhs_scalar(const ShellRhsArgs& args);
#if defined(__x86_64__) || defined(_M_X64)
ComplexSum shell_rhs_avx2(const ShellRhsArgs& args);
#endif
#if defined(__aarch64__)
ComplexSum shell_rhs_neon(const ShellRhsArgs& args);
#endif

/// Kernels this binary carries and the CPU can execute, scalar first.
std::vector<KernelInfo> available_kernels();

/// Looks up a runnable kernel by name; nullptr when unavailable.
const KernelInfo* find_kernel(std::string_view name);

/// The kernel used by the dynamics module.
const KernelInfo& active_kernel();

/// Overrides the active kernel. Returns false if `name` is not runnable here.
bool select_kernel(std::string_view name);

}  // namespace eitmem::kernels
