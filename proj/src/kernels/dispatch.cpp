#include "eitmem/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace eitmem::kernels {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelInfo kScalar{"scalar", &shell_rhs_scalar};
#if defined(__x86_64__) || defined(_M_X64)
const KernelInfo kAvx2{"avx2", &shell_rhs_avx2};
#endif
#if defined(__aarch64__)
const KernelInfo kNeon{"neon", &shell_rhs_neon};
#endif

const KernelInfo* lookup(std::string_view name) {
    if (name == kScalar.name) return &kScalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (name == kAvx2.name && cpu_has_avx2()) return &kAvx2;
#endif
#if defined(__aarch64__)
    if (name == kNeon.name) return &kNeon;
#endif
    return nullptr;
}

const KernelInfo* best_available() {
    const auto all = available_kernels();
    return lookup(all.back().name);
}

const KernelInfo* initial_kernel() {
    if (const char* env = std::getenv("EITMEM_KERNEL")) {
        if (const KernelInfo* k = lookup(env)) return k;
    }
    return best_available();
}

std::atomic<const KernelInfo*>& active_slot() {
    static std::atomic<const KernelInfo*> slot{initial_kernel()};
    return slot;
}

}  // namespace

std::vector<KernelInfo> available_kernels() {
    std::vector<KernelInfo> out{kScalar};
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) out.push_back(kAvx2);
#endif
#if defined(__aarch64__)
    out.push_back(kNeon);
#endif
    return out;
}

const KernelInfo* find_kernel(std::string_view name) { return lookup(name); }

const KernelInfo& active_kernel() { return *active_slot().load(std::memory_order_acquire); }

bool select_kernel(std::string_view name) {
    const KernelInfo* k = lookup(name);
    if (k == nullptr) return false;
    active_slot().store(k, std::memory_order_release);
    return true;
}

}  // namespace eitmem::kernels
