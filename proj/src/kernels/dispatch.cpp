#include <cstdlib>
#include <string_view>

#include "cqed/kernels.hpp"

namespace cqed::kernels {

const KernelTable* avx2() {
#if defined(CQED_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::kAvx2Table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        if (const char* env = std::getenv("CQED_KERNELS"); env && std::string_view(env) == "scalar")
            return scalar();
        if (const KernelTable* t = avx2()) return *t;
        return scalar();
    }();
    return chosen;
}

}  // namespace cqed::kernels
