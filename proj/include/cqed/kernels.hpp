#pragma once

// Dense complex inner loops used by the integrator. Each variant provides the
// same table; the scalar one is the reference the SIMD variants are tested
// against. Matrices are row-major n x n.

#include <complex>
#include <cstddef>
#include <string_view>

namespace cqed::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;
    // y = -i M x
    void (*matvec_minus_i)(const cplx* m, const cplx* x, cplx* y, std::size_t n);
    // y += a x
    void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t len);
    // sum |x_k|^2
    double (*norm2)(const cplx* x, std::size_t len);
};

const KernelTable& scalar();

// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2();

// Chosen once: the widest supported variant, unless CQED_KERNELS=scalar is set
// in the environment.
const KernelTable& active();

namespace detail {
extern const KernelTable kScalarTable;
#if defined(CQED_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace cqed::kernels
