#include "cqed/kernels.hpp"

namespace cqed::kernels {
namespace {

// Written on the real/imaginary parts so the compiler never routes through
// the NaN-recovering complex multiply helper.
void matvec_minus_i(const cplx* m, const cplx* x, cplx* y, std::size_t n) {
    const auto* md = reinterpret_cast<const double*>(m);
    const auto* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = md + 2 * i * n;
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double mr = row[2 * j], mi = row[2 * j + 1];
            const double xr = xd[2 * j], xi = xd[2 * j + 1];
            re += mr * xr - mi * xi;
            im += mr * xi + mi * xr;
        }
        y[i] = cplx(im, -re);
    }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t len) {
    const double ar = a.real(), ai = a.imag();
    const auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (std::size_t k = 0; k < len; ++k) {
        const double xr = xd[2 * k], xi = xd[2 * k + 1];
        yd[2 * k] += ar * xr - ai * xi;
        yd[2 * k + 1] += ar * xi + ai * xr;
    }
}

double norm2(const cplx* x, std::size_t len) {
    const auto* xd = reinterpret_cast<const double*>(x);
    double s = 0.0;
    for (std::size_t k = 0; k < 2 * len; ++k) s += xd[k] * xd[k];
    return s;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{"scalar", &matvec_minus_i, &axpy, &norm2};
}

const KernelTable& scalar() { return detail::kScalarTable; }

}  // namespace cqed::kernels
