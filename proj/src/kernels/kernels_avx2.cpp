// Built with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check.

#include <immintrin.h>

#include "cqed/kernels.hpp"

namespace cqed::kernels {
namespace {

// Two complex numbers per 256-bit register: [re0, im0, re1, im1].
inline cplx hsum_complex(__m256d v) {
    const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

void matvec_minus_i(const cplx* m, const cplx* x, cplx* y, std::size_t n) {
    const auto* md = reinterpret_cast<const double*>(m);
    const auto* xd = reinterpret_cast<const double*>(x);
    const std::size_t n2 = n & ~std::size_t{1};
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = md + 2 * i * n;
        // acc_r accumulates m_re * (x_re, x_im); acc_i accumulates m_im * (x_im, x_re).
        __m256d acc_r = _mm256_setzero_pd();
        __m256d acc_i = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j < n2; j += 2) {
            const __m256d mv = _mm256_loadu_pd(row + 2 * j);
            const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
            const __m256d mr = _mm256_movedup_pd(mv);
            const __m256d mi = _mm256_permute_pd(mv, 0xF);
            const __m256d xs = _mm256_permute_pd(xv, 0x5);
            acc_r = _mm256_fmadd_pd(mr, xv, acc_r);
            acc_i = _mm256_fmadd_pd(mi, xs, acc_i);
        }
        cplx s = hsum_complex(_mm256_addsub_pd(acc_r, acc_i));
        double re = s.real(), im = s.imag();
        for (; j < n; ++j) {
            const double mr = row[2 * j], mi = row[2 * j + 1];
            const double xr = xd[2 * j], xi = xd[2 * j + 1];
            re += mr * xr - mi * xi;
            im += mr * xi + mi * xr;
        }
        y[i] = cplx(im, -re);
    }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t len) {
    const auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const std::size_t len2 = len & ~std::size_t{1};
    std::size_t k = 0;
    for (; k < len2; k += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
        const __m256d xs = _mm256_permute_pd(xv, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
        _mm256_storeu_pd(yd + 2 * k, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * k), prod));
    }
    for (; k < len; ++k) {
        const double xr = xd[2 * k], xi = xd[2 * k + 1];
        yd[2 * k] += a.real() * xr - a.imag() * xi;
        yd[2 * k + 1] += a.real() * xi + a.imag() * xr;
    }
}

double norm2(const cplx* x, std::size_t len) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const std::size_t total = 2 * len;
    const std::size_t total4 = total & ~std::size_t{3};
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k < total4; k += 4) {
        const __m256d v = _mm256_loadu_pd(xd + k);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    const cplx h = hsum_complex(acc);
    double s = h.real() + h.imag();
    for (; k < total; ++k) s += xd[k] * xd[k];
    return s;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{"avx2", &matvec_minus_i, &axpy, &norm2};
}

}  // namespace cqed::kernels
