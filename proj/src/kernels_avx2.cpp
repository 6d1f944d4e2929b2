// AVX2+FMA lane of the kernel table. Compiled with -mavx2 -mfma on x86-64;
// on other targets this file degrades to a stub that reports the lane as
// unavailable.

#include "orient/kernels.hpp"

#if defined(ORIENT_HAVE_AVX2)

#include <immintrin.h>

#include <cstring>

namespace orient::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

double sum_sq_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i] * x[i];
    return total;
}

double sq_dist_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        double diff = x[i] - y[i];
        total += diff * diff;
    }
    return total;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void outer_acc_avx2(double w, const double* b, const double* a, double* h, std::size_t d) {
    for (std::size_t p = 0; p < d; ++p) {
        axpy_avx2(w * b[p], a, h + p * d, d);
    }
}

void vec_mat_avx2(const double* x, const double* m, double* y, std::size_t k, std::size_t c) {
    std::memset(y, 0, c * sizeof(double));
    for (std::size_t p = 0; p < k; ++p) {
        axpy_avx2(x[p], m + p * c, y, c);
    }
}

constexpr Ops kAvx2Ops = {
    "avx2", dot_avx2, sum_sq_avx2, sq_dist_avx2,
    axpy_avx2, outer_acc_avx2, vec_mat_avx2,
};

bool cpu_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const Ops* avx2_ops() {
    static const Ops* table = cpu_supported() ? &kAvx2Ops : nullptr;
    return table;
}

}  // namespace orient::kernels

#else  // !ORIENT_HAVE_AVX2

namespace orient::kernels {

const Ops* avx2_ops() { return nullptr; }

}  // namespace orient::kernels

#endif
