#pragma once

#include <cstddef>

namespace orient::kernels {

// Inner-loop primitives behind the matrix and evaluation code. Every entry
// exists as a plain scalar reference implementation and (on x86-64 hardware
// that supports it) an AVX2+FMA variant. The active table is chosen once per
// process; set ORIENT_SIMD=scalar or ORIENT_SIMD=avx2 to force a lane.
//
// The two lanes may differ in the last bits (different summation order), but
// a given build on a given machine always picks the same lane, so results
// are reproducible run to run.
struct Ops {
    const char* name;

    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    double (*sq_dist)(const double* x, const double* y, std::size_t n);
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // h (d x d row-major) += w * outer(b, a), i.e. h[p][q] += w * b[p] * a[q]
    void (*outer_acc)(double w, const double* b, const double* a, double* h, std::size_t d);
    // y = x * m for a row vector x (len k) and row-major m (k x c); y has len c
    void (*vec_mat)(const double* x, const double* m, double* y, std::size_t k, std::size_t c);
};

const Ops& scalar_ops();

// Null when the CPU (or the build) lacks AVX2/FMA.
const Ops* avx2_ops();

// The table selected for this process.
const Ops& ops();

}  // namespace orient::kernels
