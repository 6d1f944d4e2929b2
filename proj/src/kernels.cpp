#include "orient/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string_view>

namespace orient::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double sq_dist_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double diff = x[i] - y[i];
        acc += diff * diff;
    }
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void outer_acc_scalar(double w, const double* b, const double* a, double* h, std::size_t d) {
    for (std::size_t p = 0; p < d; ++p) {
        const double wb = w * b[p];
        double* hp = h + p * d;
        for (std::size_t q = 0; q < d; ++q) hp[q] += wb * a[q];
    }
}

void vec_mat_scalar(const double* x, const double* m, double* y, std::size_t k, std::size_t c) {
    std::memset(y, 0, c * sizeof(double));
    for (std::size_t p = 0; p < k; ++p) {
        const double xp = x[p];
        const double* mp = m + p * c;
        for (std::size_t q = 0; q < c; ++q) y[q] += xp * mp[q];
    }
}

constexpr Ops kScalarOps = {
    "scalar", dot_scalar, sum_sq_scalar, sq_dist_scalar,
    axpy_scalar, outer_acc_scalar, vec_mat_scalar,
};

const Ops& select() {
    if (const char* force = std::getenv("ORIENT_SIMD")) {
        std::string_view want(force);
        if (want == "scalar") return kScalarOps;
        if (want == "avx2" && avx2_ops() != nullptr) return *avx2_ops();
        // unknown value or unavailable lane: fall through to auto
    }
    if (const Ops* best = avx2_ops()) return *best;
    return kScalarOps;
}

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

const Ops& ops() {
    static const Ops& active = select();
    return active;
}

}  // namespace orient::kernels
