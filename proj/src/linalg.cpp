#include "orient/linalg.hpp"

#include <cmath>
#include <cstring>

#include "orient/error.hpp"
#include "orient/kernels.hpp"
#include "orient/parallel.hpp"

namespace orient {
namespace {

constexpr std::size_t kBlockRows = 2048;

void check_weights(std::size_t n, std::span<const double> weights) {
    if (weights.empty()) return;
    if (weights.size() != n) raise(errc::dim_mismatch, "weights length differs from row count");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) raise(errc::malformed_input, "weights must be nonnegative");
        total += w;
    }
    if (total <= 0.0) raise(errc::zero_weights, "weights sum to zero");
}

}  // namespace

std::vector<double> centroid(const Matrix& points, std::span<const double> weights) {
    if (points.rows == 0) raise(errc::empty_intersection, "centroid of zero rows");
    check_weights(points.rows, weights);
    const std::size_t d = points.cols;
    std::vector<double> acc(d, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows; ++i) {
        double w = weights.empty() ? 1.0 : weights[i];
        kernels::ops().axpy(w, points.row(i).data(), acc.data(), d);
        total += w;
    }
    for (double& v : acc) v /= total;
    return acc;
}

Matrix cross_covariance(const Matrix& a, const Matrix& b, std::span<const double> weights) {
    if (a.rows != b.rows || a.cols != b.cols)
        raise(errc::dim_mismatch, "cross_covariance: shapes differ");
    check_weights(a.rows, weights);
    const std::size_t d = a.cols;
    const std::size_t n = a.rows;
    const std::size_t nblocks = n == 0 ? 0 : (n + kBlockRows - 1) / kBlockRows;

    // One partial H per block; summed in block order afterwards so the
    // floating-point result does not depend on the thread count.
    std::vector<Matrix> partial(nblocks, Matrix(d, d));
    parallel_blocks(n, kBlockRows, [&](std::size_t block, std::size_t begin, std::size_t end) {
        Matrix& h = partial[block];
        const auto& k = kernels::ops();
        for (std::size_t i = begin; i < end; ++i) {
            double w = weights.empty() ? 1.0 : weights[i];
            k.outer_acc(w, b.row(i).data(), a.row(i).data(), h.values.data(), d);
        }
    });

    Matrix h(d, d);
    for (const Matrix& p : partial)
        for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] += p.values[i];
    return h;
}

double frobenius_sq(const Matrix& m) {
    return kernels::ops().sum_sq(m.values.data(), m.values.size());
}

Matrix cholesky_solve(const Matrix& m, const Matrix& rhs) {
    if (m.rows != m.cols) raise(errc::dim_mismatch, "cholesky_solve: matrix not square");
    if (rhs.rows != m.rows) raise(errc::dim_mismatch, "cholesky_solve: rhs rows differ");
    const std::size_t d = m.rows;

    // Lower-triangular factor, m = L L^T.
    Matrix l(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = m(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(acc > 0.0)) raise(errc::singular_matrix, "cholesky_solve: matrix not positive definite");
                l(i, i) = std::sqrt(acc);
            } else {
                l(i, j) = acc / l(j, j);
            }
        }
    }

    // Forward then back substitution per right-hand-side column.
    Matrix x = rhs;
    for (std::size_t c = 0; c < rhs.cols; ++c) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = x(i, c);
            for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * x(k, c);
            x(i, c) = acc / l(i, i);
        }
        for (std::size_t ii = d; ii-- > 0;) {
            double acc = x(ii, c);
            for (std::size_t k = ii + 1; k < d; ++k) acc -= l(k, ii) * x(k, c);
            x(ii, c) = acc / l(ii, ii);
        }
    }
    return x;
}

}  // namespace orient
