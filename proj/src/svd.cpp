#include "orient/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "orient/error.hpp"

namespace orient {
namespace {

// Column dot product of a row-major square matrix.
double col_dot(const Matrix& m, std::size_t p, std::size_t q) {
    double acc = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) acc += m(r, p) * m(r, q);
    return acc;
}

// Plane rotation of columns p and q: [p q] <- [p q] * [[c, -s], [s, c]].
void rotate_cols(Matrix& m, std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        double vp = m(r, p);
        double vq = m(r, q);
        m(r, p) = c * vp + s * vq;
        m(r, q) = -s * vp + c * vq;
    }
}

// Appends an orthonormal column for a zero singular value: the standard
// basis vector least represented by the columns already fixed, re-orthogonalized.
void fill_null_column(Matrix& u, std::size_t col) {
    const std::size_t d = u.rows;
    double best_residual = -1.0;
    std::vector<double> candidate(d), best(d);
    for (std::size_t axis = 0; axis < d; ++axis) {
        std::fill(candidate.begin(), candidate.end(), 0.0);
        candidate[axis] = 1.0;
        for (std::size_t j = 0; j < col; ++j) {
            double proj = 0.0;
            for (std::size_t r = 0; r < d; ++r) proj += u(r, j) * candidate[r];
            for (std::size_t r = 0; r < d; ++r) candidate[r] -= proj * u(r, j);
        }
        double norm_sq = std::inner_product(candidate.begin(), candidate.end(),
                                            candidate.begin(), 0.0);
        if (norm_sq > best_residual) {
            best_residual = norm_sq;
            best = candidate;
        }
    }
    double norm = std::sqrt(best_residual);
    for (std::size_t r = 0; r < d; ++r) u(r, col) = best[r] / norm;
}

}  // namespace

SvdResult svd(const Matrix& m, int max_sweeps) {
    if (m.rows != m.cols) raise(errc::dim_mismatch, "svd: matrix not square");
    const std::size_t d = m.rows;
    if (!all_finite(m)) raise(errc::malformed_input, "svd: non-finite entries");

    // Hestenes one-sided Jacobi: orthogonalize the columns of w by plane
    // rotations, accumulating the same rotations into v.  At convergence
    // w = u * diag(sigma) with v orthogonal, i.e. m = u * diag(sigma) * v^T.
    Matrix w = m;
    Matrix v = Matrix::identity(d);
    // A d-term dot product carries rounding noise of roughly d * epsilon
    // relative to the column norms; below that level gamma is noise and
    // rotating on it would cycle forever.
    const double tol = 8.0 * static_cast<double>(d) * std::numeric_limits<double>::epsilon();
    // Rank-deficient inputs leave columns that are pure rotation residue:
    // tiny, yet fully correlated with the real columns, so the ratio test
    // above never passes and sweeps would livelock.  A column whose squared
    // norm falls below the accumulated noise floor of the rotations is
    // numerically zero; deflate it to exact zeros so it stops participating.
    double frob2 = 0.0;
    for (double value : w.values) frob2 += value * value;
    const double eps = std::numeric_limits<double>::epsilon();
    const double deflate = frob2 * static_cast<double>(d) * eps * eps;
    auto zero_column = [&w, d](std::size_t col) {
        for (std::size_t r = 0; r < d; ++r) w(r, col) = 0.0;
    };

    bool converged = d < 2;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        std::size_t rotations = 0;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double alpha = col_dot(w, p, p);
                double beta = col_dot(w, q, q);
                if (alpha <= deflate) zero_column(p);
                if (beta <= deflate) zero_column(q);
                if (alpha <= deflate || beta <= deflate) continue;
                double gamma = col_dot(w, p, q);
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                // Annihilate gamma': the rotated columns satisfy
                // gamma' = c*s*(beta - alpha) + (c^2 - s^2)*gamma, so t = s/c
                // solves t^2 - 2*zeta*t - 1 = 0; take the smaller root for
                // the rotation angle closest to zero (stability).
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = -std::copysign(1.0, zeta) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                rotate_cols(w, p, q, c, s);
                rotate_cols(v, p, q, c, s);
                ++rotations;
            }
        }
        if (rotations == 0) converged = true;
    }
    if (!converged) raise(errc::ill_conditioned, "svd: Jacobi sweeps did not converge");

    std::vector<double> sigma(d);
    for (std::size_t j = 0; j < d; ++j) sigma[j] = std::sqrt(col_dot(w, j, j));

    // Stable descending order so equal singular values keep column order.
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SvdResult out{Matrix(d, d), std::vector<double>(d), Matrix(d, d)};
    for (std::size_t j = 0; j < d; ++j) {
        std::size_t src = order[j];
        out.singular_values[j] = sigma[src];
        for (std::size_t r = 0; r < d; ++r) out.v(r, j) = v(r, src);
        if (sigma[src] > 0.0) {
            for (std::size_t r = 0; r < d; ++r) out.u(r, j) = w(r, src) / sigma[src];
        } else {
            fill_null_column(out.u, j);
        }
    }
    return out;
}

}  // namespace orient
