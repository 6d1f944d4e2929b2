#pragma once

#include <span>
#include <vector>

#include "orient/matrix.hpp"

namespace orient {

// Mean of the rows of points, optionally weighted.  Weights must be
// nonnegative with a positive sum (errc::zero_weights otherwise).
std::vector<double> centroid(const Matrix& points,
                             std::span<const double> weights = {});

// Sum of outer products H[p][q] = sum_i w_i * B[i][p] * A[i][q], the
// d x d cross-covariance whose SVD yields the optimal rotation.  Rows of
// B index the first axis (b_i^T a_i with row vectors).  Parallelized over
// row blocks with a fixed reduction order, so results are identical for
// any thread count.
Matrix cross_covariance(const Matrix& a, const Matrix& b,
                        std::span<const double> weights = {});

// Sum of squared entries.
double frobenius_sq(const Matrix& m);

// Solves m * x = rhs for symmetric positive-definite m via Cholesky,
// one column of x per column of rhs.  Raises errc::singular_matrix when a
// pivot is not strictly positive.
Matrix cholesky_solve(const Matrix& m, const Matrix& rhs);

}  // namespace orient
