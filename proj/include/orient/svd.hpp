#pragma once

#include <vector>

#include "orient/matrix.hpp"

namespace orient {

// Factorization m = u * diag(singular_values) * transpose(v).
// u and v have orthonormal columns; singular values are nonnegative and
// sorted in nonincreasing order.
struct SvdResult {
    Matrix u;
    std::vector<double> singular_values;
    Matrix v;
};

// One-sided Jacobi SVD of a square matrix.  Raises errc::ill_conditioned
// if the rotation sweeps fail to converge within max_sweeps.
SvdResult svd(const Matrix& m, int max_sweeps = 100);

}  // namespace orient
