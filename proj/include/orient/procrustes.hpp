#pragma once

#include <span>

#include "orient/matrix.hpp"

namespace orient {

// Orthogonal group O(d) by default; allow_reflection=false restricts to
// rotations proper, SO(d).
struct RotationChoice {
    bool allow_reflection = true;
};

// R = U V^T from the SVD of the cross-covariance h, the orthogonal matrix
// maximizing sum_i <a_i, b_i R>.  With allow_reflection=false and
// det(U V^T) < 0, the last column of U is negated so det(R) = +1.
Matrix optimal_rotation(const Matrix& h, RotationChoice choice = {});

struct ScaleResult {
    double value;
    bool non_positive;  // adversarial inputs can drive the optimum to <= 0
};

// s = sum_i w_i <a_i, b~_i> / sum_i w_i ||b~_i||^2, the scale minimizing
// ||A - s B~||_F given the already-rotated source B~.  Never clamped: a
// non-positive optimum is returned as-is with the flag set.
ScaleResult optimal_scale(const Matrix& target, const Matrix& rotated_source,
                          std::span<const double> weights = {});

}  // namespace orient
