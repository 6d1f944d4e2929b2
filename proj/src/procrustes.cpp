#include "orient/procrustes.hpp"

#include "orient/error.hpp"
#include "orient/kernels.hpp"
#include "orient/svd.hpp"

namespace orient {

Matrix optimal_rotation(const Matrix& h, RotationChoice choice) {
    SvdResult f = svd(h);
    Matrix r = matmul(f.u, transpose(f.v));
    if (!choice.allow_reflection && det_sign(r) < 0) {
        // R = U I_- V^T: negating the column of the smallest singular value
        // is the determinant fix that costs the least alignment quality.
        Matrix u = f.u;
        for (std::size_t row = 0; row < u.rows; ++row) u(row, u.cols - 1) = -u(row, u.cols - 1);
        r = matmul(u, transpose(f.v));
    }
    return r;
}

ScaleResult optimal_scale(const Matrix& target, const Matrix& rotated_source,
                          std::span<const double> weights) {
    if (target.rows != rotated_source.rows || target.cols != rotated_source.cols)
        raise(errc::dim_mismatch, "optimal_scale: shapes differ");
    if (!weights.empty() && weights.size() != target.rows)
        raise(errc::dim_mismatch, "optimal_scale: weights length differs from row count");

    const auto& k = kernels::ops();
    const std::size_t d = target.cols;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < target.rows; ++i) {
        double w = weights.empty() ? 1.0 : weights[i];
        num += w * k.dot(target.row(i).data(), rotated_source.row(i).data(), d);
        den += w * k.sum_sq(rotated_source.row(i).data(), d);
    }
    if (den == 0.0) raise(errc::zero_norm, "optimal_scale: rotated source has zero norm");
    double s = num / den;
    return {s, s <= 0.0};
}

}  // namespace orient
