#include "orient/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "orient/error.hpp"
#include "orient/kernels.hpp"

namespace orient {

Matrix Matrix::identity(std::size_t d) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

bool all_finite(const Matrix& m) {
    return std::all_of(m.values.begin(), m.values.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) raise(errc::dim_mismatch, "matmul: inner dimensions differ");
    Matrix out(a.rows, b.cols);
    const auto& k = kernels::ops();
    for (std::size_t r = 0; r < a.rows; ++r) {
        k.vec_mat(a.row(r).data(), b.values.data(), out.row(r).data(), a.cols, b.cols);
    }
    return out;
}

Matrix center_rows(const Matrix& m, std::span<const double> offset) {
    if (offset.size() != m.cols) raise(errc::dim_mismatch, "center_rows: offset length differs");
    Matrix out(m.rows, m.cols);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = m(r, c) - offset[c];
    return out;
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.values) best = std::max(best, std::abs(v));
    return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        raise(errc::dim_mismatch, "max_abs_diff: shapes differ");
    double best = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        best = std::max(best, std::abs(a.values[i] - b.values[i]));
    return best;
}

int det_sign(Matrix m) {
    if (m.rows != m.cols) raise(errc::dim_mismatch, "det_sign: matrix not square");
    const std::size_t d = m.rows;
    int sign = 1;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        double best = std::abs(m(col, col));
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::abs(m(r, col)) > best) {
                best = std::abs(m(r, col));
                pivot = r;
            }
        }
        if (best == 0.0) return 0;
        if (pivot != col) {
            for (std::size_t c = 0; c < d; ++c) std::swap(m(pivot, c), m(col, c));
            sign = -sign;
        }
        if (m(col, col) < 0.0) sign = -sign;
        for (std::size_t r = col + 1; r < d; ++r) {
            double factor = m(r, col) / m(col, col);
            for (std::size_t c = col; c < d; ++c) m(r, c) -= factor * m(col, c);
        }
    }
    return sign;
}

}  // namespace orient
