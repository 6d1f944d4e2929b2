#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace orient {

// Dense row-major matrix of doubles. All library arithmetic is done in
// 64-bit floating point.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }

    bool empty() const { return values.empty(); }

    static Matrix identity(std::size_t d);
};

bool all_finite(const Matrix& m);

Matrix transpose(const Matrix& m);

// a (r x k) times b (k x c)
Matrix matmul(const Matrix& a, const Matrix& b);

// Subtracts `offset` from every row.
Matrix center_rows(const Matrix& m, std::span<const double> offset);

double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Sign of det(m) via LU with partial pivoting: -1, 0 or +1.
int det_sign(Matrix m);

}  // namespace orient
