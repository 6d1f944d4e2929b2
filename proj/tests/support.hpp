#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orient/embedding.hpp"
#include "orient/linalg.hpp"
#include "orient/matrix.hpp"
#include "orient/rng.hpp"

namespace test_support {

// Self-deleting scratch directory for file-format and CLI tests.
class TempDir {
  public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0;; ++attempt) {
            path_ = base / ("orient_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(path_, ec)) break;
            if (attempt > 100) throw std::runtime_error("cannot create temp dir");
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Matrix with standard-normal entries.
inline orient::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    orient::SplitMix64 rng(seed);
    orient::Matrix m(rows, cols);
    for (double& v : m.values) v = rng.next_gaussian();
    return m;
}

// Random orthogonal matrix: Gram-Schmidt on a random square matrix.
inline orient::Matrix random_orthogonal(std::size_t d, std::uint64_t seed) {
    orient::SplitMix64 rng(seed);
    for (;;) {
        orient::Matrix m = random_matrix(d, d, rng.next_u64());
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) {
            auto row_i = m.row(i);
            for (std::size_t j = 0; j < i; ++j) {
                auto row_j = m.row(j);
                double proj = 0.0;
                for (std::size_t c = 0; c < d; ++c) proj += row_i[c] * row_j[c];
                for (std::size_t c = 0; c < d; ++c) row_i[c] -= proj * row_j[c];
            }
            double norm_sq = 0.0;
            for (double v : row_i) norm_sq += v * v;
            if (norm_sq < 1e-12) {
                ok = false;  // degenerate draw; retry
                break;
            }
            double inv = 1.0 / std::sqrt(norm_sq);
            for (double& v : row_i) v *= inv;
        }
        if (ok) return m;
    }
}

// Embedding with tokens w0, w1, ... and random normal rows.
inline orient::Embedding random_embedding(std::size_t n, std::size_t d, std::uint64_t seed) {
    orient::Embedding emb;
    emb.matrix = random_matrix(n, d, seed);
    emb.tokens.reserve(n);
    for (std::size_t i = 0; i < n; ++i) emb.tokens.push_back("w" + std::to_string(i));
    return emb;
}

inline double max_abs_off_identity(const orient::Matrix& m) {
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            worst = std::max(worst, std::abs(m(r, c) - (r == c ? 1.0 : 0.0)));
    return worst;
}

}  // namespace test_support
