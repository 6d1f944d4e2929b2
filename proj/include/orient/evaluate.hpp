#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "orient/align.hpp"
#include "orient/embedding.hpp"

namespace orient {

struct SimilarityItem {
    std::string token1;
    std::string token2;
    double human_score;
};
using SimilarityDataset = std::vector<SimilarityItem>;

struct AnalogyItem {
    std::string a, b, c, d;  // a : b :: c : d
};
using AnalogyDataset = std::vector<AnalogyItem>;

// Gaussian perturbation: N(0, sigma^2) per coordinate, applied to a seeded
// random ceil(fraction * n) subset of rows.
struct NoiseSpec {
    double sigma;
    double fraction = 1.0;  // in (0, 1]
    std::uint64_t seed = 0;
};

// Result of one evaluation: named score(s) plus coverage counts.
// evaluated + skipped equals the dataset size.
struct EvalReport {
    std::string metric;
    std::vector<std::pair<std::string, double>> scores;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    std::vector<std::pair<std::string, std::string>> params;

    // One line per score: name<TAB>value<TAB>evaluated<TAB>skipped.
    std::string to_text() const;
    std::string to_json() const;
};

// sqrt((1/n) sum_i ||a_i - b_i||^2).
double rmse(const Matrix& a, const Matrix& b);
double rmse(const AlignedPair& pair);

// (1/n) sum_i cos(a_i, b_i); raises errc::zero_norm on a zero row.
double mean_cosine(const Matrix& a, const Matrix& b);
double mean_cosine(const AlignedPair& pair);

// Top-k tokens by descending cosine to the query, after removing excluded
// tokens.  Ties break by ascending token byte order; zero-norm rows rank
// after every scored row.
std::vector<std::string> nearest_neighbors(const Embedding& emb, std::span<const double> query,
                                           std::size_t k,
                                           const std::unordered_set<std::string>& exclude = {});

// Spearman rank correlation with average ranks for ties; 0 when either
// side has zero rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

// Tab-separated "token1<TAB>token2<TAB>score"; '#' comment lines allowed.
SimilarityDataset load_similarity(const std::string& path);

// Whitespace-separated "a b c d" per line; ':' section headers ignored.
AnalogyDataset load_analogy(const std::string& path);

enum class SimilarityMode { within_target, cross };

// Spearman correlation between human scores and model similarities:
// cos(target[w1], target[w2]) for within_target, cos(target[w1], source[w2])
// for cross.  Items with missing tokens are skipped and counted.
EvalReport similarity_eval(const Embedding& target, const Embedding& source,
                           const SimilarityDataset& ds, SimilarityMode mode);

// 3CosAdd across embeddings: query = source[c] + source[b] - source[a],
// correct iff target token d is among the query's top-k neighbors in the
// target, excluding {a, b, c}.
EvalReport analogy_eval(const Embedding& target, const Embedding& source,
                        const AnalogyDataset& ds, std::size_t k = 1);

// Adds seeded Gaussian noise to a row subset, aligns the noisy copy back
// with the given variant, and reports the post-alignment RMSE.
EvalReport gaussian_calibrate(const Embedding& emb, const NoiseSpec& spec, Variant variant,
                              const AlignOptions& opts = {});

// The matrix the transform's output should be compared against: centered
// target for the centered variant (which never translates back), the plain
// target otherwise.
Matrix evaluation_target(const Embedding& target, Variant variant);

}  // namespace orient
