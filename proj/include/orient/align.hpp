#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orient/embedding.hpp"
#include "orient/matrix.hpp"
#include "orient/procrustes.hpp"

namespace orient {

// The eight alignment recipes.  CLI mnemonics in parentheses.
enum class Variant {
    r,           // (r)    rotation only
    r_t,         // (rt)   rotation + translation
    centered,    // (c)    rotation on centered data, no translate-back
    r_s,         // (rs)   rotation + scaling
    r_s_t,       // (rst)  rotation + scaling + translation
    w_r,         // (wr)   norm-weighted rotation
    w_r_s_t,     // (wrst) norm-weighted rotation + scaling + translation
    normalized,  // (norm) rotation on unit-normalized rows
};

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

// How the per-pair weight is built from ||a_i|| and ||b_i|| for the
// weighted variants.
enum class NormWeightPolicy { product, min, mean };

// The learned map.  Application semantics: x -> s * ((x - b) * R) + a,
// with b = source_centroid and a = target_centroid.
struct SimilarityTransform {
    Variant variant = Variant::r;
    std::size_t d = 0;
    Matrix rotation;
    double scale = 1.0;
    std::vector<double> source_centroid;  // zero when uncentered
    std::vector<double> target_centroid;  // zero when no translate-back
};

struct AlignOptions {
    RotationChoice rotation;
    NormWeightPolicy weight_policy = NormWeightPolicy::product;
    // Computes the r_s_t scale on uncentered data, the literal pseudocode
    // reading, instead of on centered rotated data (the default).
    bool legacy_uncentered_scale = false;
};

struct AlignWarnings {
    bool non_positive_scale = false;
    std::size_t dropped_zero_norm = 0;  // pairs dropped by the normalized variant
};

// Closed-form alignment of pair.source onto pair.target.
SimilarityTransform align(const AlignedPair& pair, Variant variant,
                          const AlignOptions& opts = {},
                          AlignWarnings* warnings = nullptr);

// Applies x -> s((x - b)R) + a to every row.
Matrix apply(const SimilarityTransform& t, const Matrix& rows);
Embedding apply(const SimilarityTransform& t, const Embedding& emb);

// Alignment of contextual embeddings via per-token instance means; by the
// all-pairs equivalence this matches weighting every instance pair equally.
SimilarityTransform align_contextual(const ContextualEmbedding& ctx_a,
                                     const ContextualEmbedding& ctx_b, Variant variant,
                                     const AlignOptions& opts = {},
                                     AlignWarnings* warnings = nullptr);

// The literal triple sum over shared tokens,
//   H = sum_i 1/(m_Ai * m_Bi) sum_j sum_j' outer(b_ij', a_ij),
// kept as the independent oracle for the mean-based route.
Matrix all_pairs_cross_covariance(const ContextualEmbedding& ctx_a,
                                  const ContextualEmbedding& ctx_b);

// Ridge-regularized linear baseline, minimizing
// sum_i ||a_i - b_i M||^2 + gamma ||M||_F^2 in closed form.
struct AffineTransform {
    Matrix m;
    double gamma = 0.0;
};

AffineTransform affine_baseline(const AlignedPair& pair, double gamma);
Matrix apply(const AffineTransform& t, const Matrix& rows);
Embedding apply(const AffineTransform& t, const Embedding& emb);

// Row-wise mean of an already-aligned pair over the shared vocabulary.
Embedding ensemble_average(const AlignedPair& pair);

// JSON serialization with fixed key order (variant, d, rotation, scale,
// source_centroid, target_centroid) and 17 significant digits.
std::string to_json(const SimilarityTransform& t);
SimilarityTransform transform_from_json(const std::string& text);
void save_transform(const SimilarityTransform& t, const std::string& path);
SimilarityTransform load_transform(const std::string& path);

}  // namespace orient
