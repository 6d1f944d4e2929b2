#include "orient/align.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "orient/error.hpp"
#include "orient/kernels.hpp"
#include "orient/linalg.hpp"
#include "orient/parallel.hpp"

namespace orient {
namespace {

constexpr std::size_t kBlockRows = 2048;

double row_norm(const Matrix& m, std::size_t i) {
    return std::sqrt(kernels::ops().sum_sq(m.row(i).data(), m.cols));
}

std::vector<double> pair_weights(const AlignedPair& pair, NormWeightPolicy policy) {
    std::vector<double> w(pair.target.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double na = row_norm(pair.target.matrix, i);
        double nb = row_norm(pair.source.matrix, i);
        if (na == 0.0 || nb == 0.0)
            raise(errc::zero_norm, "align: zero-norm row " + std::to_string(i) + " under weighted variant");
        switch (policy) {
            case NormWeightPolicy::product: w[i] = na * nb; break;
            case NormWeightPolicy::min: w[i] = std::min(na, nb); break;
            case NormWeightPolicy::mean: w[i] = 0.5 * (na + nb); break;
        }
    }
    return w;
}

// Unit-normalizes rows of both sides, dropping pairs where either row has
// zero norm (they cannot be normalized).
AlignedPair normalize_pair(const AlignedPair& pair, std::size_t& dropped) {
    const std::size_t d = pair.target.dim();
    AlignedPair out;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < pair.target.size(); ++i) {
        if (row_norm(pair.target.matrix, i) == 0.0 || row_norm(pair.source.matrix, i) == 0.0)
            ++dropped;
        else
            keep.push_back(i);
    }
    out.target.matrix = Matrix(keep.size(), d);
    out.source.matrix = Matrix(keep.size(), d);
    for (std::size_t r = 0; r < keep.size(); ++r) {
        std::size_t i = keep[r];
        out.target.tokens.push_back(pair.target.tokens[i]);
        out.source.tokens.push_back(pair.source.tokens[i]);
        double na = row_norm(pair.target.matrix, i);
        double nb = row_norm(pair.source.matrix, i);
        for (std::size_t c = 0; c < d; ++c) {
            out.target.matrix(r, c) = pair.target.matrix(i, c) / na;
            out.source.matrix(r, c) = pair.source.matrix(i, c) / nb;
        }
    }
    return out;
}

}  // namespace

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::r: return "r";
        case Variant::r_t: return "rt";
        case Variant::centered: return "c";
        case Variant::r_s: return "rs";
        case Variant::r_s_t: return "rst";
        case Variant::w_r: return "wr";
        case Variant::w_r_s_t: return "wrst";
        case Variant::normalized: return "norm";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
    for (Variant v : {Variant::r, Variant::r_t, Variant::centered, Variant::r_s,
                      Variant::r_s_t, Variant::w_r, Variant::w_r_s_t, Variant::normalized})
        if (variant_name(v) == name) return v;
    return std::nullopt;
}

SimilarityTransform align(const AlignedPair& pair, Variant variant,
                          const AlignOptions& opts, AlignWarnings* warnings) {
    if (pair.target.size() != pair.source.size() || pair.target.dim() != pair.source.dim())
        raise(errc::dim_mismatch, "align: pair sides differ in shape");
    const std::size_t d = pair.target.dim();

    AlignedPair normalized_storage;
    const AlignedPair* work = &pair;
    if (variant == Variant::normalized) {
        std::size_t dropped = 0;
        normalized_storage = normalize_pair(pair, dropped);
        if (warnings) warnings->dropped_zero_norm = dropped;
        work = &normalized_storage;
    }
    if (work->target.size() < 2)
        raise(errc::malformed_input, "align: need at least 2 token pairs");

    const bool weighted = variant == Variant::w_r || variant == Variant::w_r_s_t;
    const bool centered = variant == Variant::r_t || variant == Variant::centered ||
                          variant == Variant::r_s_t || variant == Variant::w_r_s_t;
    const bool scaled = variant == Variant::r_s || variant == Variant::r_s_t ||
                        variant == Variant::w_r_s_t;

    std::vector<double> weights;
    if (weighted) weights = pair_weights(*work, opts.weight_policy);

    SimilarityTransform t;
    t.variant = variant;
    t.d = d;
    t.source_centroid.assign(d, 0.0);
    t.target_centroid.assign(d, 0.0);

    const Matrix& a = work->target.matrix;
    const Matrix& b = work->source.matrix;
    Matrix a_fit = a;
    Matrix b_fit = b;
    if (centered) {
        std::vector<double> a_bar = centroid(a, weights);
        std::vector<double> b_bar = centroid(b, weights);
        a_fit = center_rows(a, a_bar);
        b_fit = center_rows(b, b_bar);
        t.source_centroid = b_bar;
        // The centered variant leaves the result in centered coordinates;
        // the others translate back to the target centroid.
        if (variant != Variant::centered) t.target_centroid = a_bar;
    }

    Matrix h = cross_covariance(a_fit, b_fit, weights);
    t.rotation = optimal_rotation(h, opts.rotation);

    if (scaled) {
        const Matrix& scale_a = opts.legacy_uncentered_scale ? a : a_fit;
        const Matrix& scale_b = opts.legacy_uncentered_scale ? b : b_fit;
        ScaleResult s = optimal_scale(scale_a, matmul(scale_b, t.rotation), weights);
        t.scale = s.value;
        if (s.non_positive && warnings) warnings->non_positive_scale = true;
    }
    return t;
}

Matrix apply(const SimilarityTransform& t, const Matrix& rows) {
    if (rows.cols != t.d) raise(errc::dim_mismatch, "apply: embedding dimension differs from transform");
    const std::size_t d = t.d;
    Matrix out(rows.rows, d);
    parallel_blocks(rows.rows, kBlockRows, [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<double> shifted(d);
        const auto& k = kernels::ops();
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t c = 0; c < d; ++c) shifted[c] = rows(i, c) - t.source_centroid[c];
            k.vec_mat(shifted.data(), t.rotation.values.data(), out.row(i).data(), d, d);
            for (std::size_t c = 0; c < d; ++c)
                out(i, c) = t.scale * out(i, c) + t.target_centroid[c];
        }
    });
    return out;
}

Embedding apply(const SimilarityTransform& t, const Embedding& emb) {
    return Embedding{emb.tokens, apply(t, emb.matrix)};
}

SimilarityTransform align_contextual(const ContextualEmbedding& ctx_a,
                                     const ContextualEmbedding& ctx_b, Variant variant,
                                     const AlignOptions& opts, AlignWarnings* warnings) {
    return align(intersect(collapse_means(ctx_a), collapse_means(ctx_b)), variant, opts, warnings);
}

Matrix all_pairs_cross_covariance(const ContextualEmbedding& ctx_a,
                                  const ContextualEmbedding& ctx_b) {
    validate(ctx_a);
    validate(ctx_b);
    const std::size_t d = ctx_a.instances.front().cols;
    if (ctx_b.instances.front().cols != d)
        raise(errc::dim_mismatch, "all_pairs_cross_covariance: dimensions differ");

    std::unordered_map<std::string_view, std::size_t> b_index;
    for (std::size_t i = 0; i < ctx_b.tokens.size(); ++i) b_index.emplace(ctx_b.tokens[i], i);
    Matrix h(d, d);
    bool any = false;
    for (std::size_t ia = 0; ia < ctx_a.tokens.size(); ++ia) {
        auto ib = b_index.find(ctx_a.tokens[ia]);
        if (ib == b_index.end()) continue;
        any = true;
        const Matrix& inst_a = ctx_a.instances[ia];
        const Matrix& inst_b = ctx_b.instances[ib->second];
        double w = 1.0 / (static_cast<double>(inst_a.rows) * static_cast<double>(inst_b.rows));
        for (std::size_t j = 0; j < inst_a.rows; ++j)
            for (std::size_t jp = 0; jp < inst_b.rows; ++jp)
                for (std::size_t p = 0; p < d; ++p)
                    for (std::size_t q = 0; q < d; ++q)
                        h(p, q) += w * inst_b(jp, p) * inst_a(j, q);
    }
    if (!any) raise(errc::empty_intersection, "all_pairs_cross_covariance: no shared tokens");
    return h;
}

AffineTransform affine_baseline(const AlignedPair& pair, double gamma) {
    if (!(gamma >= 0.0)) raise(errc::malformed_input, "affine_baseline: gamma must be nonnegative");
    if (pair.target.size() != pair.source.size() || pair.target.dim() != pair.source.dim())
        raise(errc::dim_mismatch, "affine_baseline: pair sides differ in shape");
    const Matrix& a = pair.target.matrix;
    const Matrix& b = pair.source.matrix;
    const std::size_t d = b.cols;

    // Normal equations of the ridge objective: (B^T B + gamma I) M = B^T A.
    Matrix bt = transpose(b);
    Matrix normal = matmul(bt, b);
    for (std::size_t i = 0; i < d; ++i) normal(i, i) += gamma;
    AffineTransform t;
    t.gamma = gamma;
    t.m = cholesky_solve(normal, matmul(bt, a));
    return t;
}

Matrix apply(const AffineTransform& t, const Matrix& rows) {
    return matmul(rows, t.m);
}

Embedding apply(const AffineTransform& t, const Embedding& emb) {
    return Embedding{emb.tokens, apply(t, emb.matrix)};
}

Embedding ensemble_average(const AlignedPair& pair) {
    if (pair.target.size() != pair.source.size() || pair.target.dim() != pair.source.dim())
        raise(errc::dim_mismatch, "ensemble_average: pair sides differ in shape");
    Embedding out;
    out.tokens = pair.target.tokens;
    out.matrix = Matrix(pair.target.size(), pair.target.dim());
    for (std::size_t i = 0; i < out.matrix.values.size(); ++i)
        out.matrix.values[i] = 0.5 * (pair.target.matrix.values[i] + pair.source.matrix.values[i]);
    return out;
}

}  // namespace orient
