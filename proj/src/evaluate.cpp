#include "orient/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "orient/error.hpp"
#include "orient/format.hpp"
#include "orient/kernels.hpp"
#include "orient/linalg.hpp"
#include "orient/parallel.hpp"
#include "orient/rng.hpp"
#include "orient/text.hpp"

namespace orient {
namespace {

constexpr std::size_t kItemBlock = 64;
// Sort key for rows whose cosine is undefined (zero norm): after every
// real cosine, which lives in [-1, 1].
constexpr double kUnscored = -2.0;

void check_same_shape(const Matrix& a, const Matrix& b, const char* who) {
    if (a.rows != b.rows || a.cols != b.cols)
        raise(errc::dim_mismatch, std::string(who) + ": shapes differ");
}

double cosine(std::span<const double> x, std::span<const double> y) {
    const auto& k = kernels::ops();
    double nx = k.sum_sq(x.data(), x.size());
    double ny = k.sum_sq(y.data(), y.size());
    if (nx == 0.0 || ny == 0.0) return kUnscored;
    return k.dot(x.data(), y.data(), x.size()) / std::sqrt(nx * ny);
}

void append_json_string(std::string& out, std::string_view s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
}

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

struct LineReader {
    std::ifstream in;
    std::string path;
    std::size_t line_no = 0;

    explicit LineReader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) raise(errc::io, "cannot open " + p);
    }
    bool next(std::string& line) {
        if (!std::getline(in, line)) {
            if (in.bad()) raise(errc::io, "read error on " + path);
            return false;
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const {
        raise(errc::malformed_input, path + ":" + std::to_string(line_no) + ": " + what);
    }
};

}  // namespace

std::string EvalReport::to_text() const {
    std::string out;
    for (const auto& [name, value] : scores) {
        out += name;
        out += '\t';
        append_double(out, value, 9);
        out += '\t';
        out += std::to_string(evaluated);
        out += '\t';
        out += std::to_string(skipped);
        out += '\n';
    }
    return out;
}

std::string EvalReport::to_json() const {
    std::string out = "{\"metric\": ";
    append_json_string(out, metric);
    out += ", \"scores\": {";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, scores[i].first);
        out += ": ";
        append_double(out, scores[i].second, 17);
    }
    out += "}, \"evaluated\": " + std::to_string(evaluated);
    out += ", \"skipped\": " + std::to_string(skipped);
    out += ", \"params\": {";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, params[i].first);
        out += ": ";
        append_json_string(out, params[i].second);
    }
    out += "}}\n";
    return out;
}

double rmse(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "rmse");
    if (a.rows == 0) raise(errc::empty_evaluation, "rmse: no rows");
    // Per-row squared distances gathered first, then summed in row order,
    // so the result is identical for every thread count.
    std::vector<double> sq(a.rows);
    parallel_blocks(a.rows, kItemBlock, [&](std::size_t, std::size_t begin, std::size_t end) {
        const auto& k = kernels::ops();
        for (std::size_t i = begin; i < end; ++i)
            sq[i] = k.sq_dist(a.row(i).data(), b.row(i).data(), a.cols);
    });
    double total = 0.0;
    for (double v : sq) total += v;
    return std::sqrt(total / static_cast<double>(a.rows));
}

double rmse(const AlignedPair& pair) { return rmse(pair.target.matrix, pair.source.matrix); }

double mean_cosine(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "mean_cosine");
    if (a.rows == 0) raise(errc::empty_evaluation, "mean_cosine: no rows");
    std::vector<double> cos(a.rows);
    parallel_blocks(a.rows, kItemBlock, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) cos[i] = cosine(a.row(i), b.row(i));
    });
    double total = 0.0;
    for (std::size_t i = 0; i < cos.size(); ++i) {
        if (cos[i] == kUnscored)
            raise(errc::zero_norm, "mean_cosine: zero-norm row " + std::to_string(i));
        total += cos[i];
    }
    return total / static_cast<double>(a.rows);
}

double mean_cosine(const AlignedPair& pair) {
    return mean_cosine(pair.target.matrix, pair.source.matrix);
}

std::vector<std::string> nearest_neighbors(const Embedding& emb, std::span<const double> query,
                                           std::size_t k,
                                           const std::unordered_set<std::string>& exclude) {
    if (query.size() != emb.dim()) raise(errc::dim_mismatch, "nearest_neighbors: query dimension differs");
    if (kernels::ops().sum_sq(query.data(), query.size()) == 0.0)
        raise(errc::zero_norm, "nearest_neighbors: zero-norm query");

    std::vector<std::size_t> candidates;
    candidates.reserve(emb.size());
    for (std::size_t i = 0; i < emb.size(); ++i)
        if (!exclude.contains(emb.tokens[i])) candidates.push_back(i);
    if (candidates.empty()) raise(errc::empty_evaluation, "nearest_neighbors: empty candidate set");
    if (k == 0 || k > candidates.size())
        raise(errc::out_of_range, "nearest_neighbors: k=" + std::to_string(k) + " exceeds " +
                                      std::to_string(candidates.size()) + " candidates");

    std::vector<double> score(emb.size());
    for (std::size_t i : candidates) score[i] = cosine(query, emb.matrix.row(i));
    auto before = [&](std::size_t a, std::size_t b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return emb.tokens[a] < emb.tokens[b];
    };
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end(), before);

    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(emb.tokens[candidates[i]]);
    return out;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) raise(errc::dim_mismatch, "spearman: lengths differ");
    if (x.size() < 2) raise(errc::empty_evaluation, "spearman: need at least 2 items");
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    double mean = (n + 1.0) / 2.0;  // ranks always average to this
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = rx[i] - mean;
        double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // All-tied input has no ranking to correlate; 0 by convention.
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

SimilarityDataset load_similarity(const std::string& path) {
    LineReader reader(path);
    SimilarityDataset ds;
    std::string line;
    while (reader.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_on(line, '\t');
        if (fields.size() != 3) reader.fail("expected token1<TAB>token2<TAB>score");
        if (fields[0].empty() || fields[1].empty()) reader.fail("empty token");
        double score;
        if (!parse_double(fields[2], score) || !std::isfinite(score))
            reader.fail("malformed score \"" + std::string(fields[2]) + "\"");
        ds.push_back({std::string(fields[0]), std::string(fields[1]), score});
    }
    if (ds.empty()) raise(errc::malformed_input, path + ": no similarity items");
    return ds;
}

AnalogyDataset load_analogy(const std::string& path) {
    LineReader reader(path);
    AnalogyDataset ds;
    std::string line;
    while (reader.next(line)) {
        if (line.empty() || line[0] == ':') continue;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 4) reader.fail("expected 4 tokens");
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                if (fields[i] == fields[j]) reader.fail("repeated token \"" + std::string(fields[i]) + "\"");
        ds.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                      std::string(fields[3])});
    }
    if (ds.empty()) raise(errc::malformed_input, path + ": no analogy items");
    return ds;
}

EvalReport similarity_eval(const Embedding& target, const Embedding& source,
                           const SimilarityDataset& ds, SimilarityMode mode) {
    if (target.dim() != source.dim()) raise(errc::dim_mismatch, "similarity_eval: dimensions differ");
    TokenIndex target_index(target);
    TokenIndex source_index(source);
    const Embedding& second = mode == SimilarityMode::within_target ? target : source;
    const TokenIndex& second_index = mode == SimilarityMode::within_target ? target_index : source_index;

    std::vector<double> human, model;
    std::size_t skipped = 0;
    for (const SimilarityItem& item : ds) {
        auto r1 = target_index.find(item.token1);
        auto r2 = second_index.find(item.token2);
        double cos = kUnscored;
        if (r1 && r2) cos = cosine(target.matrix.row(*r1), second.matrix.row(*r2));
        if (cos == kUnscored) {
            ++skipped;  // missing token or zero-norm row: not evaluable
            continue;
        }
        human.push_back(item.human_score);
        model.push_back(cos);
    }
    if (human.size() < 2) raise(errc::empty_evaluation, "similarity_eval: fewer than 2 evaluable pairs");

    EvalReport report;
    report.metric = "similarity";
    report.scores.emplace_back("spearman", spearman(model, human));
    report.evaluated = human.size();
    report.skipped = skipped;
    report.params.emplace_back("mode", mode == SimilarityMode::within_target ? "within_target" : "cross");
    return report;
}

EvalReport analogy_eval(const Embedding& target, const Embedding& source,
                        const AnalogyDataset& ds, std::size_t k) {
    if (target.dim() != source.dim()) raise(errc::dim_mismatch, "analogy_eval: dimensions differ");
    if (k == 0) raise(errc::out_of_range, "analogy_eval: k must be positive");
    TokenIndex target_index(target);
    TokenIndex source_index(source);
    const std::size_t d = target.dim();

    enum : signed char { kSkip = 0, kHit = 1, kMiss = 2 };
    std::vector<signed char> verdict(ds.size(), kSkip);
    parallel_blocks(ds.size(), kItemBlock, [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<double> query(d);
        const auto& ops = kernels::ops();
        for (std::size_t item = begin; item < end; ++item) {
            const AnalogyItem& q = ds[item];
            auto ra = source_index.find(q.a);
            auto rb = source_index.find(q.b);
            auto rc = source_index.find(q.c);
            auto rd = target_index.find(q.d);
            if (!ra || !rb || !rc || !rd) continue;
            for (std::size_t c = 0; c < d; ++c)
                query[c] = source.matrix(*rc, c) + source.matrix(*rb, c) - source.matrix(*ra, c);
            if (ops.sum_sq(query.data(), d) == 0.0) {
                verdict[item] = kMiss;  // degenerate query cannot be ranked
                continue;
            }
            double gold = cosine(query, target.matrix.row(*rd));
            // Rank of the gold token = 1 + number of candidates ordered
            // before it (higher cosine, or equal cosine and smaller token).
            std::size_t rank = 1;
            for (std::size_t i = 0; i < target.size() && rank <= k; ++i) {
                if (i == *rd) continue;
                const std::string& tok = target.tokens[i];
                if (tok == q.a || tok == q.b || tok == q.c) continue;
                double s = cosine(query, target.matrix.row(i));
                if (s > gold || (s == gold && tok < target.tokens[*rd])) ++rank;
            }
            verdict[item] = (gold != kUnscored && rank <= k) ? kHit : kMiss;
        }
    });

    std::size_t hits = 0, evaluated = 0;
    for (signed char v : verdict) {
        if (v == kSkip) continue;
        ++evaluated;
        if (v == kHit) ++hits;
    }
    if (evaluated == 0) raise(errc::empty_evaluation, "analogy_eval: no evaluable quadruples");

    EvalReport report;
    report.metric = "analogy";
    std::string name = k == 1 ? "accuracy" : "accuracy@" + std::to_string(k);
    report.scores.emplace_back(name, static_cast<double>(hits) / static_cast<double>(evaluated));
    report.evaluated = evaluated;
    report.skipped = ds.size() - evaluated;
    report.params.emplace_back("k", std::to_string(k));
    return report;
}

Matrix evaluation_target(const Embedding& target, Variant variant) {
    if (variant != Variant::centered) return target.matrix;
    return center_rows(target.matrix, centroid(target.matrix));
}

EvalReport gaussian_calibrate(const Embedding& emb, const NoiseSpec& spec, Variant variant,
                              const AlignOptions& opts) {
    if (!(spec.sigma > 0.0)) raise(errc::out_of_range, "gaussian_calibrate: sigma must be positive");
    if (!(spec.fraction > 0.0) || spec.fraction > 1.0)
        raise(errc::out_of_range, "gaussian_calibrate: fraction outside (0, 1]");
    const std::size_t n = emb.size();
    const std::size_t d = emb.dim();
    const auto noised = static_cast<std::size_t>(
        std::min(static_cast<double>(n), std::ceil(spec.fraction * static_cast<double>(n))));

    // Seeded subset via partial Fisher-Yates, then noise applied in
    // ascending row order: fully determined by (seed, n, fraction).
    SplitMix64 rng(spec.seed);
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    for (std::size_t i = 0; i < noised; ++i)
        std::swap(rows[i], rows[i + rng.next_below(n - i)]);
    rows.resize(noised);
    std::sort(rows.begin(), rows.end());

    Matrix noisy = emb.matrix;
    for (std::size_t r : rows)
        for (std::size_t c = 0; c < d; ++c) noisy(r, c) += spec.sigma * rng.next_gaussian();

    AlignedPair pair{emb, Embedding{emb.tokens, std::move(noisy)}};
    AlignWarnings warnings;
    SimilarityTransform t = align(pair, variant, opts, &warnings);
    Matrix realigned = apply(t, pair.source.matrix);
    double err = rmse(evaluation_target(emb, variant), realigned);

    EvalReport report;
    report.metric = "calibration";
    report.scores.emplace_back("rmse", err);
    report.evaluated = n;
    report.skipped = 0;
    report.params.emplace_back("sigma", format_double(spec.sigma, 9));
    report.params.emplace_back("fraction", format_double(spec.fraction, 9));
    report.params.emplace_back("seed", std::to_string(spec.seed));
    report.params.emplace_back("variant", std::string(variant_name(variant)));
    report.params.emplace_back("noised_rows", std::to_string(noised));
    if (warnings.non_positive_scale) report.params.emplace_back("warning", "non_positive_scale");
    return report;
}

}  // namespace orient
