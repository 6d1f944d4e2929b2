#include "orient/translate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "orient/error.hpp"
#include "orient/kernels.hpp"
#include "orient/parallel.hpp"
#include "orient/text.hpp"

namespace orient {
namespace {

constexpr std::size_t kQueryBlock = 16;
constexpr std::size_t kMiss = static_cast<std::size_t>(-1);

double cosine_or_miss(std::span<const double> x, std::span<const double> y) {
    const auto& k = kernels::ops();
    double nx = k.sum_sq(x.data(), x.size());
    double ny = k.sum_sq(y.data(), y.size());
    if (nx == 0.0 || ny == 0.0) return -2.0;  // sorts after every real cosine
    return k.dot(x.data(), y.data(), x.size()) / std::sqrt(nx * ny);
}

}  // namespace

Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open " + path);
    Lexicon lex;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_on(line, '\t');
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            raise(errc::malformed_input,
                  path + ":" + std::to_string(line_no) + ": expected source<TAB>target");
        if (!seen.emplace(fields[0]).second)
            raise(errc::duplicate_token, path + ":" + std::to_string(line_no) +
                                             ": duplicate source token \"" + std::string(fields[0]) + "\"");
        lex.push_back({std::string(fields[0]), std::string(fields[1])});
    }
    if (in.bad()) raise(errc::io, "read error on " + path);
    if (lex.empty()) raise(errc::malformed_input, path + ": no lexicon pairs");
    return lex;
}

SimilarityTransform train_translation(const Embedding& source, const Embedding& target,
                                      const Lexicon& seed, Variant variant,
                                      const AlignOptions& opts, AlignWarnings* warnings) {
    if (source.dim() != target.dim()) raise(errc::dim_mismatch, "train_translation: dimensions differ");
    TokenIndex source_index(source);
    TokenIndex target_index(target);

    std::vector<std::pair<std::size_t, std::size_t>> rows;  // (source row, target row)
    for (const LexiconPair& p : seed) {
        auto sr = source_index.find(p.source);
        auto tr = target_index.find(p.target);
        if (sr && tr) rows.emplace_back(*sr, *tr);
    }
    if (rows.size() < 2)
        raise(errc::empty_intersection, "train_translation: fewer than 2 seed pairs resolvable");

    const std::size_t d = source.dim();
    AlignedPair pair;
    pair.target.matrix = Matrix(rows.size(), d);
    pair.source.matrix = Matrix(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        // The correspondence is labeled by its target token on both sides.
        pair.target.tokens.push_back(target.tokens[rows[i].second]);
        pair.source.tokens.push_back(target.tokens[rows[i].second]);
        auto src = source.matrix.row(rows[i].first);
        auto tgt = target.matrix.row(rows[i].second);
        std::copy(src.begin(), src.end(), pair.source.matrix.row(i).begin());
        std::copy(tgt.begin(), tgt.end(), pair.target.matrix.row(i).begin());
    }
    return align(pair, variant, opts, warnings);
}

EvalReport translation_eval(const Embedding& source_aligned, const Embedding& target,
                            const Lexicon& test, std::span<const std::size_t> ks,
                            SearchSpace space) {
    if (source_aligned.dim() != target.dim())
        raise(errc::dim_mismatch, "translation_eval: dimensions differ");
    if (ks.empty()) raise(errc::out_of_range, "translation_eval: no k values");
    for (std::size_t k : ks)
        if (k == 0) raise(errc::out_of_range, "translation_eval: k must be positive");

    TokenIndex source_index(source_aligned);
    TokenIndex target_index(target);
    const bool use_union = space == SearchSpace::united;

    // Rank of the gold target entry per test pair, kMiss when skipped or
    // unreachable.  Computed per query, in parallel, then reduced in order.
    std::vector<std::size_t> ranks(test.size(), kMiss);
    // unsigned char, not bool: vector<bool> packs bits and parallel writes
    // to neighboring items would race.
    std::vector<unsigned char> usable(test.size(), 0);
    parallel_blocks(test.size(), kQueryBlock, [&](std::size_t, std::size_t begin, std::size_t end) {
        const auto& ops = kernels::ops();
        for (std::size_t item = begin; item < end; ++item) {
            auto sr = source_index.find(test[item].source);
            auto tr = target_index.find(test[item].target);
            if (!sr || !tr) continue;
            usable[item] = 1;
            auto query = source_aligned.matrix.row(*sr);
            if (ops.sum_sq(query.data(), query.size()) == 0.0) continue;  // unrankable

            const std::string& gold_token = target.tokens[*tr];
            double gold = cosine_or_miss(query, target.matrix.row(*tr));
            if (gold == -2.0) continue;

            // Candidates ordered by (cosine desc, target side first, token
            // bytes asc); the rank is one plus the count ordered before gold.
            std::size_t rank = 1;
            for (std::size_t i = 0; i < target.size(); ++i) {
                if (i == *tr) continue;
                double s = cosine_or_miss(query, target.matrix.row(i));
                if (s > gold || (s == gold && target.tokens[i] < gold_token)) ++rank;
            }
            if (use_union) {
                for (std::size_t i = 0; i < source_aligned.size(); ++i) {
                    if (i == *sr) continue;  // the query's own entry is excluded
                    double s = cosine_or_miss(query, source_aligned.matrix.row(i));
                    // Source-side entries lose every exact tie with gold.
                    if (s > gold) ++rank;
                }
            }
            ranks[item] = rank;
        }
    });

    std::size_t evaluated = 0;
    std::vector<std::size_t> hits(ks.size(), 0);
    for (std::size_t item = 0; item < test.size(); ++item) {
        if (!usable[item]) continue;
        ++evaluated;
        for (std::size_t j = 0; j < ks.size(); ++j)
            if (ranks[item] != kMiss && ranks[item] <= ks[j]) ++hits[j];
    }
    if (evaluated == 0) raise(errc::empty_evaluation, "translation_eval: no evaluable test pairs");

    EvalReport report;
    report.metric = "translation";
    for (std::size_t j = 0; j < ks.size(); ++j)
        report.scores.emplace_back("P@" + std::to_string(ks[j]),
                                   static_cast<double>(hits[j]) / static_cast<double>(evaluated));
    report.evaluated = evaluated;
    report.skipped = test.size() - evaluated;
    report.params.emplace_back("space", use_union ? "union" : "target_only");
    return report;
}

EvalReport pivot_translate(const Embedding& l1, const Embedding& l2, const Embedding& pivot,
                           const Lexicon& seed1, const Lexicon& seed2, const Lexicon& test,
                           std::span<const std::size_t> ks, Variant variant, SearchSpace space) {
    SimilarityTransform t1 = train_translation(l1, pivot, seed1, variant);
    SimilarityTransform t2 = train_translation(l2, pivot, seed2, variant);
    Embedding l1_aligned = apply(t1, l1);
    Embedding l2_aligned = apply(t2, l2);
    EvalReport report = translation_eval(l1_aligned, l2_aligned, test, ks, space);
    report.metric = "pivot_translation";
    report.params.emplace_back("variant", std::string(variant_name(variant)));
    return report;
}

}  // namespace orient
