#pragma once

#include <span>
#include <string>
#include <vector>

#include "orient/align.hpp"
#include "orient/embedding.hpp"
#include "orient/evaluate.hpp"

namespace orient {

// Known word translations; source tokens are unique within a lexicon.
struct LexiconPair {
    std::string source;
    std::string target;
};
using Lexicon = std::vector<LexiconPair>;

// Tab-separated "source_token<TAB>target_token"; '#' comment lines allowed.
Lexicon load_lexicon(const std::string& path);

// Learns a transform from seed correspondences: rows of `source` map onto
// rows of `target` wherever both lexicon tokens resolve.  Unresolvable
// pairs are skipped; fewer than 2 resolvable pairs is an error.
SimilarityTransform train_translation(const Embedding& source, const Embedding& target,
                                      const Lexicon& seed, Variant variant = Variant::w_r_s_t,
                                      const AlignOptions& opts = {},
                                      AlignWarnings* warnings = nullptr);

// Neighbor pool for held-out translation scoring: the target vocabulary
// alone, or the union of both embeddings (same-language neighbors then
// count as misses).
enum class SearchSpace { target_only, united };

// Precision@k of gold target tokens among each aligned source query's
// nearest cosine neighbors.  The query's own source-side entry is excluded
// from the pool; ties order target-side candidates before source-side,
// then ascending token bytes.
EvalReport translation_eval(const Embedding& source_aligned, const Embedding& target,
                            const Lexicon& test, std::span<const std::size_t> ks,
                            SearchSpace space = SearchSpace::united);

// Aligns l1 and l2 independently onto the pivot language, then scores
// l1-to-l2 translation in the shared pivot space.
EvalReport pivot_translate(const Embedding& l1, const Embedding& l2, const Embedding& pivot,
                           const Lexicon& seed1, const Lexicon& seed2, const Lexicon& test,
                           std::span<const std::size_t> ks,
                           Variant variant = Variant::w_r_s_t,
                           SearchSpace space = SearchSpace::united);

}  // namespace orient
