#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "orient/matrix.hpp"

namespace orient {

// Ordered token list plus an n x d matrix; row i is the vector of tokens[i].
struct Embedding {
    std::vector<std::string> tokens;
    Matrix matrix;

    std::size_t size() const { return tokens.size(); }
    std::size_t dim() const { return matrix.cols; }
};

// Two embeddings restricted to a common vocabulary in identical row order:
// target row i and source row i describe the same token.
struct AlignedPair {
    Embedding target;
    Embedding source;
};

// Several vectors per token (for example one per occurrence context).
struct ContextualEmbedding {
    std::vector<std::string> tokens;
    std::vector<Matrix> instances;  // instances[i]: m_i x d, m_i >= 1
};

enum class Header { automatic, yes, no };

// Row order of an intersection.  Vocabularies are stored most-frequent
// first, so target order doubles as frequency rank.
enum class IntersectOrder { target_order, frequency_rank };

// True when the token is usable in the text format: nonempty, no
// whitespace bytes.
bool valid_token(std::string_view token);

// Checks all Embedding invariants, raising on the first violation.
void validate(const Embedding& emb);
void validate(const ContextualEmbedding& ctx);

// word2vec-style text format: optional first line "n d", then one line
// per token: the token followed by d decimal values, space-separated.
// With Header::automatic the first line counts as a header iff it parses
// as exactly two positive integers.  Errors carry the offending line number.
Embedding load_text(const std::string& path, Header header = Header::automatic);

// Writes atomically (temp file + rename) with 9 significant digits, so a
// round-trip preserves tokens exactly and values to 1e-6 relative.
void save_text(const Embedding& emb, const std::string& path, bool with_header);

// Restriction of both embeddings to the shared vocabulary.
AlignedPair intersect(const Embedding& a, const Embedding& b,
                      IntersectOrder order = IntersectOrder::target_order);

// First k rows in stored order (the k most frequent tokens).
Embedding top_k(const Embedding& emb, std::size_t k);

// One row per token: the mean of its instance vectors.
Embedding collapse_means(const ContextualEmbedding& ctx);

// Token -> row lookup.  Never iterated, so map order cannot leak into output.
class TokenIndex {
  public:
    explicit TokenIndex(const Embedding& emb);
    std::optional<std::size_t> find(std::string_view token) const;

  private:
    std::unordered_map<std::string, std::size_t> rows_;
};

}  // namespace orient
