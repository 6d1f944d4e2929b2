#include "orient/embedding.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "orient/error.hpp"
#include "orient/format.hpp"
#include "orient/text.hpp"

namespace orient {
namespace {

bool looks_like_header(std::string_view line) {
    auto fields = split_ws(line);
    std::size_t n, d;
    return fields.size() == 2 && parse_size(fields[0], n) && parse_size(fields[1], d);
}

[[noreturn]] void fail_line(errc code, const std::string& path, std::size_t line_no,
                            const std::string& what) {
    raise(code, path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

bool valid_token(std::string_view token) {
    if (token.empty()) return false;
    for (unsigned char c : token)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f')
            return false;
    return true;
}

void validate(const Embedding& emb) {
    if (emb.tokens.size() != emb.matrix.rows)
        raise(errc::malformed_input, "embedding: token count differs from row count");
    if (emb.matrix.rows == 0 || emb.matrix.cols == 0)
        raise(errc::malformed_input, "embedding: empty");
    std::unordered_set<std::string_view> seen;
    for (const std::string& t : emb.tokens) {
        if (!valid_token(t)) raise(errc::invalid_token, "embedding: token \"" + t + "\" empty or contains whitespace");
        if (!seen.insert(t).second) raise(errc::duplicate_token, "embedding: duplicate token \"" + t + "\"");
    }
    if (!all_finite(emb.matrix)) raise(errc::malformed_input, "embedding: non-finite value");
}

void validate(const ContextualEmbedding& ctx) {
    if (ctx.tokens.size() != ctx.instances.size())
        raise(errc::malformed_input, "contextual embedding: token count differs from instance-list count");
    if (ctx.tokens.empty()) raise(errc::malformed_input, "contextual embedding: empty");
    std::unordered_set<std::string_view> seen;
    std::size_t d = 0;
    for (std::size_t i = 0; i < ctx.tokens.size(); ++i) {
        if (!valid_token(ctx.tokens[i]))
            raise(errc::invalid_token, "contextual embedding: token \"" + ctx.tokens[i] + "\" empty or contains whitespace");
        if (!seen.insert(ctx.tokens[i]).second)
            raise(errc::duplicate_token, "contextual embedding: duplicate token \"" + ctx.tokens[i] + "\"");
        const Matrix& m = ctx.instances[i];
        if (m.rows == 0) raise(errc::malformed_input, "contextual embedding: token \"" + ctx.tokens[i] + "\" has no instances");
        if (d == 0) d = m.cols;
        if (m.cols != d || d == 0) raise(errc::dim_mismatch, "contextual embedding: inconsistent dimension");
        if (!all_finite(m)) raise(errc::malformed_input, "contextual embedding: non-finite value");
    }
}

Embedding load_text(const std::string& path, Header header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open " + path);

    Embedding emb;
    std::unordered_set<std::string> seen;
    std::vector<double> values;
    std::size_t declared_n = 0, declared_d = 0, d = 0, line_no = 0;
    bool expect_header = header == Header::yes;
    bool skip_header_check = header == Header::no;
    bool first_line = true;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            fail_line(errc::malformed_input, path, line_no, "blank line");
        }
        if (first_line) {
            first_line = false;
            bool is_header = !skip_header_check && looks_like_header(line);
            if (expect_header && !is_header)
                fail_line(errc::malformed_input, path, line_no, "expected header \"n d\"");
            if (is_header) {
                auto fields = split_ws(line);
                parse_size(fields[0], declared_n);
                parse_size(fields[1], declared_d);
                continue;
            }
        }
        auto fields = split_ws(line);
        if (fields.size() < 2)
            fail_line(errc::malformed_input, path, line_no, "expected a token and at least one value");
        std::string_view token = fields[0];
        if (!valid_token(token)) fail_line(errc::invalid_token, path, line_no, "invalid token");
        std::size_t row_d = fields.size() - 1;
        if (d == 0) {
            d = row_d;
            if (declared_d != 0 && d != declared_d)
                fail_line(errc::dim_mismatch, path, line_no,
                          "dimension " + std::to_string(row_d) + " does not match header " + std::to_string(declared_d));
        } else if (row_d != d) {
            fail_line(errc::dim_mismatch, path, line_no,
                      "dimension " + std::to_string(row_d) + " does not match previous rows (" + std::to_string(d) + ")");
        }
        for (std::size_t j = 1; j < fields.size(); ++j) {
            double v;
            if (!parse_double(fields[j], v))
                fail_line(errc::malformed_input, path, line_no,
                          "malformed value \"" + std::string(fields[j]) + "\" in column " + std::to_string(j + 1));
            if (!std::isfinite(v))
                fail_line(errc::malformed_input, path, line_no, "non-finite value in column " + std::to_string(j + 1));
            values.push_back(v);
        }
        if (!seen.emplace(token).second)
            fail_line(errc::duplicate_token, path, line_no, "duplicate token \"" + std::string(token) + "\"");
        emb.tokens.emplace_back(token);
    }
    if (in.bad()) raise(errc::io, "read error on " + path);
    if (emb.tokens.empty()) raise(errc::malformed_input, path + ": no embedding rows");
    if (declared_n != 0 && emb.tokens.size() != declared_n)
        raise(errc::malformed_input, path + ": header declares " + std::to_string(declared_n) +
                                         " rows, file has " + std::to_string(emb.tokens.size()));

    emb.matrix = Matrix(emb.tokens.size(), d);
    emb.matrix.values = std::move(values);
    return emb;
}

void save_text(const Embedding& emb, const std::string& path, bool with_header) {
    validate(emb);
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";

    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(errc::io, "cannot open " + tmp.string() + " for writing");
        std::string buf;
        if (with_header) {
            buf = std::to_string(emb.size()) + " " + std::to_string(emb.dim()) + "\n";
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        }
        for (std::size_t i = 0; i < emb.size(); ++i) {
            buf.clear();
            buf += emb.tokens[i];
            for (double v : emb.matrix.row(i)) {
                buf += ' ';
                // 9 significant digits: enough for a 1e-6 relative round-trip.
                append_double(buf, v, 9);
            }
            buf += '\n';
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        }
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            raise(errc::io, "write error on " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        raise(errc::io, "cannot replace " + path);
    }
}

AlignedPair intersect(const Embedding& a, const Embedding& b, IntersectOrder /*order*/) {
    // Both orderings coincide: vocabularies are stored most-frequent first,
    // so appearance order in the target is the frequency rank.
    if (a.dim() != b.dim()) raise(errc::dim_mismatch, "intersect: dimensions differ");
    TokenIndex b_index(b);
    std::vector<std::size_t> a_rows, b_rows;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto j = b_index.find(a.tokens[i])) {
            a_rows.push_back(i);
            b_rows.push_back(*j);
        }
    }
    if (a_rows.empty()) raise(errc::empty_intersection, "intersect: no shared tokens");

    AlignedPair pair;
    const std::size_t d = a.dim();
    pair.target.matrix = Matrix(a_rows.size(), d);
    pair.source.matrix = Matrix(a_rows.size(), d);
    for (std::size_t i = 0; i < a_rows.size(); ++i) {
        pair.target.tokens.push_back(a.tokens[a_rows[i]]);
        pair.source.tokens.push_back(a.tokens[a_rows[i]]);
        auto ta = a.matrix.row(a_rows[i]);
        auto tb = b.matrix.row(b_rows[i]);
        std::copy(ta.begin(), ta.end(), pair.target.matrix.row(i).begin());
        std::copy(tb.begin(), tb.end(), pair.source.matrix.row(i).begin());
    }
    return pair;
}

Embedding top_k(const Embedding& emb, std::size_t k) {
    if (k == 0 || k > emb.size())
        raise(errc::out_of_range, "top_k: k=" + std::to_string(k) + " outside 1.." + std::to_string(emb.size()));
    Embedding out;
    out.tokens.assign(emb.tokens.begin(), emb.tokens.begin() + static_cast<std::ptrdiff_t>(k));
    out.matrix = Matrix(k, emb.dim());
    std::copy(emb.matrix.values.begin(), emb.matrix.values.begin() + static_cast<std::ptrdiff_t>(k * emb.dim()),
              out.matrix.values.begin());
    return out;
}

Embedding collapse_means(const ContextualEmbedding& ctx) {
    validate(ctx);
    const std::size_t d = ctx.instances.front().cols;
    Embedding out;
    out.tokens = ctx.tokens;
    out.matrix = Matrix(ctx.tokens.size(), d);
    for (std::size_t i = 0; i < ctx.tokens.size(); ++i) {
        const Matrix& inst = ctx.instances[i];
        auto row = out.matrix.row(i);
        for (std::size_t r = 0; r < inst.rows; ++r)
            for (std::size_t c = 0; c < d; ++c) row[c] += inst(r, c);
        for (std::size_t c = 0; c < d; ++c) row[c] /= static_cast<double>(inst.rows);
    }
    return out;
}

TokenIndex::TokenIndex(const Embedding& emb) {
    rows_.reserve(emb.size());
    for (std::size_t i = 0; i < emb.size(); ++i) rows_.emplace(emb.tokens[i], i);
}

std::optional<std::size_t> TokenIndex::find(std::string_view token) const {
    auto it = rows_.find(std::string(token));
    return it == rows_.end() ? std::nullopt : std::optional<std::size_t>(it->second);
}

}  // namespace orient
