// Acceptance gate: one line per criterion, "PASS criterion N: ..." or
// "FAIL criterion N: ...", exit code = number of failed criteria.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "orient/align.hpp"
#include "orient/embedding.hpp"
#include "orient/error.hpp"
#include "orient/evaluate.hpp"
#include "orient/kernels.hpp"
#include "orient/linalg.hpp"
#include "orient/procrustes.hpp"
#include "orient/svd.hpp"
#include "orient/translate.hpp"
#include "support.hpp"

using namespace orient;
using test_support::random_embedding;
using test_support::random_matrix;
using test_support::random_orthogonal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

AlignedPair named_pair(Matrix target, Matrix source) {
    AlignedPair pair;
    pair.target.matrix = std::move(target);
    pair.source.matrix = std::move(source);
    for (std::size_t i = 0; i < pair.target.matrix.rows; ++i) {
        pair.target.tokens.push_back("w" + std::to_string(i));
        pair.source.tokens.push_back("w" + std::to_string(i));
    }
    return pair;
}

double score_named(const EvalReport& report, const std::string& name) {
    for (const auto& [key, value] : report.scores)
        if (key == name) return value;
    return -1.0;
}

// ---------------------------------------------------------------------------
// 1. Exact-recovery calibration: rst undoes rotation+scale+translation.
bool criterion1(std::string& detail) {
    auto start = Clock::now();
    Matrix a = random_matrix(1000, 50, 1001);
    Matrix q = random_orthogonal(50, 1002);
    Matrix b = matmul(a, q);
    SplitMix64 rng(1003);
    std::vector<double> shift(50);
    for (double& v : shift) v = 10.0 * rng.next_gaussian();
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t c = 0; c < 50; ++c) b(i, c) = 2.5 * b(i, c) + shift[c];

    AlignedPair pair = named_pair(std::move(a), std::move(b));
    SimilarityTransform t = align(pair, Variant::r_s_t);
    Matrix realigned = apply(t, pair.source.matrix);
    double err = rmse(pair.target.matrix, realigned);
    double cos = mean_cosine(pair.target.matrix, realigned);
    double elapsed = seconds_since(start);
    detail = "rmse=" + fmt(err) + " mean_cosine=" + fmt(cos) + " time=" + fmt(elapsed) + "s";
    return err <= 1e-8 && cos >= 1.0 - 1e-9 && elapsed < 1.0;
}

// ---------------------------------------------------------------------------
// 2. Gaussian-noise RMSE band at d=300, n=10000.
bool criterion2(std::string& detail) {
    auto start = Clock::now();
    Embedding emb = random_embedding(10000, 300, 2001);
    bool ok = true;
    detail = "";
    for (double sigma : {0.1, 0.2, 0.3}) {
        NoiseSpec spec;
        spec.sigma = sigma;
        spec.fraction = 1.0;
        spec.seed = 2002;
        double err = gaussian_calibrate(emb, spec, Variant::r_s_t).scores[0].second;
        double expected = sigma * std::sqrt(300.0);
        bool in_tolerance = std::abs(err - expected) <= 0.2 * expected;
        bool in_band = sigma < 0.15 || (err >= 2.0 && err <= 5.0);
        ok = ok && in_tolerance && in_band;
        detail += "sigma=" + fmt(sigma) + ":rmse=" + fmt(err) + " ";
    }
    double elapsed = seconds_since(start);
    detail += "time=" + fmt(elapsed) + "s";
    return ok && elapsed < 30.0;
}

// ---------------------------------------------------------------------------
// 3. Lemma 1: source scaling never changes the optimal rotation.
bool criterion3(std::string& detail) {
    double worst = 0.0;
    SplitMix64 rng(3001);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix a = random_matrix(50, 8, rng.next_u64());
        Matrix b = random_matrix(50, 8, rng.next_u64());
        double s = 0.1 + 9.9 * rng.next_double();
        Matrix b_scaled = b;
        for (double& v : b_scaled.values) v *= s;
        Matrix r_plain = optimal_rotation(cross_covariance(a, b));
        Matrix r_scaled = optimal_rotation(cross_covariance(a, b_scaled));
        worst = std::max(worst, max_abs_diff(r_plain, r_scaled));
    }
    detail = "max rotation difference over 100 trials = " + fmt(worst);
    return worst <= 1e-8;
}

// ---------------------------------------------------------------------------
// 4. Lemma 2: R* maximizes the inner-product sum; cosine form on unit rows.
bool criterion4(std::string& detail) {
    auto trace_alignment = [](const Matrix& a, const Matrix& br) {
        double total = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i) total += a.values[i] * br.values[i];
        return total;
    };
    auto unit_rows = [](Matrix m) {
        for (std::size_t i = 0; i < m.rows; ++i) {
            double norm = 0.0;
            for (double v : m.row(i)) norm += v * v;
            norm = std::sqrt(norm);
            for (double& v : m.row(i)) v /= norm;
        }
        return m;
    };

    SplitMix64 rng(4001);
    int trace_failures = 0, cosine_failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Matrix a = random_matrix(20, 5, rng.next_u64());
        Matrix b = random_matrix(20, 5, rng.next_u64());
        Matrix r = optimal_rotation(cross_covariance(a, b));
        double best = trace_alignment(a, matmul(b, r));

        Matrix ua = unit_rows(a), ub = unit_rows(b);
        Matrix rn = optimal_rotation(cross_covariance(ua, ub));
        double best_cos = mean_cosine(ua, matmul(ub, rn));

        for (int sub = 0; sub < 100; ++sub) {
            Matrix q = random_orthogonal(5, rng.next_u64());
            if (trace_alignment(a, matmul(b, q)) > best + 1e-9) ++trace_failures;
            if (mean_cosine(ua, matmul(ub, q)) > best_cos + 1e-9) ++cosine_failures;
        }
    }
    detail = "trace violations=" + std::to_string(trace_failures) +
             " cosine violations=" + std::to_string(cosine_failures) + " (100x100 substitutes)";
    return trace_failures == 0 && cosine_failures == 0;
}

// ---------------------------------------------------------------------------
// 5. Lemma 3: all-pairs contextual H equals the mean-based H.
bool criterion5(std::string& detail) {
    double worst_h = 0.0, worst_r = 0.0;
    SplitMix64 rng(5001);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t tokens = 2 + rng.next_below(4);  // 2..5
        ContextualEmbedding ctx_a, ctx_b;
        for (std::size_t i = 0; i < tokens; ++i) {
            ctx_a.tokens.push_back("tok" + std::to_string(i));
            ctx_b.tokens.push_back("tok" + std::to_string(i));
            ctx_a.instances.push_back(random_matrix(1 + rng.next_below(4), 3, rng.next_u64()));
            ctx_b.instances.push_back(random_matrix(1 + rng.next_below(4), 3, rng.next_u64()));
        }
        Matrix h_pairs = all_pairs_cross_covariance(ctx_a, ctx_b);
        AlignedPair means = intersect(collapse_means(ctx_a), collapse_means(ctx_b));
        Matrix h_means = cross_covariance(means.target.matrix, means.source.matrix);
        worst_h = std::max(worst_h, max_abs_diff(h_pairs, h_means));
        worst_r = std::max(worst_r, max_abs_diff(optimal_rotation(h_pairs), optimal_rotation(h_means)));
    }
    detail = "max H difference=" + fmt(worst_h) + " max rotation difference=" + fmt(worst_r);
    return worst_h <= 1e-10 && worst_r <= 1e-8;
}

// ---------------------------------------------------------------------------
// 6. Synthetic two-language translation.
bool criterion6(std::string& detail) {
    auto start = Clock::now();
    Matrix latent = random_matrix(1000, 50, 6001);
    Matrix qs = random_orthogonal(50, 6002);
    Matrix qt = random_orthogonal(50, 6003);
    SplitMix64 rng(6004);

    Embedding source, target;
    source.matrix = matmul(latent, qs);
    target.matrix = matmul(latent, qt);
    for (double& v : source.matrix.values) v += 0.01 * rng.next_gaussian();
    for (double& v : target.matrix.values) v += 0.01 * rng.next_gaussian();
    for (std::size_t i = 0; i < 1000; ++i) {
        source.tokens.push_back("src" + std::to_string(i));
        target.tokens.push_back("tgt" + std::to_string(i));
    }
    Lexicon seed, test;
    for (std::size_t i = 0; i < 200; ++i)
        seed.push_back({"src" + std::to_string(i), "tgt" + std::to_string(i)});
    for (std::size_t i = 200; i < 300; ++i)
        test.push_back({"src" + std::to_string(i), "tgt" + std::to_string(i)});

    std::vector<std::size_t> ks = {1, 10};
    SimilarityTransform t = train_translation(source, target, seed);
    EvalReport aligned = translation_eval(apply(t, source), target, test, ks);
    EvalReport unaligned = translation_eval(source, target, test, ks);

    double p1 = score_named(aligned, "P@1");
    double p10 = score_named(aligned, "P@10");
    double raw1 = score_named(unaligned, "P@1");
    double elapsed = seconds_since(start);
    detail = "P@1=" + fmt(p1) + " P@10=" + fmt(p10) + " unaligned P@1=" + fmt(raw1) +
             " time=" + fmt(elapsed) + "s";
    return p1 >= 0.95 && p10 == 1.0 && raw1 <= 0.02 && elapsed < 5.0;
}

// ---------------------------------------------------------------------------
// 7. Pivot translation tracks direct translation.
bool criterion7(std::string& detail) {
    Matrix latent = random_matrix(300, 16, 7001);
    SplitMix64 rng(7002);
    Embedding l1, l2, pivot;
    l1.matrix = matmul(latent, random_orthogonal(16, 7003));
    l2.matrix = matmul(latent, random_orthogonal(16, 7004));
    pivot.matrix = matmul(latent, random_orthogonal(16, 7005));
    for (double& v : l1.matrix.values) v += 0.01 * rng.next_gaussian();
    for (double& v : l2.matrix.values) v += 0.01 * rng.next_gaussian();
    for (double& v : pivot.matrix.values) v += 0.01 * rng.next_gaussian();
    for (std::size_t i = 0; i < 300; ++i) {
        l1.tokens.push_back("a" + std::to_string(i));
        l2.tokens.push_back("b" + std::to_string(i));
        pivot.tokens.push_back("p" + std::to_string(i));
    }
    Lexicon seed1, seed2, seed_direct, test;
    for (std::size_t i = 0; i < 100; ++i) {
        seed1.push_back({"a" + std::to_string(i), "p" + std::to_string(i)});
        seed2.push_back({"b" + std::to_string(i), "p" + std::to_string(i)});
        seed_direct.push_back({"a" + std::to_string(i), "b" + std::to_string(i)});
    }
    for (std::size_t i = 100; i < 180; ++i)
        test.push_back({"a" + std::to_string(i), "b" + std::to_string(i)});

    std::vector<std::size_t> ks = {1};
    double via_pivot = score_named(pivot_translate(l1, l2, pivot, seed1, seed2, test, ks), "P@1");
    SimilarityTransform direct = train_translation(l1, l2, seed_direct);
    double direct_p1 = score_named(translation_eval(apply(direct, l1), l2, test, ks), "P@1");
    detail = "pivot P@1=" + fmt(via_pivot) + " direct P@1=" + fmt(direct_p1);
    return std::abs(via_pivot - direct_p1) <= 0.10;
}

// ---------------------------------------------------------------------------
// 8. Affine baseline: exact at gamma=0, and a local optimum.
bool criterion8(std::string& detail) {
    Matrix b = random_matrix(40, 6, 8001);
    Matrix q = random_orthogonal(6, 8002);
    Matrix a = matmul(b, q);
    AlignedPair pair = named_pair(a, b);
    AffineTransform t = affine_baseline(pair, 0.0);
    double err = rmse(apply(t, pair.source.matrix), pair.target.matrix);

    auto objective = [&](const Matrix& m) {
        Matrix bm = matmul(pair.source.matrix, m);
        double total = 0.0;
        for (std::size_t i = 0; i < bm.values.size(); ++i) {
            double diff = pair.target.matrix.values[i] - bm.values[i];
            total += diff * diff;
        }
        return total;  // gamma = 0
    };
    double at_solution = objective(t.m);
    int worse_probes = 0;
    SplitMix64 rng(8003);
    for (int probe = 0; probe < 100; ++probe) {
        Matrix delta(6, 6);
        double norm = 0.0;
        for (double& v : delta.values) {
            v = rng.next_gaussian();
            norm += v * v;
        }
        norm = std::sqrt(norm);
        Matrix perturbed = t.m;
        for (std::size_t i = 0; i < delta.values.size(); ++i)
            perturbed.values[i] += 1e-3 * delta.values[i] / norm;
        if (objective(perturbed) >= at_solution) ++worse_probes;
    }
    detail = "rmse=" + fmt(err) + " probes_not_better=" + std::to_string(worse_probes) + "/100";
    return err <= 1e-8 && worse_probes == 100;
}

// ---------------------------------------------------------------------------
// 9. similarity_eval matches a rank-then-Pearson oracle on tied data.
double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::size_t less = 0, equal = 0;
            for (double other : v) {
                if (other < v[i]) ++less;
                if (other == v[i]) ++equal;
            }
            r[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
        }
        return r;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(rx.size());
    my /= static_cast<double>(ry.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

bool criterion9(std::string& detail) {
    SplitMix64 rng(9001);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        // Tokens draw vectors from a small pool of bitwise-identical 2D
        // directions, so exact cosine ties occur in any implementation.
        std::size_t pool_size = 3 + rng.next_below(4);
        std::vector<std::array<double, 2>> pool(pool_size);
        for (auto& v : pool) {
            double angle = 6.283185307179586 * rng.next_double();
            v = {std::cos(angle), std::sin(angle)};
        }
        std::size_t n_tokens = 4 + rng.next_below(8);
        Embedding emb;
        emb.matrix = Matrix(n_tokens, 2);
        for (std::size_t i = 0; i < n_tokens; ++i) {
            emb.tokens.push_back("t" + std::to_string(i));
            const auto& v = pool[rng.next_below(pool_size)];
            emb.matrix(i, 0) = v[0];
            emb.matrix(i, 1) = v[1];
        }
        std::size_t n_items = 3 + rng.next_below(48);  // <= 50
        SimilarityDataset ds;
        std::vector<double> human;
        for (std::size_t item = 0; item < n_items; ++item) {
            std::size_t t1 = rng.next_below(n_tokens), t2 = rng.next_below(n_tokens);
            double score = static_cast<double>(rng.next_below(4));  // tied human scores
            ds.push_back({emb.tokens[t1], emb.tokens[t2], score});
            human.push_back(score);
        }
        std::vector<double> model;
        for (const SimilarityItem& item : ds) {
            std::size_t i1 = 0, i2 = 0;
            for (std::size_t i = 0; i < n_tokens; ++i) {
                if (emb.tokens[i] == item.token1) i1 = i;
                if (emb.tokens[i] == item.token2) i2 = i;
            }
            // Raw scores come from the library's own kernel arithmetic so the
            // oracle sees exactly the tie classes the library ranks (a
            // reimplemented dot product can differ by 1 ulp under FMA
            // contraction and split a tie).  The contract under test is the
            // rank-averaging and correlation below, which stay independent.
            const auto& k = kernels::ops();
            double dot = k.dot(emb.matrix.row(i1).data(), emb.matrix.row(i2).data(), 2);
            double n1 = k.sum_sq(emb.matrix.row(i1).data(), 2);
            double n2 = k.sum_sq(emb.matrix.row(i2).data(), 2);
            model.push_back(dot / std::sqrt(n1 * n2));
        }
        double reported =
            similarity_eval(emb, emb, ds, SimilarityMode::within_target).scores[0].second;
        worst = std::max(worst, std::abs(reported - spearman_oracle(model, human)));
    }
    detail = "max |reported - oracle| over 1000 datasets = " + fmt(worst);
    return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 10. analogy_eval equals an exhaustive-scan oracle on noisy parallelograms.
bool criterion10(std::string& detail) {
    SplitMix64 rng(10001);
    const std::size_t base_words = 20, d = 8;
    Embedding emb;
    emb.matrix = Matrix(2 * base_words, d);
    std::vector<double> offset(d);
    for (double& v : offset) v = rng.next_gaussian();
    for (std::size_t i = 0; i < base_words; ++i) {
        emb.tokens.push_back("base" + std::to_string(i));
        emb.tokens.push_back("shifted" + std::to_string(i));
        for (std::size_t c = 0; c < d; ++c) {
            double base = rng.next_gaussian();
            emb.matrix(2 * i, c) = base + 0.01 * rng.next_gaussian();
            emb.matrix(2 * i + 1, c) = base + offset[c] + 0.01 * rng.next_gaussian();
        }
    }
    AnalogyDataset ds;
    for (std::size_t i = 0; i < base_words; ++i)
        for (std::size_t j = i + 1; j < base_words && ds.size() < 40; ++j)
            ds.push_back({"base" + std::to_string(i), "shifted" + std::to_string(i),
                          "base" + std::to_string(j), "shifted" + std::to_string(j)});

    auto plain_cos = [&](const std::vector<double>& q, std::size_t row) {
        double dot = 0.0, nq = 0.0, nr = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            dot += q[c] * emb.matrix(row, c);
            nq += q[c] * q[c];
            nr += emb.matrix(row, c) * emb.matrix(row, c);
        }
        if (nq == 0.0 || nr == 0.0) return -2.0;
        return dot / std::sqrt(nq * nr);
    };
    TokenIndex index(emb);
    bool all_equal = true;
    detail = "";
    for (std::size_t k : {std::size_t{1}, std::size_t{5}}) {
        std::size_t hits = 0;
        for (const AnalogyItem& item : ds) {
            std::size_t ia = *index.find(item.a), ib = *index.find(item.b);
            std::size_t ic = *index.find(item.c), id = *index.find(item.d);
            std::vector<double> query(d);
            for (std::size_t c = 0; c < d; ++c)
                query[c] = emb.matrix(ic, c) + emb.matrix(ib, c) - emb.matrix(ia, c);
            double gold = plain_cos(query, id);
            std::size_t rank = 1;
            for (std::size_t row = 0; row < emb.size(); ++row) {
                if (row == ia || row == ib || row == ic || row == id) continue;
                double s = plain_cos(query, row);
                if (s > gold || (s == gold && emb.tokens[row] < emb.tokens[id])) ++rank;
            }
            if (gold != -2.0 && rank <= k) ++hits;
        }
        double oracle = static_cast<double>(hits) / static_cast<double>(ds.size());
        double reported = analogy_eval(emb, emb, ds, k).scores[0].second;
        all_equal = all_equal && reported == oracle;
        detail += "k=" + std::to_string(k) + ":reported=" + fmt(reported) +
                  ",oracle=" + fmt(oracle) + " ";
    }
    detail.pop_back();
    return all_equal;
}

// ---------------------------------------------------------------------------
// 11. Thread count never changes a byte of any CLI command's output.
struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    std::string cmd = std::string(ORIENT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    CliRun result;
    if (!pipe) return result;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

bool criterion11(std::string& detail) {
    test_support::TempDir dir;

    Embedding target = random_embedding(300, 12, 11001);
    Embedding source = random_embedding(300, 12, 11002);
    save_text(target, dir.file("target.txt"), true);
    save_text(source, dir.file("source.txt"), true);

    // Translation fixture: two views of one latent space with renamed tokens.
    Matrix latent = random_matrix(200, 10, 11003);
    Embedding tr_source, tr_target;
    tr_source.matrix = matmul(latent, random_orthogonal(10, 11004));
    tr_target.matrix = matmul(latent, random_orthogonal(10, 11005));
    std::string seed_lex, test_lex;
    for (std::size_t i = 0; i < 200; ++i) {
        tr_source.tokens.push_back("s" + std::to_string(i));
        tr_target.tokens.push_back("t" + std::to_string(i));
        std::string line = "s" + std::to_string(i) + "\tt" + std::to_string(i) + "\n";
        (i < 120 ? seed_lex : test_lex) += line;
    }
    save_text(tr_source, dir.file("tr_source.txt"), true);
    save_text(tr_target, dir.file("tr_target.txt"), true);
    test_support::write_file(dir.file("seed.tsv"), seed_lex);
    test_support::write_file(dir.file("test.tsv"), test_lex);

    test_support::write_file(dir.file("sim.tsv"), "w0\tw1\t3\nw1\tw2\t2\nw2\tw3\t1\nw0\tw4\t2\n");
    test_support::write_file(dir.file("analogy.txt"), "w0 w1 w2 w3\nw4 w5 w6 w7\nw1 w3 w5 w7\n");

    struct Command {
        std::string name;
        std::string args;                   // with {T} placeholder for the run tag
        std::vector<std::string> out_files; // with {T} placeholder
    };
    std::vector<Command> commands = {
        {"align",
         "align --target " + dir.file("target.txt") + " --source " + dir.file("source.txt") +
             " --variant wrst --out " + dir.file("aligned_{T}.txt") + " --transform-out " +
             dir.file("t_{T}.json"),
         {"aligned_{T}.txt", "t_{T}.json"}},
        {"calibrate",
         "calibrate --emb " + dir.file("target.txt") + " --sigma 0.1,0.2 --fraction 0.5,1 --seed 7",
         {}},
        {"eval-sim",
         "eval --mode sim --target " + dir.file("target.txt") + " --source " +
             dir.file("source.txt") + " --dataset " + dir.file("sim.tsv") + " --cross",
         {}},
        {"eval-analogy",
         "eval --mode analogy --target " + dir.file("target.txt") + " --source " +
             dir.file("target.txt") + " --dataset " + dir.file("analogy.txt") + " --k 3",
         {}},
        {"translate",
         "translate --source " + dir.file("tr_source.txt") + " --target " +
             dir.file("tr_target.txt") + " --seed-lexicon " + dir.file("seed.tsv") +
             " --test-lexicon " + dir.file("test.tsv") + " --k 1,5",
         {}},
        {"ensemble",
         "ensemble --target " + dir.file("target.txt") + " --source " + dir.file("source.txt") +
             " --variant rt --out " + dir.file("ens_{T}.txt"),
         {"ens_{T}.txt"}},
        {"info", "info --emb " + dir.file("target.txt"), {}},
    };

    auto expand = [](std::string text, const std::string& tag) {
        for (std::size_t pos; (pos = text.find("{T}")) != std::string::npos;)
            text.replace(pos, 3, tag);
        return text;
    };

    detail = "";
    bool ok = true;
    for (const Command& command : commands) {
        CliRun one = run_cli("--threads 1 " + expand(command.args, "one"));
        CliRun three = run_cli("--threads 3 " + expand(command.args, "three"));
        bool same = one.exit_code == 0 && three.exit_code == 0 && one.out == three.out;
        for (const std::string& file : command.out_files)
            same = same && test_support::read_file(dir.file(expand(file, "one"))) ==
                               test_support::read_file(dir.file(expand(file, "three")));
        if (!same) {
            ok = false;
            detail += command.name + " differs; ";
        }
    }
    if (ok) detail = "7 commands byte-identical across --threads 1 and 3";
    return ok;
}

struct Criterion {
    const char* label;
    bool (*check)(std::string&);
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"exact similarity-transform recovery (n=1000, d=50, rst)", criterion1},
        {"Gaussian-noise RMSE band (d=300, n=10000)", criterion2},
        {"rotation invariance under source scaling (Lemma 1)", criterion3},
        {"trace and cosine optimality of R* (Lemma 2)", criterion4},
        {"all-pairs contextual H equals mean-based H (Lemma 3)", criterion5},
        {"synthetic two-language translation precision", criterion6},
        {"pivot translation comparable to direct", criterion7},
        {"affine baseline exactness and local optimality", criterion8},
        {"Spearman tie handling matches independent oracle", criterion9},
        {"analogy accuracy equals exhaustive-scan oracle", criterion10},
        {"CLI outputs byte-identical across thread counts", criterion11},
    };

    int failures = 0;
    int id = 0;
    for (const Criterion& criterion : criteria) {
        ++id;
        std::string detail;
        bool pass = false;
        try {
            pass = criterion.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!pass) ++failures;
        std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, criterion.label,
                    detail.c_str());
        std::fflush(stdout);
    }
    std::fprintf(stderr, "%d/11 criteria passed\n", 11 - failures);
    return failures;
}
