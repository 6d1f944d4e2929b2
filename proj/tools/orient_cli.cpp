#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orient/align.hpp"
#include "orient/embedding.hpp"
#include "orient/error.hpp"
#include "orient/evaluate.hpp"
#include "orient/format.hpp"
#include "orient/kernels.hpp"
#include "orient/parallel.hpp"
#include "orient/text.hpp"
#include "orient/translate.hpp"

namespace {

using namespace orient;

// Results go to stdout unbuffered-at-exit via one write; diagnostics to stderr.
void emit(const std::string& out) { std::fwrite(out.data(), 1, out.size(), stdout); }

void note(const std::string& msg) { std::fprintf(stderr, "%s\n", msg.c_str()); }

Variant variant_from_flag(const std::string& name) {
    auto v = parse_variant(name);
    if (!v) raise(errc::usage, "unknown variant \"" + name + "\" (expected r|rt|c|rs|rst|wr|wrst|norm)");
    return *v;
}

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    for (std::string_view field : split_on(text, ',')) {
        double v;
        if (!parse_double(field, v))
            raise(errc::usage, std::string(flag) + ": malformed number \"" + std::string(field) + "\"");
        out.push_back(v);
    }
    if (out.empty()) raise(errc::usage, std::string(flag) + ": empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* flag) {
    std::vector<std::size_t> out;
    for (std::string_view field : split_on(text, ',')) {
        std::size_t v;
        if (!parse_size(field, v))
            raise(errc::usage, std::string(flag) + ": malformed positive integer \"" + std::string(field) + "\"");
        out.push_back(v);
    }
    if (out.empty()) raise(errc::usage, std::string(flag) + ": empty list");
    return out;
}

void append_metric(std::string& out, const char* name, double value) {
    out += name;
    out += '\t';
    append_double(out, value, 9);
    out += '\n';
}

void warn_alignment(const AlignWarnings& warnings) {
    if (warnings.non_positive_scale)
        note("warning: optimal scale is non-positive; inputs are anti-correlated");
    if (warnings.dropped_zero_norm)
        note("warning: dropped " + std::to_string(warnings.dropped_zero_norm) +
             " zero-norm pairs before normalizing");
}

struct AlignArgs {
    std::string target_path, source_path, out_path, transform_out;
    std::string variant = "r";
    std::size_t vocab_limit = 0;
    bool so3 = false;
    bool legacy_scale = false;
    std::string weight_policy = "product";
    bool no_header = false;
};

AlignOptions build_options(const AlignArgs& args) {
    AlignOptions opts;
    opts.rotation.allow_reflection = !args.so3;
    opts.legacy_uncentered_scale = args.legacy_scale;
    if (args.weight_policy == "product") opts.weight_policy = NormWeightPolicy::product;
    else if (args.weight_policy == "min") opts.weight_policy = NormWeightPolicy::min;
    else if (args.weight_policy == "mean") opts.weight_policy = NormWeightPolicy::mean;
    else raise(errc::usage, "unknown weight policy \"" + args.weight_policy + "\"");
    return opts;
}

int cmd_align(const AlignArgs& args) {
    Variant variant = variant_from_flag(args.variant);
    AlignOptions opts = build_options(args);
    Embedding target = load_text(args.target_path);
    Embedding source = load_text(args.source_path);
    AlignedPair pair = intersect(target, source);
    note("intersection: " + std::to_string(pair.target.size()) + " tokens");

    AlignedPair fit = pair;
    if (args.vocab_limit > 0) {
        fit.target = top_k(pair.target, args.vocab_limit);
        fit.source = top_k(pair.source, args.vocab_limit);
    }
    AlignWarnings warnings;
    SimilarityTransform t = align(fit, variant, opts, &warnings);
    warn_alignment(warnings);

    Embedding aligned_source = apply(t, source);           // every row, not just shared ones
    Matrix aligned_shared = apply(t, pair.source.matrix);  // for the after metrics
    Matrix eval_target = evaluation_target(pair.target, variant);

    std::string out;
    append_metric(out, "rmse_before", rmse(pair.target.matrix, pair.source.matrix));
    append_metric(out, "mean_cosine_before", mean_cosine(pair.target.matrix, pair.source.matrix));
    append_metric(out, "rmse_after", rmse(eval_target, aligned_shared));
    append_metric(out, "mean_cosine_after", mean_cosine(eval_target, aligned_shared));
    emit(out);

    save_text(aligned_source, args.out_path, !args.no_header);
    if (!args.transform_out.empty()) save_transform(t, args.transform_out);
    return 0;
}

struct CalibrateArgs {
    std::string emb_path;
    std::string sigmas = "0.1,0.2,0.3";
    std::string fractions = "1";
    std::uint64_t seed = 0;
    std::string variant = "rst";
};

int cmd_calibrate(const CalibrateArgs& args) {
    Variant variant = variant_from_flag(args.variant);
    std::vector<double> sigmas = parse_double_list(args.sigmas, "--sigma");
    std::vector<double> fractions = parse_double_list(args.fractions, "--fraction");
    Embedding emb = load_text(args.emb_path);

    std::string out;
    for (double sigma : sigmas) {
        for (double fraction : fractions) {
            NoiseSpec spec{sigma, fraction, args.seed};
            EvalReport report = gaussian_calibrate(emb, spec, variant);
            append_double(out, sigma, 9);
            out += '\t';
            append_double(out, fraction, 9);
            out += '\t';
            append_double(out, report.scores.front().second, 9);
            out += '\n';
        }
    }
    emit(out);
    return 0;
}

struct EvalArgs {
    std::string mode, target_path, source_path, dataset_path;
    bool cross = false;
    std::size_t k = 1;
};

int cmd_eval(const EvalArgs& args) {
    Embedding target = load_text(args.target_path);
    Embedding source = load_text(args.source_path);
    EvalReport report;
    if (args.mode == "sim") {
        report = similarity_eval(target, source, load_similarity(args.dataset_path),
                                 args.cross ? SimilarityMode::cross : SimilarityMode::within_target);
    } else if (args.mode == "analogy") {
        report = analogy_eval(target, source, load_analogy(args.dataset_path), args.k);
    } else {
        raise(errc::usage, "unknown mode \"" + args.mode + "\" (expected sim|analogy)");
    }
    emit(report.to_text());
    return 0;
}

struct TranslateArgs {
    std::string source_path, target_path, seed_lexicon, test_lexicon;
    std::string pivot_path, seed_lexicon2;
    std::string ks = "1,5,10";
    std::string variant = "wrst";
    std::string space = "union";
};

int cmd_translate(const TranslateArgs& args) {
    Variant variant = variant_from_flag(args.variant);
    SearchSpace space;
    if (args.space == "union") space = SearchSpace::united;
    else if (args.space == "target") space = SearchSpace::target_only;
    else raise(errc::usage, "unknown search space \"" + args.space + "\" (expected union|target)");
    std::vector<std::size_t> ks = parse_size_list(args.ks, "--k");

    Embedding source = load_text(args.source_path);
    Embedding target = load_text(args.target_path);
    Lexicon seed = load_lexicon(args.seed_lexicon);
    Lexicon test = load_lexicon(args.test_lexicon);

    EvalReport report;
    if (!args.pivot_path.empty()) {
        if (args.seed_lexicon2.empty())
            raise(errc::usage, "--pivot requires --seed-lexicon2 (target-to-pivot seed pairs)");
        Embedding pivot = load_text(args.pivot_path);
        Lexicon seed2 = load_lexicon(args.seed_lexicon2);
        report = pivot_translate(source, target, pivot, seed, seed2, test, ks, variant, space);
    } else {
        AlignWarnings warnings;
        SimilarityTransform t = train_translation(source, target, seed, variant, {}, &warnings);
        warn_alignment(warnings);
        report = translation_eval(apply(t, source), target, test, ks, space);
    }
    emit(report.to_text());
    return 0;
}

struct EnsembleArgs {
    std::string target_path, source_path, out_path;
    std::string variant = "r";
    bool no_header = false;
};

int cmd_ensemble(const EnsembleArgs& args) {
    Variant variant = variant_from_flag(args.variant);
    Embedding target = load_text(args.target_path);
    Embedding source = load_text(args.source_path);
    AlignedPair pair = intersect(target, source);
    note("intersection: " + std::to_string(pair.target.size()) + " tokens");

    AlignWarnings warnings;
    SimilarityTransform t = align(pair, variant, {}, &warnings);
    warn_alignment(warnings);

    AlignedPair aligned;
    aligned.target.tokens = pair.target.tokens;
    aligned.target.matrix = evaluation_target(pair.target, variant);
    aligned.source.tokens = pair.source.tokens;
    aligned.source.matrix = apply(t, pair.source.matrix);
    save_text(ensemble_average(aligned), args.out_path, !args.no_header);
    return 0;
}

int cmd_info(const std::string& emb_path) {
    Embedding emb = load_text(emb_path);
    const auto& k = kernels::ops();
    double min_norm = 0.0, max_norm = 0.0, total = 0.0;
    for (std::size_t i = 0; i < emb.size(); ++i) {
        double norm = std::sqrt(k.sum_sq(emb.matrix.row(i).data(), emb.dim()));
        if (i == 0 || norm < min_norm) min_norm = norm;
        if (i == 0 || norm > max_norm) max_norm = norm;
        total += norm;
    }
    std::string out;
    out += "n\t" + std::to_string(emb.size()) + "\n";
    out += "d\t" + std::to_string(emb.dim()) + "\n";
    append_metric(out, "norm_min", min_norm);
    append_metric(out, "norm_mean", total / static_cast<double>(emb.size()));
    append_metric(out, "norm_max", max_norm);
    emit(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form embedding alignment: rotation, translation, scaling"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = machine parallelism; never changes results)");

    AlignArgs align_args;
    CLI::App* align_cmd = app.add_subcommand("align", "Align a source embedding onto a target");
    align_cmd->add_option("--target", align_args.target_path, "Target embedding file")->required();
    align_cmd->add_option("--source", align_args.source_path, "Source embedding file")->required();
    align_cmd->add_option("--variant", align_args.variant, "Variant: r|rt|c|rs|rst|wr|wrst|norm");
    align_cmd->add_option("--out", align_args.out_path, "Aligned source embedding output")->required();
    align_cmd->add_option("--transform-out", align_args.transform_out, "Transform JSON output");
    align_cmd->add_option("--vocab-limit", align_args.vocab_limit,
                          "Learn on the K most frequent shared tokens, apply to all rows");
    align_cmd->add_flag("--so3", align_args.so3, "Forbid reflections (proper rotations only)");
    align_cmd->add_flag("--legacy-uncentered-scale", align_args.legacy_scale,
                        "Compute the rst scale on uncentered data");
    align_cmd->add_option("--weight-policy", align_args.weight_policy,
                          "Weighted variants: product|min|mean of the pair norms");
    align_cmd->add_flag("--no-header", align_args.no_header, "Write the output without an \"n d\" header");

    CalibrateArgs cal_args;
    CLI::App* cal_cmd = app.add_subcommand("calibrate", "Gaussian-noise alignment calibration curve");
    cal_cmd->add_option("--emb", cal_args.emb_path, "Embedding file")->required();
    cal_cmd->add_option("--sigma", cal_args.sigmas, "Comma-separated noise levels");
    cal_cmd->add_option("--fraction", cal_args.fractions, "Comma-separated noised-row fractions in (0,1]");
    cal_cmd->add_option("--seed", cal_args.seed, "RNG seed");
    cal_cmd->add_option("--variant", cal_args.variant, "Alignment variant");

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Similarity or analogy test");
    eval_cmd->add_option("--mode", eval_args.mode, "sim|analogy")->required();
    eval_cmd->add_option("--target", eval_args.target_path, "Target embedding file")->required();
    eval_cmd->add_option("--source", eval_args.source_path, "Source embedding file")->required();
    eval_cmd->add_option("--dataset", eval_args.dataset_path, "Dataset file")->required();
    eval_cmd->add_flag("--cross", eval_args.cross, "Similarity across embeddings instead of within target");
    eval_cmd->add_option("--k", eval_args.k, "Analogy: count a hit within the top k neighbors");

    TranslateArgs tr_args;
    CLI::App* tr_cmd = app.add_subcommand("translate", "Seed-lexicon translation evaluation");
    tr_cmd->add_option("--source", tr_args.source_path, "Source-language embedding")->required();
    tr_cmd->add_option("--target", tr_args.target_path, "Target-language embedding")->required();
    tr_cmd->add_option("--seed-lexicon", tr_args.seed_lexicon, "Training pairs source<TAB>target")->required();
    tr_cmd->add_option("--test-lexicon", tr_args.test_lexicon, "Held-out pairs source<TAB>target")->required();
    tr_cmd->add_option("--k", tr_args.ks, "Comma-separated precision cutoffs");
    tr_cmd->add_option("--variant", tr_args.variant, "Alignment variant");
    tr_cmd->add_option("--space", tr_args.space, "Neighbor pool: union|target");
    tr_cmd->add_option("--pivot", tr_args.pivot_path, "Pivot-language embedding (three-way mode)");
    tr_cmd->add_option("--seed-lexicon2", tr_args.seed_lexicon2, "Target-to-pivot training pairs");

    EnsembleArgs ens_args;
    CLI::App* ens_cmd = app.add_subcommand("ensemble", "Align, then average the shared vocabulary");
    ens_cmd->add_option("--target", ens_args.target_path, "Target embedding file")->required();
    ens_cmd->add_option("--source", ens_args.source_path, "Source embedding file")->required();
    ens_cmd->add_option("--variant", ens_args.variant, "Alignment variant");
    ens_cmd->add_option("--out", ens_args.out_path, "Combined embedding output")->required();
    ens_cmd->add_flag("--no-header", ens_args.no_header, "Write the output without an \"n d\" header");

    std::string info_path;
    CLI::App* info_cmd = app.add_subcommand("info", "Print embedding shape and norm statistics");
    info_cmd->add_option("--emb", info_path, "Embedding file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    try {
        set_thread_count(threads);
        if (align_cmd->parsed()) return cmd_align(align_args);
        if (cal_cmd->parsed()) return cmd_calibrate(cal_args);
        if (eval_cmd->parsed()) return cmd_eval(eval_args);
        if (tr_cmd->parsed()) return cmd_translate(tr_args);
        if (ens_cmd->parsed()) return cmd_ensemble(ens_args);
        if (info_cmd->parsed()) return cmd_info(info_path);
        std::fprintf(stderr, "no subcommand given\n");
        return 2;
    } catch (const orient::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return is_numeric_failure(e.code()) ? 3 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
