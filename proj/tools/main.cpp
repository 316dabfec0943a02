// obfkit — single entry point binding corpus tools, obfuscation, metrics,
// dataset building, experiments, and report emission.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "exp_config.hpp"
#include "json.hpp"
#include "obfkit/data/builders.hpp"
#include "obfkit/data/corpus.hpp"
#include "obfkit/data/export.hpp"
#include "obfkit/exp/cft.hpp"
#include "obfkit/exp/forward.hpp"
#include "obfkit/exp/patterns.hpp"
#include "obfkit/exp/prompts.hpp"
#include "obfkit/exp/reverse.hpp"
#include "obfkit/lang/checker.hpp"
#include "obfkit/metrics/codebleu.hpp"
#include "obfkit/metrics/reversibility.hpp"
#include "obfkit/obf/record.hpp"
#include "obfkit/obf/transforms.hpp"
#include "obfkit/stats/emit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace obfkit;

namespace {

struct GlobalFlags {
    uint64_t seed = 0;
    bool json_out = false;
    int jobs = 0;  // 0 = logical cores
};

// ---- small I/O helpers -------------------------------------------------

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

lang::Ast analyze_or_throw(const std::string& source, const std::string& label) {
    lang::CheckedProgram checked = lang::analyze(source);
    if (!checked.ok()) {
        throw std::runtime_error(label + " does not check:\n" + checked.report.summary());
    }
    return std::move(*checked.ast);
}

obf::Technique technique_or_throw(const std::string& name) {
    auto technique = obf::technique_from_name(name);
    if (!technique) throw std::runtime_error("unknown technique '" + name + "'");
    return *technique;
}

obf::NamingScheme scheme_or_throw(const std::string& name) {
    auto scheme = obf::scheme_from_name(name);
    if (!scheme) throw std::runtime_error("unknown naming scheme '" + name + "'");
    return *scheme;
}

stats::ReportFormat format_or_throw(const std::string& name) {
    auto format = stats::format_from_name(name);
    if (!format) throw std::runtime_error("unknown format '" + name + "' (json|csv|both)");
    return *format;
}

json score_to_json(const metrics::CodeBleuScore& s) {
    return {{"total", s.total},
            {"ngram", s.ngram},
            {"weighted_ngram", s.weighted_ngram},
            {"ast_match", s.ast_match},
            {"dataflow_match", s.dataflow_match},
            {"parse_fallback", s.parse_fallback}};
}

void print_score_human(const char* label, const metrics::CodeBleuScore& s) {
    std::printf("%-16s total %.6f  (ngram %.6f, weighted %.6f, ast %.6f, dataflow %.6f)%s\n",
                label, s.total, s.ngram, s.weighted_ngram, s.ast_match, s.dataflow_match,
                s.parse_fallback ? "  [parse fallback]" : "");
}

json aggregates_to_json(const exp::Aggregates& a) {
    return {{"total", a.total},
            {"passed", a.passed},
            {"first_pass", a.first_pass},
            {"echo_count", a.echo_count},
            {"pass_rate", a.pass_rate},
            {"first_pass_rate", a.first_pass_rate},
            {"mean_iterations", a.mean_iterations},
            {"taxonomy", a.taxonomy},
            {"sim_mean", a.sim_mean},
            {"sim_min", a.sim_min},
            {"sim_max", a.sim_max},
            {"readability_original_mean", a.readability_original_mean},
            {"readability_final_mean", a.readability_final_mean}};
}

void print_files(const stats::EmitResult& emitted) {
    for (const auto& file : emitted.files) std::printf("wrote %s\n", file.c_str());
}

// ---- corpus ------------------------------------------------------------

int cmd_corpus_validate(const GlobalFlags& g, const std::string& root, int max_programs) {
    data::CorpusLimits limits;
    limits.max_programs = static_cast<size_t>(max_programs);
    data::Corpus corpus = data::load_corpus(root, limits);

    std::map<std::string, int> problems;
    for (const auto& entry : corpus.entries) ++problems[entry.problem_id];

    if (g.json_out) {
        json entries = json::array();
        for (const auto& e : corpus.entries) {
            entries.push_back({{"problem_id", e.problem_id},
                               {"program_id", e.program_id},
                               {"path", e.path},
                               {"tests", e.suite.cases.size()}});
        }
        json skips = json::array();
        for (const auto& s : corpus.skips) {
            skips.push_back(
                {{"path", s.path}, {"category", s.category}, {"message", s.message}});
        }
        json j = {{"root", corpus.root},
                  {"manifest_digest", corpus.manifest_digest},
                  {"problems", problems.size()},
                  {"entries", std::move(entries)},
                  {"skips", std::move(skips)}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        for (const auto& s : corpus.skips) {
            std::fprintf(stderr, "skip %s: %s: %s\n", s.path.c_str(), s.category.c_str(),
                         s.message.c_str());
        }
        std::printf("corpus ok: %zu programs across %zu problems (digest %s)\n",
                    corpus.entries.size(), problems.size(), corpus.manifest_digest.c_str());
    }
    return corpus.skips.empty() ? 0 : 1;
}

// ---- obfuscate -----------------------------------------------------------

int cmd_obfuscate(const GlobalFlags& g, const std::string& in_path, const std::string& out_path,
                  std::string record_path, const std::string& technique_name,
                  const std::string& scheme_name, double density) {
    obf::Technique technique = technique_or_throw(technique_name);
    obf::ObfParams params;
    params.scheme = scheme_or_throw(scheme_name);
    params.density = density;

    std::string source = read_input(in_path);
    lang::Ast ast = analyze_or_throw(source, in_path == "-" ? "stdin" : in_path);
    obf::ObfResult result = obf::apply(technique, ast, params, g.seed);
    json record = result.record.to_json();

    if (record_path.empty() && !out_path.empty()) record_path = out_path + ".record.json";
    if (!out_path.empty()) write_text(out_path, result.source);
    if (!record_path.empty()) write_text(record_path, record.dump(2) + "\n");

    if (g.json_out) {
        json j = {{"technique", obf::technique_name(technique)}, {"seed", g.seed}};
        if (out_path.empty()) {
            j["source"] = result.source;
        } else {
            j["out"] = out_path;
        }
        if (!record_path.empty()) {
            j["record_path"] = record_path;
        } else {
            j["record"] = record;
        }
        std::printf("%s\n", j.dump(2).c_str());
    } else if (out_path.empty()) {
        std::fputs(result.source.c_str(), stdout);
    } else {
        std::printf("wrote %s\n", out_path.c_str());
        if (!record_path.empty()) std::printf("wrote %s\n", record_path.c_str());
    }
    return 0;
}

// ---- metrics -------------------------------------------------------------

int cmd_metrics_score(const GlobalFlags& g, const std::vector<std::string>& pair) {
    metrics::CodeBleuScore s = metrics::codebleu(read_input(pair[0]), read_input(pair[1]));
    if (g.json_out) {
        json j = {{"candidate", pair[0]}, {"reference", pair[1]}, {"codebleu", score_to_json(s)}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        print_score_human("codebleu", s);
    }
    return 0;
}

int cmd_metrics_quad(const GlobalFlags& g, const std::string& ft, const std::string& orig,
                     const std::string& base, const std::string& tool) {
    metrics::SimilarityQuad q = metrics::similarity_quad(read_input(ft), read_input(orig),
                                                         read_input(base), read_input(tool));
    if (g.json_out) {
        json j = {{"s1", score_to_json(q.s1)},
                  {"s2", score_to_json(q.s2)},
                  {"s3", score_to_json(q.s3)},
                  {"s4", score_to_json(q.s4)}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        print_score_human("s1 ft/orig", q.s1);
        print_score_human("s2 ft/base", q.s2);
        print_score_human("s3 base/orig", q.s3);
        print_score_human("s4 ft/tool", q.s4);
    }
    return 0;
}

int cmd_metrics_reverse(const GlobalFlags& g, const std::string& orig, const std::string& obf,
                        const std::string& deobf, double sim_threshold,
                        double readability_margin) {
    metrics::ReverseMargins margins;
    margins.sim_threshold = sim_threshold;
    margins.readability_margin = readability_margin;
    metrics::ReversibilityVerdict v =
        metrics::reverse_success(read_input(orig), read_input(obf), read_input(deobf), margins);
    if (g.json_out) {
        json j = {{"success", v.success},
                  {"reasons", v.reasons},
                  {"s_deobf_obf", score_to_json(v.s_deobf_obf)},
                  {"s_obf_orig", score_to_json(v.s_obf_orig)},
                  {"readability",
                   {{"original", v.r_orig.value},
                    {"obfuscated", v.r_obf.value},
                    {"deobfuscated", v.r_deobf.value}}},
                  {"tokens",
                   {{"original", v.tokens_orig},
                    {"obfuscated", v.tokens_obf},
                    {"deobfuscated", v.tokens_deobf}}},
                  {"margins",
                   {{"sim_threshold", margins.sim_threshold},
                    {"readability_margin", margins.readability_margin}}}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("success: %s\n", v.success ? "yes" : "no");
        std::printf("similarity deobf/obf %.6f (threshold %.2f), obf/orig %.6f\n",
                    v.s_deobf_obf.total, margins.sim_threshold, v.s_obf_orig.total);
        std::printf("readability orig %.4f, obf %.4f, deobf %.4f (margin %.2f)\n",
                    v.r_orig.value, v.r_obf.value, v.r_deobf.value,
                    margins.readability_margin);
        std::printf("tokens orig %d, obf %d, deobf %d\n", v.tokens_orig, v.tokens_obf,
                    v.tokens_deobf);
        for (const auto& reason : v.reasons) std::printf("reason: %s\n", reason.c_str());
    }
    return 0;
}

// ---- dataset ---------------------------------------------------------------

json pair_set_to_json(const data::PairSet& ps) {
    json pairs = json::array();
    for (const auto& p : ps.pairs) {
        pairs.push_back({{"problem_id", p.problem_id},
                         {"program_id", p.program_id},
                         {"original", p.original},
                         {"obfuscated", p.obfuscated},
                         {"record", p.record.to_json()}});
    }
    return {{"technique", obf::technique_name(ps.technique)},
            {"seed", ps.seed},
            {"count", ps.pairs.size()},
            {"pairs", std::move(pairs)}};
}

json triplets_to_json(const std::vector<data::TripletInstance>& items,
                      obf::Technique technique, uint64_t seed) {
    json arr = json::array();
    for (const auto& t : items) {
        json j = {{"task", data::triplet_task_name(t.task)},
                  {"code_a", t.code_a},
                  {"target", t.target},
                  {"technique", obf::technique_name(t.technique)},
                  {"problem_a", t.problem_a},
                  {"program_a", t.program_a}};
        if (!t.code_b.empty()) j["code_b"] = t.code_b;
        if (!t.problem_b.empty()) {
            j["problem_b"] = t.problem_b;
            j["program_b"] = t.program_b;
        }
        arr.push_back(std::move(j));
    }
    return {{"technique", obf::technique_name(technique)},
            {"seed", seed},
            {"count", items.size()},
            {"items", std::move(arr)}};
}

int emit_dataset_json(const GlobalFlags& g, const json& payload, const std::string& out_path,
                      const char* what, size_t count) {
    if (!out_path.empty()) {
        write_text(out_path, payload.dump(2) + "\n");
        if (g.json_out) {
            json j = {{"out", out_path}, {"count", count}};
            std::printf("%s\n", j.dump(2).c_str());
        } else {
            std::printf("wrote %zu %s to %s\n", count, what, out_path.c_str());
        }
    } else {
        std::printf("%s\n", payload.dump(2).c_str());
    }
    return 0;
}

int cmd_dataset_pairs(const GlobalFlags& g, const std::string& root, int count,
                      const std::string& technique_name, const std::string& scheme_name,
                      double density, const std::string& out_path) {
    obf::Technique technique = technique_or_throw(technique_name);
    obf::ObfParams params;
    params.scheme = scheme_or_throw(scheme_name);
    params.density = density;
    data::Corpus corpus = data::load_corpus(root);
    data::PairSet ps =
        data::build_pairs(corpus, technique, g.seed, static_cast<size_t>(count), params);
    return emit_dataset_json(g, pair_set_to_json(ps), out_path, "pairs", ps.pairs.size());
}

int cmd_dataset_triplets(const GlobalFlags& g, const std::string& root, int count,
                         const std::string& technique_name, const std::string& scheme_name,
                         double density, const std::string& out_path) {
    obf::Technique technique = technique_or_throw(technique_name);
    obf::ObfParams params;
    params.scheme = scheme_or_throw(scheme_name);
    params.density = density;
    data::Corpus corpus = data::load_corpus(root);
    std::vector<data::TripletInstance> items =
        data::build_triplets(corpus, technique, g.seed, static_cast<size_t>(count), params);
    return emit_dataset_json(g, triplets_to_json(items, technique, g.seed), out_path,
                             "triplet instances", items.size());
}

int cmd_dataset_export(const GlobalFlags& g, const std::string& root, int count,
                       const std::string& technique_name, const std::string& scheme_name,
                       double density, const std::string& out_path,
                       const std::string& template_id) {
    obf::Technique technique = technique_or_throw(technique_name);
    obf::ObfParams params;
    params.scheme = scheme_or_throw(scheme_name);
    params.density = density;
    data::Corpus corpus = data::load_corpus(root);
    std::vector<data::TripletInstance> items =
        data::build_triplets(corpus, technique, g.seed, static_cast<size_t>(count), params);
    data::ExportSummary summary = data::export_jsonl(items, template_id, out_path);
    if (g.json_out) {
        json j = {{"path", summary.path}, {"lines", summary.lines}, {"digest", summary.digest}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("wrote %zu lines to %s (digest %s)\n", summary.lines, summary.path.c_str(),
                    summary.digest.c_str());
    }
    return 0;
}

// ---- experiments -----------------------------------------------------------

// Flag storage for one experiment subcommand; flags override the config file.
struct ExpFlags {
    std::string config_path;
    std::string out_base;
    std::string format = "both";
    std::string corpus_root;
    std::string technique;
    std::string scheme;
    double density = 0.0;
    std::string strategy;
    int shots = 0;
    int samples = 0;
    int max_programs = 0;
    CLI::App* sub = nullptr;
};

void add_experiment_flags(CLI::App* sub, ExpFlags& f, bool reverse_flags, bool pattern_flags) {
    f.sub = sub;
    sub->add_option("--config", f.config_path, "experiment manifest (TOML)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", f.out_base, "output base path (suffixes added per format)")
        ->required();
    sub->add_option("--format", f.format, "report format: json|csv|both (default both)");
    sub->add_option("--corpus", f.corpus_root, "override corpus root");
    sub->add_option("--technique", f.technique, "override technique");
    sub->add_option("--scheme", f.scheme, "override naming scheme");
    sub->add_option("--density", f.density, "override dead-code density");
    sub->add_option("--max-programs", f.max_programs, "override program cap (0 = all)");
    if (reverse_flags) {
        sub->add_option("--strategy", f.strategy,
                        "override prompting strategy: simple|few-shot|chain-of-thought|augmented");
        sub->add_option("--shots", f.shots, "override few-shot example count");
    }
    if (pattern_flags) {
        sub->add_option("--samples", f.samples, "override samples per program");
    }
}

// Flags > config file > built-in defaults; the root --seed/--jobs flags
// override [experiment] seed/jobs the same way.
cli::GlobalConfig resolve_config(const GlobalFlags& g, const ExpFlags& f, const CLI::App& root) {
    cli::GlobalConfig cfg = cli::load_global_config(f.config_path);
    if (root.count("--seed") > 0) cfg.seed = g.seed;
    if (root.count("--jobs") > 0) cfg.limits.jobs = g.jobs;
    if (f.sub->count("--corpus") > 0) cfg.corpus_root = f.corpus_root;
    if (f.sub->count("--technique") > 0) cfg.technique = technique_or_throw(f.technique);
    if (f.sub->count("--scheme") > 0) cfg.params.scheme = scheme_or_throw(f.scheme);
    if (f.sub->count("--density") > 0) cfg.params.density = f.density;
    if (f.sub->count("--max-programs") > 0) cfg.limits.max_programs = f.max_programs;
    if (f.sub->get_option_no_throw("--strategy") && f.sub->count("--strategy") > 0) {
        auto kind = exp::strategy_from_name(f.strategy);
        if (!kind) throw std::runtime_error("unknown strategy '" + f.strategy + "'");
        cfg.strategy = *kind;
    }
    if (f.sub->get_option_no_throw("--shots") && f.sub->count("--shots") > 0) {
        cfg.shots = f.shots;
    }
    if (f.sub->get_option_no_throw("--samples") && f.sub->count("--samples") > 0) {
        cfg.samples_per_item = f.samples;
    }
    if (cfg.corpus_root.empty()) {
        throw std::runtime_error("no corpus root: set [corpus] root or pass --corpus");
    }
    if (cfg.limits.jobs == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        cfg.limits.jobs = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return cfg;
}

exp::PromptStrategy build_strategy(const cli::GlobalConfig& cfg, const data::Corpus& corpus) {
    if (cfg.strategy == exp::StrategyKind::FewShot ||
        cfg.strategy == exp::StrategyKind::Augmented) {
        std::vector<exp::ShotExample> shots =
            exp::draw_shots(corpus, cfg.technique, cfg.params, cfg.shots, cfg.seed);
        return exp::make_strategy(cfg.strategy, std::move(shots));
    }
    return exp::make_strategy(cfg.strategy);
}

int report_summary(const GlobalFlags& g, const exp::ExperimentReport& report,
                   const stats::EmitResult& emitted) {
    if (g.json_out) {
        json j = {{"kind", report.kind},
                  {"technique", report.technique},
                  {"strategy", report.strategy},
                  {"model", report.model},
                  {"seed", report.seed},
                  {"aggregates", aggregates_to_json(report.aggregates)},
                  {"files", emitted.files}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        const exp::Aggregates& a = report.aggregates;
        std::printf("%s: %d programs, pass rate %.4f, first-pass rate %.4f, echoes %d\n",
                    report.kind.c_str(), a.total, a.pass_rate, a.first_pass_rate,
                    a.echo_count);
        if (report.patterns) {
            for (const auto& [cls, count] : report.patterns->per_generation) {
                std::printf("pattern %s: %d generations\n", cls.c_str(), count);
            }
            if (report.patterns->chi_square) {
                std::printf("chi-square %.4f (p %.6g)\n",
                            report.patterns->chi_square->statistic,
                            report.patterns->chi_square->p_value);
            } else {
                std::printf("chi-square: not run (degenerate distribution)\n");
            }
        }
        print_files(emitted);
    }
    return 0;
}

int cmd_experiment_forward(const GlobalFlags& g, const ExpFlags& f, const CLI::App& root) {
    cli::GlobalConfig cfg = resolve_config(g, f, root);
    stats::ReportFormat format = format_or_throw(f.format);
    data::Corpus corpus = data::load_corpus(cfg.corpus_root);

    auto client = cli::make_backend(cfg.model, cfg.technique, cfg.params, cfg.seed);
    std::unique_ptr<model::ChatClient> base;
    exp::ForwardOptions options;
    options.technique = cfg.technique;
    options.params = cfg.params;
    options.seed = cfg.seed;
    options.limits = cfg.limits;
    options.model_config = cfg.model.config;
    if (cfg.base) {
        base = cli::make_backend(*cfg.base, cfg.technique, cfg.params, cfg.seed);
        options.base_config = cfg.base->config;
    }
    exp::ExperimentReport report = exp::run_forward(corpus, options, *client, base.get());
    stats::EmitResult emitted = stats::emit_report(report, f.out_base, format);
    return report_summary(g, report, emitted);
}

int cmd_experiment_reverse(const GlobalFlags& g, const ExpFlags& f, const CLI::App& root) {
    cli::GlobalConfig cfg = resolve_config(g, f, root);
    stats::ReportFormat format = format_or_throw(f.format);
    data::Corpus corpus = data::load_corpus(cfg.corpus_root);

    auto client = cli::make_backend(cfg.model, cfg.technique, cfg.params, cfg.seed);
    exp::ReverseOptions options;
    options.technique = cfg.technique;
    options.params = cfg.params;
    options.seed = cfg.seed;
    options.strategy = build_strategy(cfg, corpus);
    options.margins = cfg.margins;
    options.limits = cfg.limits;
    options.model_config = cfg.model.config;
    exp::ExperimentReport report = exp::run_reverse(corpus, options, *client);
    stats::EmitResult emitted = stats::emit_report(report, f.out_base, format);
    return report_summary(g, report, emitted);
}

int cmd_experiment_patterns(const GlobalFlags& g, const ExpFlags& f, const CLI::App& root) {
    cli::GlobalConfig cfg = resolve_config(g, f, root);
    stats::ReportFormat format = format_or_throw(f.format);
    data::Corpus corpus = data::load_corpus(cfg.corpus_root);

    auto client = cli::make_backend(cfg.model, cfg.technique, cfg.params, cfg.seed);
    exp::PatternOptions options;
    options.samples_per_item = cfg.samples_per_item;
    options.seed = cfg.seed;
    options.limits = cfg.limits;
    options.model_config = cfg.model.config;
    exp::ExperimentReport report = exp::run_pattern_experiment(corpus, options, *client);
    stats::EmitResult emitted = stats::emit_report(report, f.out_base, format);
    return report_summary(g, report, emitted);
}

int cmd_experiment_cft(const GlobalFlags& g, const ExpFlags& f, const CLI::App& root) {
    cli::GlobalConfig cfg = resolve_config(g, f, root);
    stats::ReportFormat format = format_or_throw(f.format);
    if (!cfg.sft || !cfg.bft || !cfg.cft) {
        throw std::runtime_error(
            "cft-compare needs [model.sft], [model.bft], and [model.cft] sections");
    }
    data::Corpus corpus = data::load_corpus(cfg.corpus_root);

    auto sft = cli::make_backend(*cfg.sft, cfg.technique, cfg.params, cfg.seed);
    auto bft = cli::make_backend(*cfg.bft, cfg.technique, cfg.params, cfg.seed);
    auto cft = cli::make_backend(*cfg.cft, cfg.technique, cfg.params, cfg.seed);

    exp::CftOptions options;
    options.technique = cfg.technique;
    options.params = cfg.params;
    options.seed = cfg.seed;
    options.strategy = build_strategy(cfg, corpus);
    options.margins = cfg.margins;
    options.limits = cfg.limits;
    options.sft_config = cfg.sft->config;
    options.bft_config = cfg.bft->config;
    options.cft_config = cfg.cft->config;
    exp::ComparativeReport report = exp::run_cft_comparison(corpus, options, *sft, *bft, *cft);
    stats::EmitResult emitted = stats::emit_report(report, f.out_base, format);

    if (g.json_out) {
        json models = json::array();
        for (const auto& m : report.models) {
            models.push_back({{"label", m.label},
                              {"forward_preservation_mean", m.forward_preservation_mean},
                              {"reverse_success_rate", m.reverse_success_rate}});
        }
        json j = {{"kind", "cft-compare"},
                  {"technique", report.technique},
                  {"seed", report.seed},
                  {"models", std::move(models)},
                  {"files", emitted.files}};
        if (report.sft_vs_cft_effect) {
            j["sft_vs_cft_effect"] = {{"statistic", report.sft_vs_cft_effect->statistic},
                                      {"p_value", report.sft_vs_cft_effect->p_value}};
        }
        if (!report.effect_note.empty()) j["effect_note"] = report.effect_note;
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        for (const auto& m : report.models) {
            std::printf("%s: forward preservation %.4f, reverse success %.4f\n",
                        m.label.c_str(), m.forward_preservation_mean, m.reverse_success_rate);
        }
        if (report.sft_vs_cft_effect) {
            std::printf("sft vs cft effect: d = %.4f (p %.6g)\n",
                        report.sft_vs_cft_effect->statistic,
                        report.sft_vs_cft_effect->p_value);
        }
        if (!report.effect_note.empty()) std::printf("%s\n", report.effect_note.c_str());
        print_files(emitted);
    }
    return 0;
}

// ---- report (re-emit CSV tables from a stored JSON report) -----------------

exp::Aggregates aggregates_from_json(const json& a) {
    exp::Aggregates out;
    out.total = a.at("total").get<int>();
    out.passed = a.at("passed").get<int>();
    out.first_pass = a.at("first_pass").get<int>();
    out.echo_count = a.at("echo_count").get<int>();
    out.pass_rate = a.at("pass_rate").get<double>();
    out.first_pass_rate = a.at("first_pass_rate").get<double>();
    out.mean_iterations = a.at("mean_iterations").get<double>();
    out.taxonomy = a.at("taxonomy").get<std::map<std::string, int>>();
    out.sim_mean = a.at("sim_mean").get<double>();
    out.sim_min = a.at("sim_min").get<double>();
    out.sim_max = a.at("sim_max").get<double>();
    out.readability_original_mean = a.at("readability_original_mean").get<double>();
    out.readability_final_mean = a.at("readability_final_mean").get<double>();
    return out;
}

stats::TestResult test_result_from_json(const json& t) {
    stats::TestResult out;
    out.statistic = t.at("statistic").get<double>();
    out.p_value = t.at("p_value").get<double>();
    out.n = t.at("n").get<int>();
    out.method = t.at("method").get<std::string>();
    return out;
}

// The CSV tables only need headers + aggregates (+ the pattern summary), so
// records are not reconstructed.
exp::ExperimentReport report_from_json(const json& j) {
    exp::ExperimentReport report;
    report.kind = j.at("kind").get<std::string>();
    report.technique = j.at("technique").get<std::string>();
    report.strategy = j.at("strategy").get<std::string>();
    report.model = j.at("model").get<std::string>();
    report.seed = j.at("seed").get<uint64_t>();
    report.aggregates = aggregates_from_json(j.at("aggregates"));
    if (j.contains("patterns")) {
        exp::PatternSummary p;
        const json& pj = j.at("patterns");
        p.per_generation = pj.at("per_generation").get<std::map<std::string, int>>();
        p.per_identifier = pj.at("per_identifier").get<std::map<std::string, int>>();
        p.samples = pj.at("samples").get<int>();
        p.degenerate = pj.at("degenerate").get<bool>();
        if (pj.contains("chi_square")) {
            p.chi_square = test_result_from_json(pj.at("chi_square"));
        }
        report.patterns = std::move(p);
    }
    return report;
}

int cmd_report(const GlobalFlags& g, const std::string& in_path, const std::string& out_base) {
    json j = json::parse(read_input(in_path));
    if (!j.is_object() || !j.contains("kind")) {
        throw std::runtime_error("'" + in_path + "' is not an obfkit report (no \"kind\")");
    }
    stats::EmitResult emitted;
    if (j.at("kind") == "cft-compare") {
        exp::ComparativeReport report;
        report.technique = j.at("technique").get<std::string>();
        report.seed = j.at("seed").get<uint64_t>();
        report.effect_note = j.value("effect_note", std::string());
        if (j.contains("sft_vs_cft_effect")) {
            report.sft_vs_cft_effect = test_result_from_json(j.at("sft_vs_cft_effect"));
        }
        for (const json& mj : j.at("models")) {
            exp::ModelComparison m;
            m.label = mj.at("label").get<std::string>();
            m.forward_preservation_mean = mj.at("forward_preservation_mean").get<double>();
            m.reverse_success_rate = mj.at("reverse_success_rate").get<double>();
            report.models.push_back(std::move(m));
        }
        emitted = stats::emit_report(report, out_base, stats::ReportFormat::Csv);
    } else {
        emitted = stats::emit_report(report_from_json(j), out_base, stats::ReportFormat::Csv);
    }
    if (g.json_out) {
        json out = {{"in", in_path}, {"files", emitted.files}};
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        print_files(emitted);
    }
    return 0;
}

// Innermost subcommand the parser got to, for usage-error help text.
const CLI::App* deepest_subcommand(const CLI::App* app) {
    const CLI::App* current = app;
    for (;;) {
        auto subs = current->get_subcommands();
        if (subs.empty()) return current;
        current = subs.front();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"obfkit — code obfuscation round-trip experiment toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "obfkit 0.1.0");

    GlobalFlags g;
    app.add_option("--seed", g.seed, "seed for every random choice (default 0)");
    app.add_flag("--json", g.json_out, "machine-readable JSON output");
    app.add_option("--jobs", g.jobs, "worker threads (0 = logical cores)");

    int rc = 0;

    // corpus
    CLI::App* corpus = app.add_subcommand("corpus", "corpus inspection tools");
    corpus->require_subcommand(1)->fallthrough();
    {
        static std::string root;
        static int max_programs = 0;
        CLI::App* validate =
            corpus->add_subcommand("validate", "load a corpus and report inclusions/skips");
        validate->fallthrough();
        validate->add_option("--root", root, "corpus root directory")->required();
        validate->add_option("--max-programs", max_programs, "stop after N programs (0 = all)");
        validate->callback([&]() { rc = cmd_corpus_validate(g, root, max_programs); });
    }

    // obfuscate
    {
        static std::string in_path, out_path, record_path;
        static std::string technique = "variable_renaming", scheme = "sequential";
        static double density = 0.3;
        CLI::App* obfuscate =
            app.add_subcommand("obfuscate", "apply one transformation to a program");
        obfuscate->fallthrough();
        obfuscate->add_option("--in", in_path, "input .java file ('-' = stdin)")->required();
        obfuscate->add_option("--out", out_path, "output file (default stdout)");
        obfuscate->add_option("--record", record_path,
                              "TransformRecord sidecar path (default <out>.record.json)");
        obfuscate->add_option("--technique", technique,
                              "variable_renaming|dead_code_insertion|string_encryption");
        obfuscate->add_option("--scheme", scheme, "sequential|systematic|custom_random");
        obfuscate->add_option("--density", density, "dead-code density in [0,1] (default 0.3)");
        obfuscate->callback([&]() {
            rc = cmd_obfuscate(g, in_path, out_path, record_path, technique, scheme, density);
        });
    }

    // metrics
    CLI::App* metrics_cmd = app.add_subcommand("metrics", "similarity and readability metrics");
    metrics_cmd->require_subcommand(1)->fallthrough();
    {
        static std::vector<std::string> pair;
        CLI::App* score = metrics_cmd->add_subcommand("score", "CodeBLEU for one pair");
        score->fallthrough();
        score->add_option("--pair", pair, "candidate then reference file")
            ->expected(2)
            ->required();
        score->callback([&]() { rc = cmd_metrics_score(g, pair); });
    }
    {
        static std::string ft, orig, base, tool;
        CLI::App* quad = metrics_cmd->add_subcommand("quad", "the S1–S4 similarity quad");
        quad->fallthrough();
        quad->add_option("--ft", ft, "fine-tuned model output")->required();
        quad->add_option("--orig", orig, "original program")->required();
        quad->add_option("--base", base, "base model output")->required();
        quad->add_option("--tool", tool, "tool-obfuscated program")->required();
        quad->callback([&]() { rc = cmd_metrics_quad(g, ft, orig, base, tool); });
    }
    {
        static std::string orig, obf_path, deobf;
        static double sim_threshold = 0.4, readability_margin = 0.15;
        CLI::App* reverse =
            metrics_cmd->add_subcommand("reverse", "grade one deobfuscation attempt");
        reverse->fallthrough();
        reverse->add_option("--orig", orig, "original program")->required();
        reverse->add_option("--obf", obf_path, "obfuscated program")->required();
        reverse->add_option("--deobf", deobf, "deobfuscation attempt")->required();
        reverse->add_option("--sim-threshold", sim_threshold,
                            "max similarity of deobf to obf (default 0.4)");
        reverse->add_option("--readability-margin", readability_margin,
                            "allowed |R(deobf) - R(orig)| (default 0.15)");
        reverse->callback([&]() {
            rc = cmd_metrics_reverse(g, orig, obf_path, deobf, sim_threshold,
                                     readability_margin);
        });
    }

    // dataset
    CLI::App* dataset = app.add_subcommand("dataset", "fine-tuning dataset construction");
    dataset->require_subcommand(1)->fallthrough();
    {
        static std::string root, out_path;
        static std::string technique = "variable_renaming", scheme = "sequential";
        static double density = 0.3;
        static int count = 0;
        CLI::App* pairs =
            dataset->add_subcommand("pairs", "original/obfuscated pairs (validated)");
        pairs->fallthrough();
        pairs->add_option("--root", root, "corpus root directory")->required();
        pairs->add_option("--count", count, "number of pairs")->required();
        pairs->add_option("--technique", technique, "transformation");
        pairs->add_option("--scheme", scheme, "naming scheme for renaming");
        pairs->add_option("--density", density, "dead-code density");
        pairs->add_option("--out", out_path, "write JSON here instead of stdout");
        pairs->callback(
            [&]() { rc = cmd_dataset_pairs(g, root, count, technique, scheme, density, out_path); });
    }
    {
        static std::string root, out_path;
        static std::string technique = "variable_renaming", scheme = "sequential";
        static double density = 0.3;
        static int count = 0;
        CLI::App* triplets =
            dataset->add_subcommand("triplets", "balanced POS/NEG/GEN instances");
        triplets->fallthrough();
        triplets->add_option("--root", root, "corpus root directory")->required();
        triplets->add_option("--count", count, "instances per task (total = 3x)")->required();
        triplets->add_option("--technique", technique, "transformation");
        triplets->add_option("--scheme", scheme, "naming scheme for renaming");
        triplets->add_option("--density", density, "dead-code density");
        triplets->add_option("--out", out_path, "write JSON here instead of stdout");
        triplets->callback([&]() {
            rc = cmd_dataset_triplets(g, root, count, technique, scheme, density, out_path);
        });
    }
    {
        static std::string root, out_path, template_id = "default";
        static std::string technique = "variable_renaming", scheme = "sequential";
        static double density = 0.3;
        static int count = 0;
        CLI::App* export_cmd =
            dataset->add_subcommand("export", "chat-format JSONL for fine-tuning");
        export_cmd->fallthrough();
        export_cmd->add_option("--root", root, "corpus root directory")->required();
        export_cmd->add_option("--count", count, "instances per task (total = 3x)")->required();
        export_cmd->add_option("--out", out_path, "output .jsonl path")->required();
        export_cmd->add_option("--technique", technique, "transformation");
        export_cmd->add_option("--scheme", scheme, "naming scheme for renaming");
        export_cmd->add_option("--density", density, "dead-code density");
        export_cmd->add_option("--template", template_id, "prompt template id");
        export_cmd->callback([&]() {
            rc = cmd_dataset_export(g, root, count, technique, scheme, density, out_path,
                                    template_id);
        });
    }

    // experiment
    CLI::App* experiment = app.add_subcommand("experiment", "paper experiment runners");
    experiment->require_subcommand(1)->fallthrough();
    static ExpFlags fwd_flags, rev_flags, pat_flags, cft_flags;
    {
        CLI::App* sub = experiment->add_subcommand(
            "forward", "obfuscation with auto-correction (paper section 4.1)");
        sub->fallthrough();
        add_experiment_flags(sub, fwd_flags, false, false);
        sub->callback([&]() { rc = cmd_experiment_forward(g, fwd_flags, app); });
    }
    {
        CLI::App* sub = experiment->add_subcommand(
            "reverse", "deobfuscation under a prompting strategy (paper section 4.3)");
        sub->fallthrough();
        add_experiment_flags(sub, rev_flags, true, false);
        sub->callback([&]() { rc = cmd_experiment_reverse(g, rev_flags, app); });
    }
    {
        CLI::App* sub = experiment->add_subcommand(
            "patterns", "naming-pattern distribution probe (paper section 4.2)");
        sub->fallthrough();
        add_experiment_flags(sub, pat_flags, false, true);
        sub->callback([&]() { rc = cmd_experiment_patterns(g, pat_flags, app); });
    }
    {
        CLI::App* sub = experiment->add_subcommand(
            "cft-compare", "SFT/BFT/CFT three-way comparison (paper section 5)");
        sub->fallthrough();
        add_experiment_flags(sub, cft_flags, true, false);
        sub->callback([&]() { rc = cmd_experiment_cft(g, cft_flags, app); });
    }

    // report
    {
        static std::string in_path, out_base;
        CLI::App* report =
            app.add_subcommand("report", "re-emit CSV tables from a stored JSON report");
        report->fallthrough();
        report->add_option("--in", in_path, "report JSON produced by an experiment run")
            ->required()
            ->check(CLI::ExistingFile);
        report->add_option("--out", out_base, "output base path")->required();
        report->callback([&]() { rc = cmd_report(g, in_path, out_base); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "obfkit: " << e.what() << "\n\n";
        std::cerr << deepest_subcommand(&app)->help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "obfkit: error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
