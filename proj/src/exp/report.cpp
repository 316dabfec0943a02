#include "obfkit/exp/report.hpp"

#include <algorithm>

namespace obfkit::exp {

namespace {

using nlohmann::json;

json score_to_json(const metrics::CodeBleuScore& s) {
    return {{"total", s.total},
            {"ngram", s.ngram},
            {"weighted_ngram", s.weighted_ngram},
            {"ast_match", s.ast_match},
            {"dataflow_match", s.dataflow_match},
            {"parse_fallback", s.parse_fallback}};
}

json quad_to_json(const metrics::SimilarityQuad& q) {
    return {{"s1", score_to_json(q.s1)},
            {"s2", score_to_json(q.s2)},
            {"s3", score_to_json(q.s3)},
            {"s4", score_to_json(q.s4)}};
}

json reverse_to_json(const metrics::ReversibilityVerdict& v) {
    return {{"success", v.success},
            {"reasons", v.reasons},
            {"s_deobf_obf", score_to_json(v.s_deobf_obf)},
            {"s_obf_orig", score_to_json(v.s_obf_orig)},
            {"readability_orig", v.r_orig.value},
            {"readability_obf", v.r_obf.value},
            {"readability_deobf", v.r_deobf.value},
            {"tokens_orig", v.tokens_orig},
            {"tokens_obf", v.tokens_obf},
            {"tokens_deobf", v.tokens_deobf}};
}

json trace_to_json(const CorrectionTrace& t) {
    json iterations = json::array();
    for (const auto& it : t.iterations) {
        iterations.push_back({{"index", it.index},
                              {"prompt_digest", it.prompt_digest},
                              {"response_text", it.response_text},
                              {"extracted_code", it.extracted_code},
                              {"verdict", std::string(interp::verdict_name(it.verdict))},
                              {"pass_rate", it.pass_rate},
                              {"feedback", it.feedback}});
    }
    return {{"final_verdict", std::string(interp::verdict_name(t.final_verdict))},
            {"iterations_used", t.iterations_used},
            {"iterations", std::move(iterations)}};
}

json record_to_json(const ProgramRecord& r) {
    json j = {{"problem_id", r.problem_id},
              {"program_id", r.program_id},
              {"passed", r.passed},
              {"echo", r.echo},
              {"primary_similarity", r.primary_similarity},
              {"failure_tags", r.failure_tags},
              {"readability_original", r.readability_original},
              {"readability_final", r.readability_final},
              {"trace", trace_to_json(r.trace)}};
    if (r.sim_to_original) j["sim_to_original"] = score_to_json(*r.sim_to_original);
    if (r.sim_to_tool) j["sim_to_tool"] = score_to_json(*r.sim_to_tool);
    if (r.quad) j["quad"] = quad_to_json(*r.quad);
    if (r.reverse) j["reverse"] = reverse_to_json(*r.reverse);
    return j;
}

json test_result_to_json(const stats::TestResult& t) {
    return {{"statistic", t.statistic}, {"p_value", t.p_value}, {"n", t.n}, {"method", t.method}};
}

json aggregates_to_json(const Aggregates& a) {
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

json config_to_json(const std::vector<std::pair<std::string, std::string>>& config) {
    json j = json::object();
    for (const auto& [k, v] : config) j[k] = v;
    return j;
}

}  // namespace

Aggregates compute_aggregates(const std::vector<ProgramRecord>& records) {
    Aggregates a;
    a.total = static_cast<int>(records.size());
    if (records.empty()) return a;

    double sim_sum = 0.0, read_orig_sum = 0.0, read_final_sum = 0.0, iter_sum = 0.0;
    a.sim_min = records.front().primary_similarity;
    a.sim_max = records.front().primary_similarity;
    for (const auto& r : records) {
        if (r.passed) ++a.passed;
        if (r.passed && r.trace.iterations_used <= 1) ++a.first_pass;
        if (r.echo) ++a.echo_count;
        for (const auto& tag : r.failure_tags) ++a.taxonomy[tag];
        sim_sum += r.primary_similarity;
        a.sim_min = std::min(a.sim_min, r.primary_similarity);
        a.sim_max = std::max(a.sim_max, r.primary_similarity);
        read_orig_sum += r.readability_original;
        read_final_sum += r.readability_final;
        iter_sum += r.trace.iterations_used;
    }
    a.pass_rate = static_cast<double>(a.passed) / a.total;
    a.first_pass_rate = static_cast<double>(a.first_pass) / a.total;
    a.mean_iterations = iter_sum / a.total;
    a.sim_mean = sim_sum / a.total;
    a.readability_original_mean = read_orig_sum / a.total;
    a.readability_final_mean = read_final_sum / a.total;
    return a;
}

nlohmann::json report_to_json(const ExperimentReport& report) {
    json j = {{"kind", report.kind},
              {"technique", report.technique},
              {"strategy", report.strategy},
              {"model", report.model},
              {"seed", report.seed},
              {"config", config_to_json(report.config)},
              {"aggregates", aggregates_to_json(report.aggregates)}};
    json records = json::array();
    for (const auto& r : report.records) records.push_back(record_to_json(r));
    j["records"] = std::move(records);
    if (!report.pattern_records.empty()) {
        json gens = json::array();
        for (const auto& g : report.pattern_records) {
            gens.push_back({{"problem_id", g.problem_id},
                            {"program_id", g.program_id},
                            {"sample_index", g.sample_index},
                            {"names", g.names},
                            {"class", g.generation_class}});
        }
        j["pattern_records"] = std::move(gens);
    }
    if (report.patterns) {
        json p = {{"per_generation", report.patterns->per_generation},
                  {"per_identifier", report.patterns->per_identifier},
                  {"samples", report.patterns->samples},
                  {"degenerate", report.patterns->degenerate}};
        if (report.patterns->chi_square) {
            p["chi_square"] = test_result_to_json(*report.patterns->chi_square);
        }
        j["patterns"] = std::move(p);
    }
    return j;
}

nlohmann::json comparative_to_json(const ComparativeReport& report) {
    json j = {{"kind", "cft-compare"},
              {"technique", report.technique},
              {"seed", report.seed},
              {"config", config_to_json(report.config)},
              {"effect_note", report.effect_note}};
    if (report.sft_vs_cft_effect) {
        j["sft_vs_cft_effect"] = test_result_to_json(*report.sft_vs_cft_effect);
    }
    json models = json::array();
    for (const auto& m : report.models) {
        models.push_back({{"label", m.label},
                          {"forward_preservation_mean", m.forward_preservation_mean},
                          {"reverse_success_rate", m.reverse_success_rate},
                          {"forward", report_to_json(m.forward)},
                          {"reverse", report_to_json(m.reverse)}});
    }
    j["models"] = std::move(models);
    return j;
}

}  // namespace obfkit::exp
