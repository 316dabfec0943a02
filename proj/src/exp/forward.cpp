#include "obfkit/exp/forward.hpp"

#include <cstdio>
#include <mutex>
#include <stdexcept>

#include "obfkit/exp/prompts.hpp"
#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/printer.hpp"
#include "obfkit/metrics/codebleu.hpp"
#include "obfkit/metrics/readability.hpp"
#include "obfkit/model/extract.hpp"
#include "obfkit/util/rng.hpp"
#include "parallel.hpp"

namespace obfkit::exp {

namespace {

std::string d2s(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

ExperimentReport run_forward(const data::Corpus& corpus, const ForwardOptions& options,
                             model::ChatClient& client, model::ChatClient* base_client) {
    if (options.limits.max_iterations < 1) {
        throw std::invalid_argument("forward experiment: max_iterations must be >= 1");
    }
    if (options.base_config && base_client == nullptr) {
        throw std::invalid_argument("forward experiment: base model configured without a client");
    }
    std::vector<data::CorpusEntry> entries = corpus.entries;
    if (options.limits.max_programs > 0 &&
        entries.size() > static_cast<size_t>(options.limits.max_programs)) {
        entries.resize(static_cast<size_t>(options.limits.max_programs));
    }
    if (entries.empty()) {
        throw std::runtime_error("forward experiment: corpus has no entries");
    }

    std::vector<ProgramRecord> records(entries.size());
    std::mutex client_mu;  // model backends may be stateful; serialize calls

    detail::parallel_for(entries.size(), options.limits.jobs, [&](size_t i) {
        const data::CorpusEntry& entry = entries[i];
        lang::CheckedProgram checked = lang::analyze(entry.source);
        lang::Ast ast = std::move(*checked.ast);  // corpus loader admits only checkable programs
        std::string original = lang::print_source(ast);
        uint64_t entry_seed = util::splitmix64(
            options.seed ^ util::fnv1a64(entry.problem_id + "/" + entry.program_id));
        obf::ObfResult tool = obf::apply(options.technique, ast, options.params, entry_seed);

        ProgramRecord rec;
        rec.problem_id = entry.problem_id;
        rec.program_id = entry.program_id;

        std::vector<model::Message> messages = forward_prompt(options.technique, original);
        std::string current_code;
        for (int iter = 1; iter <= options.limits.max_iterations; ++iter) {
            model::ModelResponse resp;
            {
                std::lock_guard<std::mutex> lock(client_mu);
                resp = client.complete(messages, options.model_config);
            }
            IterationRecord ir;
            ir.index = iter;
            ir.prompt_digest = prompt_digest(messages);
            ir.response_text = resp.text;
            ir.extracted_code = model::extract_code(resp.text);
            interp::EvalOutcome outcome =
                interp::evaluate_semantics(ir.extracted_code, entry.suite, options.limits.run);
            ir.verdict = outcome.verdict;
            ir.pass_rate = outcome.pass_rate;
            ir.feedback = outcome.feedback;
            current_code = ir.extracted_code;
            rec.trace.final_verdict = outcome.verdict;
            rec.trace.iterations.push_back(std::move(ir));
            if (outcome.verdict == interp::Verdict::Pass) break;
            messages = correction_prompt(options.technique, original, current_code,
                                         rec.trace.iterations.back().feedback);
        }
        rec.trace.iterations_used = static_cast<int>(rec.trace.iterations.size());
        rec.passed = rec.trace.final_verdict == interp::Verdict::Pass;
        rec.echo = current_code == original;
        if (!rec.passed) {
            rec.failure_tags.emplace_back(interp::verdict_name(rec.trace.final_verdict));
        }
        rec.sim_to_original = metrics::codebleu(current_code, original);
        rec.sim_to_tool = metrics::codebleu(current_code, tool.source);
        rec.primary_similarity = rec.sim_to_original->total;
        if (options.base_config) {
            std::vector<model::Message> base_messages =
                forward_prompt(options.technique, original);
            model::ModelResponse base_resp;
            {
                std::lock_guard<std::mutex> lock(client_mu);
                base_resp = base_client->complete(base_messages, *options.base_config);
            }
            std::string base_code = model::extract_code(base_resp.text);
            rec.quad = metrics::similarity_quad(current_code, original, base_code, tool.source);
        }
        rec.readability_original = metrics::readability(original).value;
        rec.readability_final = metrics::readability(current_code).value;
        records[i] = std::move(rec);
    });

    ExperimentReport report;
    report.kind = "forward";
    report.technique = std::string(obf::technique_display_name(options.technique));
    report.strategy = "-";
    report.model = options.model_config.model;
    report.seed = options.seed;
    report.config = {
        {"technique", std::string(obf::technique_name(options.technique))},
        {"scheme", std::string(obf::scheme_name(options.params.scheme))},
        {"density", d2s(options.params.density)},
        {"model", options.model_config.model},
        {"base_model", options.base_config ? options.base_config->model : "-"},
        {"temperature", d2s(options.model_config.temperature)},
        {"max_iterations", std::to_string(options.limits.max_iterations)},
        {"max_programs", std::to_string(options.limits.max_programs)},
        {"jobs", std::to_string(options.limits.jobs)},
        {"seed", std::to_string(options.seed)},
    };
    report.records = std::move(records);
    report.aggregates = compute_aggregates(report.records);
    return report;
}

}  // namespace obfkit::exp
