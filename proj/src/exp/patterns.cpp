#include "obfkit/exp/patterns.hpp"

#include <cstdio>
#include <mutex>
#include <set>
#include <stdexcept>

#include "obfkit/exp/prompts.hpp"
#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/diagnostics.hpp"
#include "obfkit/lang/lexer.hpp"
#include "obfkit/lang/printer.hpp"
#include "obfkit/model/extract.hpp"
#include "parallel.hpp"

namespace obfkit::exp {

namespace {

bool all_of_chars(std::string_view s, bool (*pred)(char)) {
    for (char c : s) {
        if (!pred(c)) return false;
    }
    return !s.empty();
}

std::set<std::string> identifier_set(std::string_view source) {
    std::set<std::string> out;
    lang::TokenStream stream = lang::tokenize(source);
    for (const auto& tok : stream.tokens) {
        if (tok.kind == lang::TokenKind::Identifier) out.insert(tok.lexeme);
    }
    return out;
}

}  // namespace

std::string_view pattern_class_name(PatternClass c) {
    switch (c) {
        case PatternClass::Sequential: return "sequential";
        case PatternClass::Systematic: return "systematic";
        case PatternClass::Custom: return "custom";
        case PatternClass::Mixed: return "mixed";
        case PatternClass::Other: return "other";
    }
    return "other";
}

PatternClass classify_name(std::string_view name) {
    if (all_of_chars(name, [](char c) { return c == 'i' || c == 'l'; })) {
        return PatternClass::Sequential;
    }
    if (name.size() > 3 && name.substr(0, 3) == "var" &&
        all_of_chars(name.substr(3), [](char c) { return c >= '0' && c <= '9'; })) {
        return PatternClass::Systematic;
    }
    if (name.size() >= 2 && name.size() <= 4 && name.front() == '_' &&
        all_of_chars(name.substr(1), [](char c) { return c >= 'A' && c <= 'Z'; })) {
        return PatternClass::Custom;
    }
    return PatternClass::Other;
}

PatternClass classify_naming_pattern(const std::vector<std::string>& names) {
    if (names.empty()) return PatternClass::Other;
    PatternClass first = classify_name(names.front());
    for (const auto& name : names) {
        if (classify_name(name) != first) return PatternClass::Mixed;
    }
    return first;
}

std::vector<std::string> names_introduced(std::string_view original, std::string_view generated) {
    std::set<std::string> known;
    try {
        known = identifier_set(original);
    } catch (const lang::ParseError&) {
        // Fall through with an empty baseline; everything counts as new.
    }
    std::vector<std::string> out;
    std::set<std::string> seen;
    try {
        lang::TokenStream stream = lang::tokenize(generated);
        for (const auto& tok : stream.tokens) {
            if (tok.kind != lang::TokenKind::Identifier) continue;
            if (known.count(tok.lexeme) != 0 || !seen.insert(tok.lexeme).second) continue;
            out.push_back(tok.lexeme);
        }
    } catch (const lang::ParseError&) {
        return {};  // unlexable generation
    }
    return out;
}

ExperimentReport run_pattern_experiment(const data::Corpus& corpus,
                                        const PatternOptions& options,
                                        model::ChatClient& client) {
    if (options.samples_per_item < 1) {
        throw std::invalid_argument("pattern experiment: samples_per_item must be >= 1");
    }
    std::vector<data::CorpusEntry> entries = corpus.entries;
    if (options.limits.max_programs > 0 &&
        entries.size() > static_cast<size_t>(options.limits.max_programs)) {
        entries.resize(static_cast<size_t>(options.limits.max_programs));
    }
    if (entries.empty()) {
        throw std::runtime_error("pattern experiment: corpus has no entries");
    }

    const int samples = options.samples_per_item;
    std::vector<PatternGeneration> generations(entries.size() * static_cast<size_t>(samples));
    std::mutex client_mu;

    detail::parallel_for(generations.size(), options.limits.jobs, [&](size_t flat) {
        const data::CorpusEntry& entry = entries[flat / static_cast<size_t>(samples)];
        int sample_index = static_cast<int>(flat % static_cast<size_t>(samples)) + 1;
        lang::CheckedProgram checked = lang::analyze(entry.source);
        std::string original = lang::print_source(*checked.ast);

        std::vector<model::Message> messages = pattern_prompt(original, sample_index, samples);
        model::ModelResponse resp;
        {
            std::lock_guard<std::mutex> lock(client_mu);
            resp = client.complete(messages, options.model_config);
        }
        std::string generated = model::extract_code(resp.text);

        PatternGeneration gen;
        gen.problem_id = entry.problem_id;
        gen.program_id = entry.program_id;
        gen.sample_index = sample_index;
        gen.names = names_introduced(original, generated);
        gen.generation_class = std::string(pattern_class_name(classify_naming_pattern(gen.names)));
        generations[flat] = std::move(gen);
    });

    PatternSummary summary;
    summary.samples = static_cast<int>(generations.size());
    for (const auto& gen : generations) {
        ++summary.per_generation[gen.generation_class];
        for (const auto& name : gen.names) {
            ++summary.per_identifier[std::string(pattern_class_name(classify_name(name)))];
        }
    }
    // Uniformity is tested over the classes that actually occurred; with a
    // single observed class (or a single draw) the distribution is
    // degenerate and no test runs.
    std::vector<double> observed;
    for (const auto& [cls, count] : summary.per_generation) {
        (void)cls;
        if (count > 0) observed.push_back(static_cast<double>(count));
    }
    summary.degenerate = observed.size() < 2 || summary.samples < 2;
    if (!summary.degenerate) {
        summary.chi_square = stats::chi_square_gof_uniform(observed);
    }

    ExperimentReport report;
    report.kind = "patterns";
    report.technique = "-";
    report.strategy = "-";
    report.model = options.model_config.model;
    report.seed = options.seed;
    report.config = {
        {"samples_per_item", std::to_string(options.samples_per_item)},
        {"model", options.model_config.model},
        {"max_programs", std::to_string(options.limits.max_programs)},
        {"jobs", std::to_string(options.limits.jobs)},
        {"seed", std::to_string(options.seed)},
    };
    report.pattern_records = std::move(generations);
    report.patterns = std::move(summary);
    report.aggregates = compute_aggregates(report.records);
    return report;
}

}  // namespace obfkit::exp
