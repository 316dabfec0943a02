#include "obfkit/exp/prompts.hpp"

#include <stdexcept>

#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/printer.hpp"
#include "obfkit/util/digest.hpp"
#include "obfkit/util/rng.hpp"

namespace obfkit::exp {

namespace {

constexpr std::string_view kForwardSystem =
    "You are a program transformation tool that obfuscates Java code.";
constexpr std::string_view kReverseSystem =
    "You are a program analysis assistant that restores obfuscated Java code.";
constexpr std::string_view kReverseInstruction =
    "Deobfuscate the following Java code. Restore meaningful names and remove "
    "obfuscation artifacts while preserving its functionality.";
constexpr std::string_view kDefaultPreamble =
    "Reason step by step before answering: identify what the obfuscation changed, "
    "plan how to undo it, verify the behavior is unchanged, and only then write "
    "the final program inside one fenced code block.";

std::string user_payload(std::string_view instruction, std::string_view code) {
    std::string out;
    out.reserve(instruction.size() + code.size() + 2);
    out.append(instruction);
    out.append("\n\n");
    out.append(code);
    return out;
}

}  // namespace

std::string_view strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Simple: return "simple";
        case StrategyKind::FewShot: return "few-shot";
        case StrategyKind::ChainOfThought: return "chain-of-thought";
        case StrategyKind::Augmented: return "augmented";
    }
    return "simple";
}

std::optional<StrategyKind> strategy_from_name(std::string_view name) {
    if (name == "simple") return StrategyKind::Simple;
    if (name == "few-shot") return StrategyKind::FewShot;
    if (name == "chain-of-thought") return StrategyKind::ChainOfThought;
    if (name == "augmented") return StrategyKind::Augmented;
    return std::nullopt;
}

PromptStrategy make_strategy(StrategyKind kind, std::vector<ShotExample> shots,
                             std::string preamble) {
    bool wants_shots = kind == StrategyKind::FewShot || kind == StrategyKind::Augmented;
    bool wants_preamble = kind == StrategyKind::ChainOfThought || kind == StrategyKind::Augmented;
    if (wants_shots && shots.empty()) {
        throw std::invalid_argument(std::string("strategy '") + std::string(strategy_name(kind)) +
                                    "' requires at least one shot example");
    }
    PromptStrategy s;
    s.kind = kind;
    s.shots = wants_shots ? std::move(shots) : std::vector<ShotExample>{};
    if (wants_preamble) {
        s.reasoning_preamble = preamble.empty() ? std::string(kDefaultPreamble) : std::move(preamble);
    }
    return s;
}

std::vector<ShotExample> draw_shots(const data::Corpus& corpus, obf::Technique technique,
                                    const obf::ObfParams& params, int count, uint64_t seed) {
    if (count < 1) {
        throw std::invalid_argument("draw_shots: count must be >= 1");
    }
    if (static_cast<size_t>(count) >= corpus.entries.size()) {
        throw std::invalid_argument("draw_shots: corpus too small to spare " +
                                    std::to_string(count) + " shot(s)");
    }
    std::vector<ShotExample> shots;
    for (int i = 0; i < count; ++i) {
        const auto& entry = corpus.entries[static_cast<size_t>(i)];
        auto checked = lang::analyze(entry.source);
        lang::Ast ast = std::move(*checked.ast);
        std::string original = lang::print_source(ast);
        uint64_t entry_seed =
            util::splitmix64(seed ^ util::fnv1a64(entry.problem_id + "/" + entry.program_id));
        obf::ObfResult obfuscated = obf::apply(technique, ast, params, entry_seed);
        shots.push_back({obfuscated.source, original, entry.problem_id, entry.program_id});
    }
    return shots;
}

std::vector<model::Message> forward_prompt(obf::Technique technique, std::string_view code) {
    std::string instruction = "Obfuscate the following Java code by ";
    instruction += obf::technique_display_name(technique);
    instruction += " while preserving its functionality.";
    return {{"system", std::string(kForwardSystem)},
            {"user", user_payload(instruction, code)}};
}

std::vector<model::Message> correction_prompt(obf::Technique technique,
                                              std::string_view original_code,
                                              std::string_view failing_code,
                                              std::string_view error_message) {
    std::string instruction = "Obfuscate the following Java code by ";
    instruction += obf::technique_display_name(technique);
    instruction += " while preserving its functionality.";

    std::string body;
    body += "The task was:\n";
    body += instruction;
    body += "\n\nOriginal program:\n";
    body += original_code;
    body += "\n\nYour previous attempt failed with this error:\n";
    body += error_message;
    body += "\n\nFix the code so it compiles, runs, and passes the tests. "
            "Return the complete corrected program.";
    body += "\n\n";
    body += failing_code;
    return {{"system", std::string(kForwardSystem)}, {"user", std::move(body)}};
}

std::vector<model::Message> reverse_prompt(const PromptStrategy& strategy,
                                           std::string_view obfuscated_code) {
    std::vector<model::Message> messages;
    std::string system(kReverseSystem);
    if (!strategy.reasoning_preamble.empty()) {
        system += "\n";
        system += strategy.reasoning_preamble;
    }
    messages.push_back({"system", std::move(system)});
    for (const auto& shot : strategy.shots) {
        messages.push_back({"user", user_payload(kReverseInstruction, shot.obfuscated)});
        messages.push_back({"assistant", shot.deobfuscated});
    }
    messages.push_back({"user", user_payload(kReverseInstruction, obfuscated_code)});
    return messages;
}

std::vector<model::Message> pattern_prompt(std::string_view code, int sample_index,
                                           int samples_total) {
    if (sample_index < 1 || samples_total < 1 || sample_index > samples_total) {
        throw std::invalid_argument("pattern_prompt: sample index out of range");
    }
    auto messages = forward_prompt(obf::Technique::VariableRenaming, code);
    messages.front().content += " Variation " + std::to_string(sample_index) + " of " +
                                std::to_string(samples_total) + ".";
    return messages;
}

std::string prompt_digest(const std::vector<model::Message>& messages) {
    std::string blob;
    for (const auto& m : messages) {
        blob += m.role;
        blob += '\0';
        blob += m.content;
        blob += '\0';
    }
    return util::sha256_hex(blob);
}

}  // namespace obfkit::exp
