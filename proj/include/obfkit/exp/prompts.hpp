#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obfkit/data/corpus.hpp"
#include "obfkit/model/client.hpp"
#include "obfkit/obf/record.hpp"
#include "obfkit/obf/transforms.hpp"

namespace obfkit::exp {

enum class StrategyKind { Simple, FewShot, ChainOfThought, Augmented };

std::string_view strategy_name(StrategyKind kind);  // "simple" | "few-shot" | ...
std::optional<StrategyKind> strategy_from_name(std::string_view name);

// A worked deobfuscation example for few-shot prompts. The provenance ids
// let runners exclude shot programs from the evaluation set.
struct ShotExample {
    std::string obfuscated;
    std::string deobfuscated;
    std::string problem_id;
    std::string program_id;
};

struct PromptStrategy {
    StrategyKind kind = StrategyKind::Simple;
    std::vector<ShotExample> shots;    // FewShot/Augmented: >= 1
    std::string reasoning_preamble;    // ChainOfThought/Augmented
};

// Builds a strategy with the default reasoning preamble where the kind
// needs one. Throws std::invalid_argument when FewShot/Augmented get no
// shots.
PromptStrategy make_strategy(StrategyKind kind, std::vector<ShotExample> shots = {},
                             std::string preamble = "");

// Deterministic shots: the first `count` corpus entries (sorted order),
// deobfuscated side = canonical original, obfuscated side = tool output.
std::vector<ShotExample> draw_shots(const data::Corpus& corpus, obf::Technique technique,
                                    const obf::ObfParams& params, int count, uint64_t seed);

// All prompt builders are pure: identical arguments render identical
// message bytes. The final user message is always
// "<instruction>\n\n<code>" so tests can recover the code payload.

// §4.1 task wording, shared verbatim with the dataset exporter.
std::vector<model::Message> forward_prompt(obf::Technique technique, std::string_view code);

// Auto-correction turn: original instruction, the failing code, and the
// verbatim evaluator feedback.
std::vector<model::Message> correction_prompt(obf::Technique technique,
                                              std::string_view original_code,
                                              std::string_view failing_code,
                                              std::string_view error_message);

// Deobfuscation prompt under one of the four §4.3 strategies.
std::vector<model::Message> reverse_prompt(const PromptStrategy& strategy,
                                           std::string_view obfuscated_code);

// Renaming-pattern probe (§4.2): forward prompt plus a numbered variation
// marker in the system message so repeated samples stay distinguishable
// under the replay cache's (messages, model, temperature) key.
std::vector<model::Message> pattern_prompt(std::string_view code, int sample_index,
                                           int samples_total);

// sha256 over the rendered roles and contents; used in iteration records.
std::string prompt_digest(const std::vector<model::Message>& messages);

}  // namespace obfkit::exp
