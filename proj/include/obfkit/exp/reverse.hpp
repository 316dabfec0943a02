#pragma once

#include <cstdint>

#include "obfkit/data/corpus.hpp"
#include "obfkit/exp/forward.hpp"
#include "obfkit/exp/prompts.hpp"
#include "obfkit/exp/report.hpp"
#include "obfkit/metrics/reversibility.hpp"
#include "obfkit/model/client.hpp"
#include "obfkit/obf/transforms.hpp"

namespace obfkit::exp {

struct ReverseOptions {
    obf::Technique technique = obf::Technique::VariableRenaming;
    obf::ObfParams params;
    uint64_t seed = 0;
    PromptStrategy strategy;
    metrics::ReverseMargins margins;
    ExperimentLimits limits;
    model::ModelConfig model_config;
};

// §4.3: per program, obfuscate with the tool, prompt the model to
// deobfuscate under the configured strategy, then grade with
// reverse_success. Programs referenced by the strategy's shots are excluded
// from evaluation. Single-turn: no correction loop.
ExperimentReport run_reverse(const data::Corpus& corpus, const ReverseOptions& options,
                             model::ChatClient& client);

}  // namespace obfkit::exp
