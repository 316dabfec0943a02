#pragma once

#include <cstdint>

#include "obfkit/data/corpus.hpp"
#include "obfkit/exp/forward.hpp"
#include "obfkit/exp/prompts.hpp"
#include "obfkit/exp/report.hpp"
#include "obfkit/exp/reverse.hpp"
#include "obfkit/model/client.hpp"

namespace obfkit::exp {

struct CftOptions {
    obf::Technique technique = obf::Technique::VariableRenaming;
    obf::ObfParams params;
    uint64_t seed = 0;
    PromptStrategy strategy;  // used for the reverse leg (Simple by default)
    metrics::ReverseMargins margins;
    ExperimentLimits limits;
    model::ModelConfig sft_config;
    model::ModelConfig bft_config;
    model::ModelConfig cft_config;
};

// §5 protocol: run_forward and run_reverse once per model, then compare.
// The effect size is Cohen's d over per-program reverse-success indicators
// (SFT vs CFT); when both indicator samples are constant the result is
// omitted and effect_note says why (d = 0 for equal rates is still
// reported, via identical-sample semantics, when variance allows).
ComparativeReport run_cft_comparison(const data::Corpus& corpus, const CftOptions& options,
                                     model::ChatClient& sft, model::ChatClient& bft,
                                     model::ChatClient& cft);

}  // namespace obfkit::exp
