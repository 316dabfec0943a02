#pragma once

#include <cstdint>
#include <optional>

#include "obfkit/data/corpus.hpp"
#include "obfkit/exp/report.hpp"
#include "obfkit/interp/interpreter.hpp"
#include "obfkit/model/client.hpp"
#include "obfkit/obf/transforms.hpp"

namespace obfkit::exp {

struct ExperimentLimits {
    interp::RunLimits run;
    int max_iterations = 5;  // correction loop bound, counting the initial attempt
    int max_programs = 0;    // 0 = whole corpus
    int jobs = 1;            // worker threads; model calls stay serialized
};

struct ForwardOptions {
    obf::Technique technique = obf::Technique::VariableRenaming;
    obf::ObfParams params;  // tool baseline for S4
    uint64_t seed = 0;
    ExperimentLimits limits;
    model::ModelConfig model_config;
    // Second model for the S2/S3 legs; when absent the quad is reported as
    // not-applicable rather than fabricated.
    std::optional<model::ModelConfig> base_config;
};

// §4.1: per program, prompt -> extract_code -> evaluate_semantics; failures
// loop through correction prompts carrying the verbatim evaluator feedback,
// stopping at first pass or at max_iterations. Throws on an empty corpus;
// model errors (including replay misses) propagate.
ExperimentReport run_forward(const data::Corpus& corpus, const ForwardOptions& options,
                             model::ChatClient& client,
                             model::ChatClient* base_client = nullptr);

}  // namespace obfkit::exp
