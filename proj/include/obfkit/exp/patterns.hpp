#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "obfkit/data/corpus.hpp"
#include "obfkit/exp/forward.hpp"
#include "obfkit/exp/report.hpp"
#include "obfkit/model/client.hpp"

namespace obfkit::exp {

enum class PatternClass { Sequential, Systematic, Custom, Mixed, Other };

std::string_view pattern_class_name(PatternClass c);

// Per-identifier rules, total and mutually exclusive in this priority:
//   ^[il]+$        -> Sequential
//   ^var[0-9]+$    -> Systematic
//   ^_[A-Z]{1,3}$  -> Custom
//   anything else  -> Other
PatternClass classify_name(std::string_view name);

// Whole-map rule (§4.2): the single per-name class when uniform, Mixed when
// two or more classes appear, Other for an empty set.
PatternClass classify_naming_pattern(const std::vector<std::string>& names);

// Identifiers present in `generated` but not in `original` (lexical, order
// of first appearance). Unlexable generations yield an empty list.
std::vector<std::string> names_introduced(std::string_view original, std::string_view generated);

struct PatternOptions {
    int samples_per_item = 5;
    uint64_t seed = 0;
    ExperimentLimits limits;
    model::ModelConfig model_config;
};

// §4.2: samples_per_item renaming generations per program, classified
// per-generation (per-identifier counts kept too), then tested against a
// uniform distribution over the observed classes. A single observed class
// is flagged degenerate and gets no test.
ExperimentReport run_pattern_experiment(const data::Corpus& corpus,
                                        const PatternOptions& options,
                                        model::ChatClient& client);

}  // namespace obfkit::exp
