#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "obfkit/interp/evaluator.hpp"
#include "obfkit/metrics/codebleu.hpp"
#include "obfkit/metrics/reversibility.hpp"
#include "obfkit/stats/tests.hpp"

namespace obfkit::exp {

struct IterationRecord {
    int index = 1;  // 1-based; the initial attempt is iteration 1
    std::string prompt_digest;
    std::string response_text;
    std::string extracted_code;
    interp::Verdict verdict = interp::Verdict::CompileError;
    double pass_rate = 0.0;
    std::string feedback;  // evaluator message fed into the next iteration
};

struct CorrectionTrace {
    std::vector<IterationRecord> iterations;
    interp::Verdict final_verdict = interp::Verdict::CompileError;
    int iterations_used = 0;  // == iterations.size(), <= max_iterations
};

// One corpus program's outcome. Forward runs fill sim_to_original /
// sim_to_tool (and quad when a base model is configured); reverse runs fill
// `reverse`. failure_tags drive the taxonomy aggregate: verdict names for
// forward, clause tags for reverse.
struct ProgramRecord {
    std::string problem_id;
    std::string program_id;
    CorrectionTrace trace;
    bool passed = false;
    bool echo = false;  // final output text equals the prompted input text
    double primary_similarity = 0.0;
    std::vector<std::string> failure_tags;
    std::optional<metrics::CodeBleuScore> sim_to_original;
    std::optional<metrics::CodeBleuScore> sim_to_tool;
    std::optional<metrics::SimilarityQuad> quad;
    std::optional<metrics::ReversibilityVerdict> reverse;
    double readability_original = 0.0;
    double readability_final = 0.0;
};

struct Aggregates {
    int total = 0;
    int passed = 0;
    int first_pass = 0;
    int echo_count = 0;
    double pass_rate = 0.0;
    double first_pass_rate = 0.0;
    double mean_iterations = 0.0;
    std::map<std::string, int> taxonomy;  // failure tag -> count
    double sim_mean = 0.0, sim_min = 0.0, sim_max = 0.0;
    double readability_original_mean = 0.0;
    double readability_final_mean = 0.0;
};

// Pattern experiment (§4.2) extras.
struct PatternGeneration {
    std::string problem_id;
    std::string program_id;
    int sample_index = 1;
    std::vector<std::string> names;  // identifiers the model introduced
    std::string generation_class;    // majority-rule class of the whole map
};

struct PatternSummary {
    std::map<std::string, int> per_generation;  // class -> generations
    std::map<std::string, int> per_identifier;  // class -> names
    int samples = 0;
    bool degenerate = false;  // fewer than two observed classes: no test run
    std::optional<stats::TestResult> chi_square;  // vs uniform over observed classes
};

struct ExperimentReport {
    std::string kind;       // "forward" | "reverse" | "patterns"
    std::string technique;  // display name, or "-" for patterns
    std::string strategy;   // reverse runs; "-" otherwise
    std::string model;
    uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config;  // ordered snapshot
    std::vector<ProgramRecord> records;
    std::vector<PatternGeneration> pattern_records;
    std::optional<PatternSummary> patterns;
    Aggregates aggregates;
};

// SFT/BFT/CFT protocol (§5).
struct ModelComparison {
    std::string label;  // "sft" | "bft" | "cft"
    ExperimentReport forward;
    ExperimentReport reverse;
    double forward_preservation_mean = 0.0;  // mean S(C_forward, C_orig)
    double reverse_success_rate = 0.0;
};

struct ComparativeReport {
    std::string technique;
    uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<ModelComparison> models;  // sft, bft, cft order
    // Cohen's d over per-program reverse-success indicators, SFT vs CFT.
    // Absent (with a note) when both indicator samples are constant.
    std::optional<stats::TestResult> sft_vs_cft_effect;
    std::string effect_note;
};

// The aggregate invariant: every ExperimentReport satisfies
// report.aggregates == compute_aggregates(report.records).
Aggregates compute_aggregates(const std::vector<ProgramRecord>& records);

nlohmann::json report_to_json(const ExperimentReport& report);
nlohmann::json comparative_to_json(const ComparativeReport& report);

}  // namespace obfkit::exp
