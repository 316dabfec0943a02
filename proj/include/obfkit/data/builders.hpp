#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "obfkit/data/corpus.hpp"
#include "obfkit/obf/record.hpp"
#include "obfkit/obf/transforms.hpp"

namespace obfkit::data {

struct ProgramPair {
    std::string problem_id;
    std::string program_id;
    std::string original;    // canonical source
    std::string obfuscated;  // canonical source, verdict-preserving
    obf::TransformRecord record;
};

struct PairSet {
    obf::Technique technique = obf::Technique::VariableRenaming;
    uint64_t seed = 0;
    std::vector<ProgramPair> pairs;
};

// Seed-deterministic selection of `count` distinct corpus programs, each
// transformed and validated against its own test suite. Throws
// std::invalid_argument when count exceeds the corpus size and
// std::logic_error if a transformed program fails validation (tool-baseline
// violation — a bug, not data).
PairSet build_pairs(const Corpus& corpus, obf::Technique technique, uint64_t seed, size_t count,
                    const obf::ObfParams& params = {});

enum class TripletTask { POS, NEG, GEN };

std::string_view triplet_task_name(TripletTask task);

struct TripletInstance {
    TripletTask task = TripletTask::POS;
    std::string code_a;
    std::string code_b;  // empty for GEN
    std::string target;  // "equivalent" / "different", or the obfuscated text for GEN
    obf::Technique technique = obf::Technique::VariableRenaming;
    std::string problem_a, program_a;
    std::string problem_b, program_b;  // set for NEG only
};

// Builds per_task_count instances of each task (exact 1:1:1 balance, POS
// block then NEG then GEN). NEG pairs always come from distinct problem_ids.
// Sampling is with replacement and deterministic under seed. Throws
// std::invalid_argument when the corpus has fewer than two problem_ids.
std::vector<TripletInstance> build_triplets(const Corpus& corpus, obf::Technique technique,
                                            uint64_t seed, size_t per_task_count,
                                            const obf::ObfParams& params = {});

}  // namespace obfkit::data
