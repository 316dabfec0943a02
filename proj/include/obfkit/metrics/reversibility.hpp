#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "obfkit/metrics/codebleu.hpp"
#include "obfkit/metrics/readability.hpp"

namespace obfkit::metrics {

struct ReverseMargins {
    // Deobfuscation must land far enough from its obfuscated input.
    double sim_threshold = 0.4;
    // ... while recovering readability close to the original.
    double readability_margin = 0.15;
    // Weights for the similarity clause (surface components by default).
    CodeBleuWeights sim_weights = syntactic_weights();
};

struct ReversibilityVerdict {
    CodeBleuScore s_deobf_obf;  // similarity of output to its input
    CodeBleuScore s_obf_orig;   // baseline: how far obfuscation moved
    ReadabilityScore r_orig;
    ReadabilityScore r_obf;
    ReadabilityScore r_deobf;
    int tokens_orig = 0;
    int tokens_obf = 0;
    int tokens_deobf = 0;
    bool success = false;
    std::vector<std::string> reasons;  // every failed clause, empty on success
};

// Success requires: s_deobf_obf.total < sim_threshold, |r_deobf - r_orig| <=
// readability_margin, and the token count moving (weakly) back toward the
// original side of the obfuscated count.
ReversibilityVerdict reverse_success(std::string_view c_orig, std::string_view c_obf,
                                     std::string_view c_deobf,
                                     const ReverseMargins& margins = {});

}  // namespace obfkit::metrics
