#pragma once

#include <string_view>

namespace obfkit::metrics {

// Raw feature values; the score normalizes and combines them.
struct ReadabilityFeatures {
    double mean_identifier_length = 0.0;  // over identifier occurrences
    double dictionary_fraction = 0.0;     // identifier occurrences with a dictionary part
    double single_char_fraction = 0.0;    // identifier occurrences of length 1
    double mean_line_length = 0.0;        // chars per non-blank line
    int max_nesting_depth = 0;            // brace depth (class counts as 1)
    double comment_density = 0.0;         // comment tokens / all tokens
    double token_entropy = 0.0;           // Shannon entropy of token lexemes, bits
};

struct ReadabilityScore {
    double value = 0.0;  // in [0, 1]
    ReadabilityFeatures features;
};

// Feature-based readability on a 0-1 scale. Deterministic; works on any
// tokenizable text (unparsable-but-lexable input is fine). Calibrated to the
// ordinal relations of the reference results, not their absolute values.
ReadabilityScore readability(std::string_view source);

}  // namespace obfkit::metrics
