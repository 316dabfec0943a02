#pragma once

#include <string>
#include <string_view>

namespace obfkit::metrics {

struct CodeBleuWeights {
    double alpha = 0.25;  // n-gram
    double beta = 0.25;   // keyword-weighted n-gram
    double gamma = 0.25;  // AST subtree match
    double delta = 0.25;  // dataflow match
};

// Weights emphasizing surface similarity only; used by reverse_success,
// matching the paper's "syntactic similarity" wording.
inline CodeBleuWeights syntactic_weights() { return {0.5, 0.5, 0.0, 0.0}; }

struct CodeBleuScore {
    double total = 0.0;
    double ngram = 0.0;
    double weighted_ngram = 0.0;
    double ast_match = 0.0;
    double dataflow_match = 0.0;
    CodeBleuWeights weights;
    // Set when either side failed to parse; the tree components are then 0
    // and the total rests on the token components alone.
    bool parse_fallback = false;
};

// CodeBLEU with BLEU-4 token components (add-one smoothing, MiniJava
// keywords weighted 5x in the weighted variant), depth-3 identifier-
// abstracted AST subtree matching, and def-use dataflow matching.
CodeBleuScore codebleu(std::string_view candidate, std::string_view reference,
                       const CodeBleuWeights& weights = {});

struct SimilarityQuad {
    CodeBleuScore s1;  // fine-tuned vs original
    CodeBleuScore s2;  // fine-tuned vs base
    CodeBleuScore s3;  // base vs original
    CodeBleuScore s4;  // fine-tuned vs tool
};

SimilarityQuad similarity_quad(std::string_view c_ft, std::string_view c_orig,
                               std::string_view c_base, std::string_view c_tool,
                               const CodeBleuWeights& weights = {});

// Significant (non-comment) token count; throws lang::ParseError on
// lexically broken input. "" -> 0.
int token_count(std::string_view source);

}  // namespace obfkit::metrics
