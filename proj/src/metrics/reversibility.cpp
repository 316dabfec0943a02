#include "obfkit/metrics/reversibility.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "obfkit/lang/diagnostics.hpp"

namespace obfkit::metrics {
namespace {

// token_count throws on unlexable text; model output must still be gradable,
// so fall back to whitespace tokens there.
int safe_token_count(std::string_view source) {
    try {
        return token_count(source);
    } catch (const lang::ParseError&) {
        int n = 0;
        bool in_word = false;
        for (char c : source) {
            bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
            if (!ws && !in_word) ++n;
            in_word = !ws;
        }
        return n;
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

ReversibilityVerdict reverse_success(std::string_view c_orig, std::string_view c_obf,
                                     std::string_view c_deobf, const ReverseMargins& margins) {
    ReversibilityVerdict v;
    v.s_deobf_obf = codebleu(c_deobf, c_obf, margins.sim_weights);
    v.s_obf_orig = codebleu(c_obf, c_orig, margins.sim_weights);
    v.r_orig = readability(c_orig);
    v.r_obf = readability(c_obf);
    v.r_deobf = readability(c_deobf);
    v.tokens_orig = safe_token_count(c_orig);
    v.tokens_obf = safe_token_count(c_obf);
    v.tokens_deobf = safe_token_count(c_deobf);

    if (v.s_deobf_obf.total >= margins.sim_threshold)
        v.reasons.push_back("similarity to obfuscated input not reduced: S(deobf, obf) = " +
                            fmt(v.s_deobf_obf.total) + " >= " + fmt(margins.sim_threshold));

    double drift = std::abs(v.r_deobf.value - v.r_orig.value);
    if (drift > margins.readability_margin)
        v.reasons.push_back("readability not recovered: |R(deobf) - R(orig)| = " + fmt(drift) +
                            " > " + fmt(margins.readability_margin));

    bool token_direction_ok = v.tokens_obf >= v.tokens_orig ? v.tokens_deobf <= v.tokens_obf
                                                            : v.tokens_deobf >= v.tokens_obf;
    if (!token_direction_ok)
        v.reasons.push_back("token count moved against inversion: orig " +
                            std::to_string(v.tokens_orig) + ", obf " + std::to_string(v.tokens_obf) +
                            ", deobf " + std::to_string(v.tokens_deobf));

    v.success = v.reasons.empty();
    return v;
}

}  // namespace obfkit::metrics
