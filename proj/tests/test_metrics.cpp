#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/diagnostics.hpp"
#include "obfkit/lang/printer.hpp"
#include "obfkit/metrics/codebleu.hpp"
#include "obfkit/metrics/readability.hpp"
#include "obfkit/metrics/reversibility.hpp"
#include "obfkit/obf/transforms.hpp"
#include "obfkit/util/rng.hpp"

using namespace obfkit;

namespace {

// Corpus-density fixtures: plenty of identifier occurrences relative to
// boilerplate, the texture the similarity thresholds are calibrated for.
const char* kGrades = R"(import java.util.Scanner;

public class GradeStats {
    static double average(int[] scores, int count) {
        double total = 0.0;
        for (int index = 0; index < count; index++) {
            total += scores[index];
        }
        return total / count;
    }

    static int highest(int[] scores, int count) {
        int best = scores[0];
        for (int index = 1; index < count; index++) {
            if (scores[index] > best) {
                best = scores[index];
            }
        }
        return best;
    }

    public static void main(String[] args) {
        Scanner reader = new Scanner(System.in);
        int count = reader.nextInt();
        int[] scores = new int[count];
        for (int index = 0; index < count; index++) {
            scores[index] = reader.nextInt();
        }
        double mean = average(scores, count);
        int top = highest(scores, count);
        System.out.println("mean " + mean);
        System.out.println("top " + top);
    }
}
)";

const char* kWords = R"(import java.util.Scanner;

public class WordFlip {
    static String flip(String word) {
        String result = "";
        for (int index = word.length() - 1; index >= 0; index--) {
            result += word.charAt(index);
        }
        return result;
    }

    public static void main(String[] args) {
        Scanner reader = new Scanner(System.in);
        int count = reader.nextInt();
        String line = "";
        for (int index = 0; index < count; index++) {
            String word = reader.next();
            String flipped = flip(word);
            if (index > 0) {
                line += " ";
            }
            line += flipped;
        }
        System.out.println("flipped: " + line);
    }
}
)";

const char* kLoops = R"(public class DigitSum {
    static int digitSum(int number) {
        int total = 0;
        int current = number;
        while (current > 0) {
            int digit = current % 10;
            total += digit;
            current /= 10;
        }
        return total;
    }

    public static void main(String[] args) {
        int value = 98765;
        int result = digitSum(value);
        System.out.println("digits sum to " + result);
    }
}
)";

std::vector<std::string> fixtures() { return {kGrades, kWords, kLoops}; }

std::string canon(const std::string& source) {
    lang::CheckedProgram checked = lang::analyze(source);
    REQUIRE(checked.ok());
    return lang::print_source(*checked.ast);
}

lang::Ast checked_ast(const std::string& source) {
    lang::CheckedProgram checked = lang::analyze(source);
    REQUIRE(checked.ok());
    return std::move(*checked.ast);
}

}  // namespace

TEST_CASE("codebleu identity is exactly 1.0 on every fixture") {
    for (const std::string& f : fixtures()) {
        metrics::CodeBleuScore score = metrics::codebleu(f, f);
        CHECK(score.total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(score.ngram == doctest::Approx(1.0));
        CHECK(score.weighted_ngram == doctest::Approx(1.0));
        CHECK(score.ast_match == doctest::Approx(1.0));
        CHECK(score.dataflow_match == doctest::Approx(1.0));
        CHECK_FALSE(score.parse_fallback);
    }
}

TEST_CASE("codebleu is low for programs sharing no identifiers and structure") {
    // Five-line pair: different class names, different locals, different
    // statement shapes (while/concat vs for/index).
    std::string a = R"(public class Echoes {
    public static void main(String[] args) {
        String phrase = "oh";
        while (phrase.length() < 8) {
            phrase += "!";
        }
        System.out.println(phrase);
    }
}
)";
    std::string b = R"(public class Cubes {
    public static void main(String[] args) {
        for (int base = 1; base <= 4; base++) {
            int cubed = base * base * base;
            System.out.println(cubed);
        }
    }
}
)";
    metrics::CodeBleuScore score = metrics::codebleu(a, b);
    CHECK(score.total < 0.25);
}

TEST_CASE("renaming keeps tree components at 1.0 and lowers the n-gram ones") {
    for (const std::string& f : fixtures()) {
        lang::Ast ast = checked_ast(f);
        std::string orig = lang::print_source(ast);
        obf::ObfResult renamed = obf::rename_variables(ast, obf::NamingScheme::Sequential, 3);

        metrics::CodeBleuScore score = metrics::codebleu(renamed.source, orig);
        CHECK(score.ast_match == doctest::Approx(1.0));
        CHECK(score.dataflow_match == doctest::Approx(1.0));
        CHECK(score.ngram < 1.0);
        CHECK(score.weighted_ngram < 1.0);
        // Keywords survive renaming, so the keyword-weighted variant reads
        // higher than the plain one.
        CHECK(score.weighted_ngram > score.ngram);
    }
}

TEST_CASE("codebleu components stay inside [0,1] on randomized pairs") {
    util::Rng rng(99);
    std::vector<std::string> pool;
    for (const std::string& f : fixtures()) {
        lang::Ast ast = checked_ast(f);
        pool.push_back(lang::print_source(ast));
        for (uint64_t seed : {1ULL, 2ULL}) {
            pool.push_back(obf::rename_variables(ast, obf::NamingScheme::CustomRandom, seed).source);
            pool.push_back(obf::insert_dead_code(ast, 0.4, seed).source);
            pool.push_back(obf::encrypt_strings(ast, seed).source);
        }
    }
    for (int i = 0; i < 200; ++i) {
        const std::string& a = pool[rng.below(pool.size())];
        const std::string& b = pool[rng.below(pool.size())];
        metrics::CodeBleuScore s = metrics::codebleu(a, b);
        for (double c : {s.total, s.ngram, s.weighted_ngram, s.ast_match, s.dataflow_match}) {
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
        double combined = 0.25 * (s.ngram + s.weighted_ngram + s.ast_match + s.dataflow_match);
        CHECK(s.total == doctest::Approx(combined).epsilon(1e-12));
    }
}

TEST_CASE("codebleu falls back to token components when a side does not parse") {
    std::string good = canon(kLoops);
    std::string broken = "public class Broken { this is } not java";
    metrics::CodeBleuScore score = metrics::codebleu(broken, good);
    CHECK(score.parse_fallback);
    CHECK(score.ast_match == 0.0);
    CHECK(score.dataflow_match == 0.0);
    CHECK(score.total < 0.5);

    // Unlexable text (unterminated string) must still be graded.
    metrics::CodeBleuScore worse = metrics::codebleu("String s = \"oops", good);
    CHECK(worse.parse_fallback);
    CHECK(worse.total >= 0.0);
}

TEST_CASE("custom weights change the combination") {
    std::string orig = canon(kGrades);
    obf::ObfResult renamed = obf::rename_variables(checked_ast(orig), obf::NamingScheme::Sequential, 5);

    metrics::CodeBleuScore surface =
        metrics::codebleu(renamed.source, orig, metrics::syntactic_weights());
    metrics::CodeBleuScore full = metrics::codebleu(renamed.source, orig);
    // The tree components sit at 1.0 for a rename, so dropping them can only
    // lower the score.
    CHECK(surface.total < full.total);
    CHECK(surface.total ==
          doctest::Approx(0.5 * surface.ngram + 0.5 * surface.weighted_ngram).epsilon(1e-12));
}

TEST_CASE("similarity quad mirrors the four comparisons") {
    std::string orig = canon(kGrades);
    lang::Ast ast = checked_ast(orig);
    std::string tool = obf::rename_variables(ast, obf::NamingScheme::Systematic, 2).source;
    std::string ft = tool;  // fine-tuned model reproduces the tool
    std::string base = orig;  // base model echoes its input

    metrics::SimilarityQuad quad = metrics::similarity_quad(ft, orig, base, tool);
    CHECK(quad.s3.total == doctest::Approx(1.0));  // base vs original
    CHECK(quad.s4.total == doctest::Approx(1.0));  // fine-tuned vs tool
    CHECK(quad.s1.total < 1.0);                    // fine-tuned vs original
    CHECK(quad.s1.total == doctest::Approx(metrics::codebleu(ft, orig).total));

    metrics::SimilarityQuad same = metrics::similarity_quad(orig, orig, orig, orig);
    CHECK(same.s1.total == doctest::Approx(1.0));
    CHECK(same.s2.total == doctest::Approx(1.0));
    CHECK(same.s3.total == doctest::Approx(1.0));
    CHECK(same.s4.total == doctest::Approx(1.0));
}

TEST_CASE("token_count counts significant tokens only") {
    CHECK(metrics::token_count("") == 0);
    CHECK(metrics::token_count("int a; // comment\n/* more */") == 3);
    CHECK_THROWS_AS(metrics::token_count("\"unterminated"), lang::ParseError);

    for (const std::string& f : fixtures()) {
        lang::Ast ast = checked_ast(f);
        std::string orig = lang::print_source(ast);
        int base = metrics::token_count(orig);
        CHECK(base > 0);

        std::string renamed = obf::rename_variables(ast, obf::NamingScheme::Sequential, 1).source;
        CHECK(metrics::token_count(renamed) == base);

        for (double density : {0.1, 0.5}) {
            std::string padded = obf::insert_dead_code(ast, density, 1).source;
            CHECK(metrics::token_count(padded) > base);
        }
    }
}

TEST_CASE("readability stays in bounds on arbitrary input") {
    std::vector<std::string> inputs = {"", "   \n\n", "int a;", "@#%!", "\"unterminated",
                                       canon(kGrades)};
    for (const std::string& s : inputs) {
        metrics::ReadabilityScore r = metrics::readability(s);
        CHECK(r.value >= 0.0);
        CHECK(r.value <= 1.0);
    }
}

TEST_CASE("readability features reflect the source") {
    metrics::ReadabilityScore r = metrics::readability(canon(kGrades));
    CHECK(r.features.mean_identifier_length > 3.0);
    CHECK(r.features.dictionary_fraction > 0.8);
    CHECK(r.features.single_char_fraction == 0.0);
    CHECK(r.features.max_nesting_depth >= 3);
    CHECK(r.features.comment_density == 0.0);
    CHECK(r.features.token_entropy > 3.0);

    metrics::ReadabilityScore commented = metrics::readability("// add the total\nint total = 0;");
    CHECK(commented.features.comment_density > 0.0);

    metrics::ReadabilityScore terse = metrics::readability("int i = 0; int l = i + i;");
    CHECK(terse.features.single_char_fraction == 1.0);
    CHECK(terse.features.dictionary_fraction == 0.0);
}

TEST_CASE("readability ordinal relations under the transformations") {
    for (const std::string& f : fixtures()) {
        lang::Ast ast = checked_ast(f);
        std::string orig = lang::print_source(ast);
        double r_orig = metrics::readability(orig).value;

        // Sequential renaming strictly decreases readability.
        std::string renamed = obf::rename_variables(ast, obf::NamingScheme::Sequential, 7).source;
        CHECK(metrics::readability(renamed).value < r_orig);

        // String encryption drops it by at least 0.2.
        std::string encrypted = obf::encrypt_strings(ast, 7).source;
        CHECK(r_orig - metrics::readability(encrypted).value >= 0.2);

        // Dead code keeps readability within 0.1 of the original.
        std::string padded = obf::insert_dead_code(ast, 0.3, 7).source;
        CHECK(metrics::readability(padded).value >= r_orig - 0.1);
    }
}

TEST_CASE("reverse_success fails an echoed output with similarity 1.0") {
    std::string orig = canon(kGrades);
    std::string obf = obf::rename_variables(checked_ast(orig), obf::NamingScheme::Sequential, 4).source;

    metrics::ReversibilityVerdict v = metrics::reverse_success(orig, obf, obf);
    CHECK_FALSE(v.success);
    CHECK(v.s_deobf_obf.total == doctest::Approx(1.0));
    REQUIRE(!v.reasons.empty());
    CHECK(v.reasons[0].find("similarity") != std::string::npos);
}

TEST_CASE("reverse_success accepts the oracle inversion") {
    for (const std::string& f : {std::string(kGrades), std::string(kWords)}) {
        std::string orig = canon(f);
        lang::Ast ast = checked_ast(orig);
        obf::ObfResult res = obf::rename_variables(ast, obf::NamingScheme::Sequential, 4);
        lang::Ast restored = obf::invert(res.record, checked_ast(res.source));
        std::string deobf = lang::print_source(restored);
        REQUIRE(deobf == orig);

        metrics::ReversibilityVerdict v = metrics::reverse_success(orig, res.source, deobf);
        for (const std::string& reason : v.reasons) INFO(reason);
        CHECK(v.success);
        CHECK(v.s_deobf_obf.total < 0.4);
        CHECK(v.tokens_deobf == v.tokens_orig);
    }
}

TEST_CASE("reverse_success rejects similarity in the observed failure band") {
    // Deobfuscation that barely edits the obfuscated program keeps the
    // similarity clause failing regardless of the readability clauses.
    std::string orig = canon(kGrades);
    lang::Ast ast = checked_ast(orig);
    std::string obf = obf::rename_variables(ast, obf::NamingScheme::Systematic, 4).source;
    // "Deobfuscate" by renaming var1.. to fresh random names: surface stays close.
    lang::Ast obf_ast = checked_ast(obf);
    std::string lightly_edited =
        obf::rename_variables(obf_ast, obf::NamingScheme::Systematic, 9).source;

    metrics::ReversibilityVerdict v = metrics::reverse_success(orig, obf, lightly_edited);
    CHECK(v.s_deobf_obf.total >= 0.4);
    CHECK_FALSE(v.success);
}

TEST_CASE("reverse_success flags readability drift and token inflation") {
    std::string orig = canon(kGrades);
    lang::Ast ast = checked_ast(orig);
    std::string obf = obf::rename_variables(ast, obf::NamingScheme::Sequential, 4).source;

    // Output far from the obfuscated text but unreadable: encrypted original.
    std::string unreadable = obf::encrypt_strings(ast, 4).source;
    metrics::ReversibilityVerdict v1 = metrics::reverse_success(orig, obf, unreadable);
    CHECK_FALSE(v1.success);
    bool flagged_readability = false;
    for (const std::string& reason : v1.reasons)
        if (reason.find("readability") != std::string::npos) flagged_readability = true;
    CHECK(flagged_readability);

    // Renaming never changes token counts, so a token-inflating "deobfuscation"
    // must trip the direction clause.
    std::string inflated = obf::insert_dead_code(ast, 1.0, 4).source;
    metrics::ReversibilityVerdict v2 = metrics::reverse_success(orig, obf, inflated);
    CHECK(v2.tokens_deobf > v2.tokens_obf);
    bool flagged_tokens = false;
    for (const std::string& reason : v2.reasons)
        if (reason.find("token") != std::string::npos) flagged_tokens = true;
    CHECK(flagged_tokens);
}

TEST_CASE("reverse_success margins are configurable") {
    std::string orig = canon(kGrades);
    std::string obf = obf::rename_variables(checked_ast(orig), obf::NamingScheme::Sequential, 4).source;

    metrics::ReverseMargins strict;
    strict.sim_threshold = 0.0;  // nothing can pass
    metrics::ReversibilityVerdict v = metrics::reverse_success(orig, obf, orig, strict);
    CHECK_FALSE(v.success);

    metrics::ReverseMargins lax;
    lax.sim_threshold = 1.1;
    lax.readability_margin = 1.0;
    metrics::ReversibilityVerdict w = metrics::reverse_success(orig, obf, obf, lax);
    CHECK(w.success);  // even an echo passes with absurd margins
}
