#include "obfkit/metrics/readability.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "obfkit/lang/diagnostics.hpp"
#include "obfkit/lang/lexer.hpp"

namespace obfkit::metrics {
namespace {

// Identifier lexemes that belong to the language surface rather than the
// author's vocabulary; they are skipped by the identifier features.
const std::set<std::string>& builtin_names() {
    static const std::set<std::string> kBuiltins = {
        "System",     "out",        "in",          "println",     "print",
        "Scanner",    "String",     "Math",        "Integer",     "Long",
        "Double",     "Character",  "main",        "java",        "util",
        "lang",       "MAX_VALUE",  "MIN_VALUE",   "PI",          "E",
        "length",     "charAt",     "substring",   "indexOf",     "equals",
        "equalsIgnoreCase",         "compareTo",   "startsWith",  "endsWith",
        "contains",   "toUpperCase", "toLowerCase", "trim",       "split",
        "replace",    "isEmpty",    "concat",      "valueOf",     "parseInt",
        "parseLong",  "parseDouble", "toString",   "abs",         "pow",
        "sqrt",       "floor",      "ceil",        "round",       "nextInt",
        "nextLong",   "nextDouble", "nextBoolean", "next",        "nextLine",
        "hasNextInt", "hasNextLong", "hasNextDouble",             "hasNext",
        "hasNextLine", "close",     "isDigit",     "isLetter",    "isLetterOrDigit",
        "isWhitespace", "isUpperCase", "isLowerCase",             "isSpaceChar",
        "getNumericValue"};
    return kBuiltins;
}

// Compact English/programming vocabulary for the dictionary-word feature.
const std::set<std::string>& dictionary() {
    static const std::set<std::string> kWords = {
        "add",      "age",      "alpha",    "angle",    "answer",  "area",     "args",
        "array",    "average",  "balance",  "ball",     "base",    "begin",    "best",
        "better",   "big",      "binary",   "bit",      "bits",    "board",    "body",
        "book",     "bottom",   "bound",    "box",      "branch",  "buffer",   "build",
        "builder",  "bucket",   "cache",    "calc",     "card",    "case",     "cell",
        "chain",    "chapter",  "character", "check",   "child",   "circle",   "code",
        "col",      "color",    "column",   "common",   "compute", "convert",  "copy",
        "cost",     "count",    "cube",     "current",  "cursor",  "data",     "date",
        "day",      "days",     "decimal",  "decode",   "deck",    "degree",   "delta",
        "denominator",          "depth",    "detail",   "dice",    "diff",     "digit",
        "digits",   "display",  "distance", "divide",   "divisor", "down",     "edge",
        "element",  "encode",   "end",      "energy",   "entry",   "even",     "extra",
        "factor",   "factorial", "field",   "filler",   "final",   "find",     "first",
        "flag",     "format",   "found",    "fraction", "game",    "gcd",      "goal",
        "good",     "graph",    "greet",    "grid",     "half",    "hand",     "hash",
        "head",     "height",   "helper",   "hex",      "high",    "holder",   "hour",
        "hours",    "house",    "index",    "info",     "input",   "insert",   "item",
        "items",    "key",      "keys",     "label",    "large",   "last",     "leaf",
        "left",     "len",      "letter",   "letters",  "level",   "limit",    "line",
        "lines",    "list",     "low",      "lower",    "map",     "marker",   "mask",
        "mass",     "matrix",   "max",      "maximum",  "mean",    "median",   "merge",
        "mid",      "middle",   "min",      "minimum",  "minute",  "minutes",  "mode",
        "month",    "move",     "multiple", "multiply", "name",    "node",     "num",
        "number",   "numbers",  "numerator", "odd",     "offset",  "order",    "outer",
        "output",   "over",     "padding",  "page",     "pair",    "parent",   "parse",
        "part",     "path",     "pattern",  "peak",     "phrase",  "piece",    "pivot",
        "player",   "point",    "points",   "pos",      "position", "power",   "prefix",
        "prev",     "previous", "price",    "prime",    "probe",   "process",  "product",
        "quarter",  "query",    "queue",    "quotient", "radius",  "random",   "range",
        "rank",     "rate",     "ratio",    "read",     "reader",  "record",   "rect",
        "rectangle", "remainder",           "remove",   "repeat",  "rest",     "result",
        "results",  "reverse",  "right",    "root",     "rotate",  "row",      "rows",
        "run",      "scale",    "scan",     "score",    "scores",  "scratch",  "search",
        "second",   "seconds",  "section",  "seed",     "sentence", "set",     "shift",
        "show",     "side",     "sign",     "size",     "slack",   "small",    "solve",
        "sort",     "sorted",   "source",   "space",    "spare",   "speed",    "square",
        "stack",    "start",    "stash",    "state",    "step",    "steps",    "store",
        "string",   "sub",      "suffix",   "suit",     "sum",     "swap",     "symbol",
        "table",    "tail",     "tally",    "target",   "tax",     "temp",     "term",
        "text",     "time",     "times",    "title",    "token",   "tokens",   "top",
        "total",    "trace",    "track",    "tree",     "triangle", "turn",    "under",
        "unit",     "up",       "update",   "upper",    "value",   "values",   "vertex",
        "visit",    "vowel",    "weight",   "width",    "winner",  "word",     "words",
        "write",    "writer",   "year",     "years",    "zero"};
    return kWords;
}

// Splits camelCase / snake_case / digit-separated identifiers into parts.
std::vector<std::string> name_parts(const std::string& name) {
    std::vector<std::string> parts;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            parts.push_back(cur);
            cur.clear();
        }
    };
    for (size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '_' || std::isdigit(static_cast<unsigned char>(c))) {
            flush();
            continue;
        }
        if (std::isupper(static_cast<unsigned char>(c)) && !cur.empty() &&
            std::islower(static_cast<unsigned char>(cur.back())))
            flush();
        cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    flush();
    return parts;
}

bool is_dictionary_identifier(const std::string& name) {
    for (const std::string& part : name_parts(name))
        if (part.size() >= 2 && dictionary().count(part)) return true;
    return false;
}

struct Scanned {
    std::vector<std::string> identifiers;  // occurrences
    std::vector<std::string> lexemes;      // significant tokens
    int comment_tokens = 0;
    int max_depth = 0;
};

bool looks_like_identifier(const std::string& word) {
    if (word.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(word[0])) && word[0] != '_') return false;
    for (char c : word)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return !lang::is_keyword(word);
}

Scanned scan(std::string_view source) {
    Scanned out;
    try {
        lang::TokenStream ts = lang::tokenize(source);
        int depth = 0;
        for (const lang::Token& t : ts.tokens) {
            if (t.kind == lang::TokenKind::EndOfFile) continue;
            if (t.kind == lang::TokenKind::Comment) {
                ++out.comment_tokens;
                continue;
            }
            out.lexemes.push_back(t.lexeme);
            if (t.kind == lang::TokenKind::Identifier && !builtin_names().count(t.lexeme))
                out.identifiers.push_back(t.lexeme);
            if (t.is_punct("{")) out.max_depth = std::max(out.max_depth, ++depth);
            if (t.is_punct("}")) --depth;
        }
    } catch (const lang::ParseError&) {
        // Unlexable text: grade what we can from whitespace tokens and raw braces.
        std::string word;
        int depth = 0;
        auto flush = [&] {
            if (word.empty()) return;
            out.lexemes.push_back(word);
            if (looks_like_identifier(word)) out.identifiers.push_back(word);
            word.clear();
        };
        for (char c : source) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
                continue;
            }
            if (c == '{') out.max_depth = std::max(out.max_depth, ++depth);
            if (c == '}') --depth;
            word += c;
        }
        flush();
    }
    return out;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

ReadabilityScore readability(std::string_view source) {
    Scanned sc = scan(source);
    ReadabilityFeatures f;

    if (!sc.identifiers.empty()) {
        double len_sum = 0, dict = 0, single = 0;
        for (const std::string& id : sc.identifiers) {
            len_sum += static_cast<double>(id.size());
            if (is_dictionary_identifier(id)) dict += 1;
            if (id.size() == 1) single += 1;
        }
        double n = static_cast<double>(sc.identifiers.size());
        f.mean_identifier_length = len_sum / n;
        f.dictionary_fraction = dict / n;
        f.single_char_fraction = single / n;
    }

    size_t lines = 0, line_chars = 0, cur = 0;
    bool blank = true;
    for (char c : source) {
        if (c == '\n') {
            if (!blank) {
                ++lines;
                line_chars += cur;
            }
            cur = 0;
            blank = true;
        } else if (c != '\r') {
            ++cur;
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        }
    }
    if (!blank) {
        ++lines;
        line_chars += cur;
    }
    f.mean_line_length = lines ? static_cast<double>(line_chars) / lines : 0.0;

    f.max_nesting_depth = sc.max_depth;

    int all_tokens = static_cast<int>(sc.lexemes.size()) + sc.comment_tokens;
    f.comment_density = all_tokens ? static_cast<double>(sc.comment_tokens) / all_tokens : 0.0;

    if (!sc.lexemes.empty()) {
        std::map<std::string, int> freq;
        for (const std::string& t : sc.lexemes) ++freq[t];
        double n = static_cast<double>(sc.lexemes.size());
        double h = 0;
        for (const auto& [tok, count] : freq) {
            double p = count / n;
            h -= p * std::log2(p);
        }
        f.token_entropy = h;
    }

    // Normalized sub-scores, each in [0,1], higher = more readable.
    double f_len = clamp01((f.mean_identifier_length - 1.0) / 7.0);
    double f_dict = f.dictionary_fraction;
    double f_single = 1.0 - f.single_char_fraction;
    double f_line = 1.0 - clamp01((f.mean_line_length - 12.0) / 68.0);
    double f_nest = 1.0 - clamp01((f.max_nesting_depth - 2.0) / 6.0);
    double f_comment = clamp01(f.comment_density * 5.0);
    double f_entropy = 1.0 - clamp01((f.token_entropy - 2.5) / 3.5);

    ReadabilityScore score;
    score.features = f;
    score.value = 0.15 * f_len + 0.35 * f_dict + 0.20 * f_single + 0.05 * f_line +
                  0.10 * f_nest + 0.05 * f_comment + 0.10 * f_entropy;
    return score;
}

}  // namespace obfkit::metrics
