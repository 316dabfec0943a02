#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "obfkit/interp/evaluator.hpp"

namespace obfkit::data {

struct CorpusEntry {
    std::string problem_id;
    std::string program_id;
    std::string path;    // path of the .java file as given to the loader
    std::string source;  // file bytes, untransformed
    interp::TestSuite suite;
};

// One rejected file with the diagnostic category that excluded it:
// "unreadable" | "parse_error" | "check_error" | "no_tests" |
// "failed_own_tests" | "missing".
struct SkipRecord {
    std::string path;
    std::string category;
    std::string message;
};

struct CorpusLimits {
    size_t max_programs = 0;  // 0 = unlimited
    interp::RunLimits run;
};

struct Corpus {
    std::string root;
    std::string manifest_digest;  // SHA-256 over the included files, path-sorted
    std::vector<CorpusEntry> entries;
    std::vector<SkipRecord> skips;
};

// Loads `<root>/<problem_id>/<program_id>.java` with test suites from
// `<root>/<problem_id>/tests/NN.{in,out}`. Entries that fail to parse,
// check, or pass their own suite become skip records. An optional
// `<root>/manifest.json` may restrict the problem set ({"problems": [...]}).
// Ordering is deterministic (by path). Throws std::runtime_error on a
// missing root, a malformed manifest, or an empty result.
Corpus load_corpus(const std::string& root, const CorpusLimits& limits = {});

}  // namespace obfkit::data
