#include "obfkit/data/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "obfkit/lang/checker.hpp"
#include "obfkit/util/digest.hpp"

namespace fs = std::filesystem;

namespace obfkit::data {
namespace {

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// tests/NN.in + tests/NN.out pairs, sorted by stem; incomplete pairs are
// ignored.
interp::TestSuite load_suite(const fs::path& tests_dir, const std::string& problem_id) {
    interp::TestSuite suite;
    suite.id = problem_id;
    if (!fs::is_directory(tests_dir)) return suite;

    std::set<std::string> stems;
    for (const auto& e : fs::directory_iterator(tests_dir))
        if (e.is_regular_file() && e.path().extension() == ".in") stems.insert(e.path().stem().string());

    for (const std::string& stem : stems) {
        auto input = read_file(tests_dir / (stem + ".in"));
        auto expected = read_file(tests_dir / (stem + ".out"));
        if (!input || !expected) continue;
        suite.cases.push_back({*input, *expected});
    }
    return suite;
}

std::vector<std::string> manifest_problems(const fs::path& root) {
    fs::path manifest = root / "manifest.json";
    if (!fs::exists(manifest)) return {};
    auto text = read_file(manifest);
    if (!text) throw std::runtime_error("malformed manifest: unreadable " + manifest.string());
    nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw std::runtime_error("malformed manifest: not a JSON object: " + manifest.string());
    if (!j.contains("problems")) return {};
    if (!j["problems"].is_array())
        throw std::runtime_error("malformed manifest: \"problems\" must be an array");
    std::vector<std::string> out;
    for (const auto& p : j["problems"]) {
        if (!p.is_string())
            throw std::runtime_error("malformed manifest: problem ids must be strings");
        out.push_back(p.get<std::string>());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Corpus load_corpus(const std::string& root, const CorpusLimits& limits) {
    fs::path root_path(root);
    if (!fs::is_directory(root_path))
        throw std::runtime_error("corpus root not found: " + root);

    Corpus corpus;
    corpus.root = root;

    std::vector<std::string> problems = manifest_problems(root_path);
    bool restricted = !problems.empty();
    if (!restricted) {
        for (const auto& e : fs::directory_iterator(root_path))
            if (e.is_directory()) problems.push_back(e.path().filename().string());
        std::sort(problems.begin(), problems.end());
    }

    // (relative path, bytes) of every file backing an accepted entry; the
    // manifest digest is computed over this list, path-sorted.
    std::map<std::string, std::string> digest_inputs;

    for (const std::string& problem_id : problems) {
        fs::path problem_dir = root_path / problem_id;
        if (!fs::is_directory(problem_dir)) {
            corpus.skips.push_back({problem_dir.string(), "missing",
                                    "problem listed in manifest but absent on disk"});
            continue;
        }

        interp::TestSuite suite = load_suite(problem_dir / "tests", problem_id);

        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(problem_dir))
            if (e.is_regular_file() && e.path().extension() == ".java")
                files.push_back(e.path().filename().string());
        std::sort(files.begin(), files.end());

        bool problem_used = false;
        for (const std::string& file : files) {
            if (limits.max_programs > 0 && corpus.entries.size() >= limits.max_programs) break;
            fs::path path = problem_dir / file;
            std::string path_str = path.string();

            auto source = read_file(path);
            if (!source) {
                corpus.skips.push_back({path_str, "unreadable", "could not read file"});
                continue;
            }
            if (suite.cases.empty()) {
                corpus.skips.push_back({path_str, "no_tests", "problem has no test cases"});
                continue;
            }
            lang::CheckedProgram checked = lang::analyze(*source);
            if (!checked.ast) {
                corpus.skips.push_back({path_str, "parse_error", checked.report.summary()});
                continue;
            }
            if (!checked.report.ok()) {
                corpus.skips.push_back({path_str, "check_error", checked.report.summary()});
                continue;
            }
            interp::EvalOutcome outcome = interp::evaluate_semantics(*checked.ast, suite, limits.run);
            if (outcome.verdict != interp::Verdict::Pass) {
                corpus.skips.push_back({path_str, "failed_own_tests", outcome.feedback});
                continue;
            }

            CorpusEntry entry;
            entry.problem_id = problem_id;
            entry.program_id = fs::path(file).stem().string();
            entry.path = path_str;
            entry.source = *source;
            entry.suite = suite;
            corpus.entries.push_back(std::move(entry));
            problem_used = true;
            digest_inputs[problem_id + "/" + file] = *source;
        }

        if (problem_used)
            for (size_t i = 0; i < suite.cases.size(); ++i) {
                digest_inputs[problem_id + "/tests/" + std::to_string(i) + ".in"] =
                    suite.cases[i].stdin_text;
                digest_inputs[problem_id + "/tests/" + std::to_string(i) + ".out"] =
                    suite.cases[i].expected_stdout;
            }

        if (limits.max_programs > 0 && corpus.entries.size() >= limits.max_programs) break;
    }

    if (corpus.entries.empty()) throw std::runtime_error("empty corpus under " + root);

    std::string blob;
    for (const auto& [rel, bytes] : digest_inputs) {
        blob += rel;
        blob += '\0';
        blob += bytes;
        blob += '\0';
    }
    corpus.manifest_digest = util::sha256_hex(blob);
    return corpus;
}

}  // namespace obfkit::data
