#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "obfkit/data/builders.hpp"
#include "obfkit/data/corpus.hpp"
#include "obfkit/data/export.hpp"
#include "obfkit/interp/evaluator.hpp"
#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/printer.hpp"
#include "obfkit/util/digest.hpp"

namespace fs = std::filesystem;
using namespace obfkit;

namespace {

struct TempTree {
    fs::path root;

    TempTree() {
        root = fs::temp_directory_path() /
               ("obfkit_data_" + util::short_digest(std::to_string(
                                     std::chrono::steady_clock::now().time_since_epoch().count())));
        fs::create_directories(root);
    }
    ~TempTree() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }

    void write(const std::string& rel, const std::string& content) const {
        fs::path p = root / rel;
        fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
    }
};

const char* kSumA = R"(import java.util.Scanner;

public class SumPair {
    public static void main(String[] args) {
        Scanner reader = new Scanner(System.in);
        int left = reader.nextInt();
        int right = reader.nextInt();
        int total = left + right;
        System.out.println("total " + total);
    }
}
)";

// Same problem, different shape: accumulates in a loop of two reads.
const char* kSumB = R"(import java.util.Scanner;

public class SumLoop {
    public static void main(String[] args) {
        Scanner reader = new Scanner(System.in);
        int total = 0;
        for (int index = 0; index < 2; index++) {
            int value = reader.nextInt();
            total += value;
        }
        System.out.println("total " + total);
    }
}
)";

const char* kGreet = R"(import java.util.Scanner;

public class Greeter {
    public static void main(String[] args) {
        Scanner reader = new Scanner(System.in);
        String name = reader.next();
        System.out.println("hello " + name);
    }
}
)";

// Populates: 2 problems, 3 valid programs, 3 rejectable files.
void fill_valid(const TempTree& tree) {
    tree.write("p_sum/a.java", kSumA);
    tree.write("p_sum/b.java", kSumB);
    tree.write("p_sum/tests/01.in", "2 3\n");
    tree.write("p_sum/tests/01.out", "total 5\n");
    tree.write("p_sum/tests/02.in", "-4 10\n");
    tree.write("p_sum/tests/02.out", "total 6\n");

    tree.write("p_greet/main.java", kGreet);
    tree.write("p_greet/tests/01.in", "ada\n");
    tree.write("p_greet/tests/01.out", "hello ada\n");
}

void fill_invalid(const TempTree& tree) {
    tree.write("p_sum/broken.java", "public class Broken { not java at all");
    tree.write("p_sum/wrong.java",
               "public class Wrong { public static void main(String[] args) { "
               "System.out.println(\"total 0\"); } }");
    tree.write("p_orphan/solo.java",
               "public class Solo { public static void main(String[] args) { "
               "System.out.println(1); } }");
}

}  // namespace

TEST_CASE("sha256 matches the FIPS test vectors") {
    CHECK(util::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(util::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(util::short_digest("abc") == "ba7816bf8f01cfea");
}

TEST_CASE("load_corpus filters entries and records skips") {
    TempTree tree;
    fill_valid(tree);
    fill_invalid(tree);

    data::Corpus corpus = data::load_corpus(tree.root.string());
    REQUIRE(corpus.entries.size() == 3);
    CHECK(corpus.entries[0].problem_id == "p_greet");
    CHECK(corpus.entries[0].program_id == "main");
    CHECK(corpus.entries[1].program_id == "a");
    CHECK(corpus.entries[2].program_id == "b");
    CHECK(corpus.entries[1].suite.cases.size() == 2);

    REQUIRE(corpus.skips.size() == 3);
    std::set<std::string> categories;
    for (const auto& skip : corpus.skips) categories.insert(skip.category);
    CHECK(categories == std::set<std::string>{"parse_error", "failed_own_tests", "no_tests"});
}

TEST_CASE("load_corpus digest is stable and location-independent") {
    TempTree tree;
    fill_valid(tree);
    data::Corpus first = data::load_corpus(tree.root.string());
    data::Corpus second = data::load_corpus(tree.root.string());
    CHECK(first.manifest_digest == second.manifest_digest);
    CHECK(first.manifest_digest.size() == 64);

    // Same content under a different root digests identically.
    TempTree copy;
    fill_valid(copy);
    CHECK(data::load_corpus(copy.root.string()).manifest_digest == first.manifest_digest);

    // Content changes move the digest.
    tree.write("p_sum/tests/02.out", "total 6\n\n");
    CHECK(data::load_corpus(tree.root.string()).manifest_digest != first.manifest_digest);
}

TEST_CASE("load_corpus honors the manifest problem list") {
    TempTree tree;
    fill_valid(tree);

    tree.write("manifest.json", R"({"problems": ["p_sum"]})");
    data::Corpus corpus = data::load_corpus(tree.root.string());
    CHECK(corpus.entries.size() == 2);
    for (const auto& e : corpus.entries) CHECK(e.problem_id == "p_sum");

    tree.write("manifest.json", R"({"problems": ["p_sum", "ghost"]})");
    data::Corpus with_ghost = data::load_corpus(tree.root.string());
    CHECK(with_ghost.entries.size() == 2);
    REQUIRE(with_ghost.skips.size() == 1);
    CHECK(with_ghost.skips[0].category == "missing");

    tree.write("manifest.json", "{ not json");
    CHECK_THROWS_AS(data::load_corpus(tree.root.string()), std::runtime_error);
    tree.write("manifest.json", R"({"problems": "p_sum"})");
    CHECK_THROWS_AS(data::load_corpus(tree.root.string()), std::runtime_error);
}

TEST_CASE("load_corpus rejects empty results and missing roots") {
    TempTree tree;
    CHECK_THROWS_AS(data::load_corpus((tree.root / "nope").string()), std::runtime_error);
    tree.write("p_empty/tests/01.in", "x\n");
    tree.write("p_empty/tests/01.out", "x\n");
    CHECK_THROWS_AS(data::load_corpus(tree.root.string()), std::runtime_error);
}

TEST_CASE("load_corpus caps entries at max_programs") {
    TempTree tree;
    fill_valid(tree);
    data::CorpusLimits limits;
    limits.max_programs = 2;
    data::Corpus corpus = data::load_corpus(tree.root.string(), limits);
    CHECK(corpus.entries.size() == 2);
}

TEST_CASE("build_pairs validates and reproduces under a fixed seed") {
    TempTree tree;
    fill_valid(tree);
    data::Corpus corpus = data::load_corpus(tree.root.string());

    data::PairSet set = data::build_pairs(corpus, obf::Technique::DeadCodeInsertion, 21, 3);
    REQUIRE(set.pairs.size() == 3);
    for (const auto& pair : set.pairs) {
        // Obfuscated member passes the original's suite.
        const data::CorpusEntry* entry = nullptr;
        for (const auto& e : corpus.entries)
            if (e.problem_id == pair.problem_id && e.program_id == pair.program_id) entry = &e;
        REQUIRE(entry != nullptr);
        interp::EvalOutcome outcome = interp::evaluate_semantics(pair.obfuscated, entry->suite);
        CHECK(outcome.verdict == interp::Verdict::Pass);

        // Originals are stored canonically.
        lang::CheckedProgram checked = lang::analyze(pair.original);
        REQUIRE(checked.ok());
        CHECK(lang::print_source(*checked.ast) == pair.original);
    }

    data::PairSet again = data::build_pairs(corpus, obf::Technique::DeadCodeInsertion, 21, 3);
    REQUIRE(again.pairs.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(again.pairs[i].program_id == set.pairs[i].program_id);
        CHECK(again.pairs[i].obfuscated == set.pairs[i].obfuscated);
    }

    data::PairSet different = data::build_pairs(corpus, obf::Technique::DeadCodeInsertion, 22, 3);
    bool any_differs = false;
    for (size_t i = 0; i < 3; ++i)
        if (different.pairs[i].obfuscated != set.pairs[i].obfuscated) any_differs = true;
    CHECK(any_differs);

    CHECK(data::build_pairs(corpus, obf::Technique::VariableRenaming, 1, 0).pairs.empty());
    CHECK_THROWS_AS(data::build_pairs(corpus, obf::Technique::VariableRenaming, 1, 4),
                    std::invalid_argument);
}

TEST_CASE("build_triplets balances tasks and separates NEG problems") {
    TempTree tree;
    fill_valid(tree);
    data::Corpus corpus = data::load_corpus(tree.root.string());

    auto triplets = data::build_triplets(corpus, obf::Technique::VariableRenaming, 5, 4);
    REQUIRE(triplets.size() == 12);
    int pos = 0, neg = 0, gen = 0;
    for (const auto& t : triplets) {
        switch (t.task) {
            case data::TripletTask::POS:
                ++pos;
                CHECK(t.target == "equivalent");
                CHECK_FALSE(t.code_b.empty());
                break;
            case data::TripletTask::NEG:
                ++neg;
                CHECK(t.target == "different");
                CHECK(t.problem_a != t.problem_b);
                break;
            case data::TripletTask::GEN:
                ++gen;
                CHECK(t.code_b.empty());
                CHECK_FALSE(t.target.empty());
                break;
        }
    }
    CHECK(pos == 4);
    CHECK(neg == 4);
    CHECK(gen == 4);

    // Deterministic under seed.
    auto again = data::build_triplets(corpus, obf::Technique::VariableRenaming, 5, 4);
    REQUIRE(again.size() == triplets.size());
    for (size_t i = 0; i < triplets.size(); ++i) {
        CHECK(again[i].code_a == triplets[i].code_a);
        CHECK(again[i].target == triplets[i].target);
    }
}

TEST_CASE("build_triplets needs two problems for NEG") {
    TempTree tree;
    fill_valid(tree);
    tree.write("manifest.json", R"({"problems": ["p_sum"]})");
    data::Corpus corpus = data::load_corpus(tree.root.string());
    CHECK_THROWS_AS(data::build_triplets(corpus, obf::Technique::VariableRenaming, 1, 2),
                    std::invalid_argument);
}

TEST_CASE("export_jsonl writes byte-stable chat lines with the fixed prompt") {
    TempTree tree;
    fill_valid(tree);
    data::Corpus corpus = data::load_corpus(tree.root.string());
    auto triplets = data::build_triplets(corpus, obf::Technique::StringEncryption, 9, 3);

    fs::path out = tree.root / "out.jsonl";
    data::ExportSummary summary = data::export_jsonl(triplets, "default", out.string());
    CHECK(summary.lines == 9);

    std::ifstream in(out);
    std::string line;
    size_t lines = 0, gen_lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        auto j = nlohmann::json::parse(line);
        REQUIRE(j["messages"].size() == 3);
        CHECK(j["messages"][0]["role"] == "system");
        CHECK(j["messages"][1]["role"] == "user");
        CHECK(j["messages"][2]["role"] == "assistant");
        std::string user = j["messages"][1]["content"];
        if (j["meta"]["task"] == "GEN") {
            ++gen_lines;
            CHECK(user.rfind("Obfuscate the following Java code by literals encryption "
                             "while preserving its functionality.",
                             0) == 0);
        } else {
            std::string assistant = j["messages"][2]["content"];
            CHECK((assistant == "equivalent" || assistant == "different"));
        }
    }
    CHECK(lines == 9);
    CHECK(gen_lines == 3);

    data::ExportSummary again = data::export_jsonl(triplets, "default", out.string());
    CHECK(again.digest == summary.digest);

    CHECK_THROWS_AS(data::export_jsonl({}, "default", out.string()), std::invalid_argument);
    CHECK_THROWS_AS(data::export_jsonl(triplets, "fancy", out.string()), std::invalid_argument);
    CHECK_THROWS_AS(
        data::export_jsonl(triplets, "default", (tree.root / "no_dir" / "x.jsonl").string()),
        std::runtime_error);
}

TEST_CASE("render_messages substitutes every technique name") {
    data::TripletInstance gen;
    gen.task = data::TripletTask::GEN;
    gen.code_a = "public class A {}";
    gen.target = "public class B {}";

    gen.technique = obf::Technique::VariableRenaming;
    CHECK(data::render_messages(gen, "default")[1].content.find("by variable renaming") !=
          std::string::npos);
    gen.technique = obf::Technique::DeadCodeInsertion;
    CHECK(data::render_messages(gen, "default")[1].content.find("by dead code insertion") !=
          std::string::npos);
    gen.technique = obf::Technique::StringEncryption;
    CHECK(data::render_messages(gen, "default")[1].content.find("by literals encryption") !=
          std::string::npos);
}
