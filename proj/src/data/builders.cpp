#include "obfkit/data/builders.hpp"

#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/printer.hpp"
#include "obfkit/util/rng.hpp"

namespace obfkit::data {
namespace {

lang::Ast analyzed(const std::string& source, const std::string& what) {
    lang::CheckedProgram checked = lang::analyze(source);
    if (!checked.ok())
        throw std::logic_error("corpus entry no longer analyzes (" + what +
                               "): " + checked.report.summary());
    return std::move(*checked.ast);
}

std::string canonical(const CorpusEntry& entry) {
    lang::Ast ast = analyzed(entry.source, entry.path);
    return lang::print_source(ast);
}

obf::ObfResult checked_apply(obf::Technique technique, const CorpusEntry& entry,
                             const obf::ObfParams& params, uint64_t seed) {
    lang::Ast ast = analyzed(entry.source, entry.path);
    obf::ObfResult result = obf::apply(technique, ast, params, seed);
    interp::EvalOutcome outcome = interp::evaluate_semantics(result.source, entry.suite);
    if (outcome.verdict != interp::Verdict::Pass)
        throw std::logic_error("tool baseline violation: " +
                               std::string(obf::technique_name(technique)) + " broke " +
                               entry.path + ": " + outcome.feedback);
    return result;
}

}  // namespace

std::string_view triplet_task_name(TripletTask task) {
    switch (task) {
        case TripletTask::POS: return "POS";
        case TripletTask::NEG: return "NEG";
        case TripletTask::GEN: return "GEN";
    }
    return "unknown";
}

PairSet build_pairs(const Corpus& corpus, obf::Technique technique, uint64_t seed, size_t count,
                    const obf::ObfParams& params) {
    if (count > corpus.entries.size())
        throw std::invalid_argument("build_pairs: count " + std::to_string(count) +
                                    " exceeds corpus size " +
                                    std::to_string(corpus.entries.size()));
    PairSet set;
    set.technique = technique;
    set.seed = seed;

    std::vector<size_t> order(corpus.entries.size());
    std::iota(order.begin(), order.end(), size_t{0});
    util::Rng rng(seed ^ util::fnv1a64("pairs"));
    rng.shuffle(order);

    for (size_t k = 0; k < count; ++k) {
        const CorpusEntry& entry = corpus.entries[order[k]];
        uint64_t entry_seed = rng.next_u64();
        obf::ObfResult result = checked_apply(technique, entry, params, entry_seed);

        ProgramPair pair;
        pair.problem_id = entry.problem_id;
        pair.program_id = entry.program_id;
        pair.original = canonical(entry);
        pair.obfuscated = result.source;
        pair.record = std::move(result.record);
        set.pairs.push_back(std::move(pair));
    }
    return set;
}

std::vector<TripletInstance> build_triplets(const Corpus& corpus, obf::Technique technique,
                                            uint64_t seed, size_t per_task_count,
                                            const obf::ObfParams& params) {
    std::set<std::string> problems;
    for (const CorpusEntry& e : corpus.entries) problems.insert(e.problem_id);
    if (problems.size() < 2)
        throw std::invalid_argument(
            "build_triplets: NEG pairs need at least two distinct problem_ids");

    util::Rng rng(seed ^ util::fnv1a64("triplets"));
    std::vector<TripletInstance> out;
    out.reserve(3 * per_task_count);

    auto pick = [&]() -> const CorpusEntry& {
        return corpus.entries[rng.below(corpus.entries.size())];
    };

    for (size_t i = 0; i < per_task_count; ++i) {
        const CorpusEntry& entry = pick();
        obf::ObfResult result = checked_apply(technique, entry, params, rng.next_u64());
        TripletInstance inst;
        inst.task = TripletTask::POS;
        inst.technique = technique;
        inst.code_a = canonical(entry);
        inst.code_b = result.source;
        inst.target = "equivalent";
        inst.problem_a = entry.problem_id;
        inst.program_a = entry.program_id;
        out.push_back(std::move(inst));
    }
    for (size_t i = 0; i < per_task_count; ++i) {
        const CorpusEntry& a = pick();
        const CorpusEntry* b = &pick();
        while (b->problem_id == a.problem_id) b = &pick();
        TripletInstance inst;
        inst.task = TripletTask::NEG;
        inst.technique = technique;
        inst.code_a = canonical(a);
        inst.code_b = canonical(*b);
        inst.target = "different";
        inst.problem_a = a.problem_id;
        inst.program_a = a.program_id;
        inst.problem_b = b->problem_id;
        inst.program_b = b->program_id;
        out.push_back(std::move(inst));
    }
    for (size_t i = 0; i < per_task_count; ++i) {
        const CorpusEntry& entry = pick();
        obf::ObfResult result = checked_apply(technique, entry, params, rng.next_u64());
        TripletInstance inst;
        inst.task = TripletTask::GEN;
        inst.technique = technique;
        inst.code_a = canonical(entry);
        inst.target = result.source;
        inst.problem_a = entry.problem_id;
        inst.program_a = entry.program_id;
        out.push_back(std::move(inst));
    }
    return out;
}

}  // namespace obfkit::data
