#include "obfkit/exp/cft.hpp"

#include <stdexcept>

namespace obfkit::exp {

ComparativeReport run_cft_comparison(const data::Corpus& corpus, const CftOptions& options,
                                     model::ChatClient& sft, model::ChatClient& bft,
                                     model::ChatClient& cft) {
    struct Leg {
        const char* label;
        const model::ModelConfig* config;
        model::ChatClient* client;
    };
    const Leg legs[] = {{"sft", &options.sft_config, &sft},
                        {"bft", &options.bft_config, &bft},
                        {"cft", &options.cft_config, &cft}};

    ComparativeReport report;
    report.technique = std::string(obf::technique_display_name(options.technique));
    report.seed = options.seed;
    report.config = {
        {"technique", std::string(obf::technique_name(options.technique))},
        {"strategy", std::string(strategy_name(options.strategy.kind))},
        {"sft_model", options.sft_config.model},
        {"bft_model", options.bft_config.model},
        {"cft_model", options.cft_config.model},
        {"seed", std::to_string(options.seed)},
    };

    for (const Leg& leg : legs) {
        ForwardOptions fo;
        fo.technique = options.technique;
        fo.params = options.params;
        fo.seed = options.seed;
        fo.limits = options.limits;
        fo.model_config = *leg.config;

        ReverseOptions ro;
        ro.technique = options.technique;
        ro.params = options.params;
        ro.seed = options.seed;
        ro.strategy = options.strategy;
        ro.margins = options.margins;
        ro.limits = options.limits;
        ro.model_config = *leg.config;

        ModelComparison cmp;
        cmp.label = leg.label;
        cmp.forward = run_forward(corpus, fo, *leg.client);
        cmp.reverse = run_reverse(corpus, ro, *leg.client);
        cmp.forward_preservation_mean = cmp.forward.aggregates.sim_mean;
        cmp.reverse_success_rate = cmp.reverse.aggregates.pass_rate;
        report.models.push_back(std::move(cmp));
    }

    // Effect size over per-program reverse-success indicators, SFT vs CFT.
    std::vector<double> sft_ind, cft_ind;
    for (const auto& r : report.models.front().reverse.records) {
        sft_ind.push_back(r.passed ? 1.0 : 0.0);
    }
    for (const auto& r : report.models.back().reverse.records) {
        cft_ind.push_back(r.passed ? 1.0 : 0.0);
    }
    try {
        report.sft_vs_cft_effect = stats::cohens_d(sft_ind, cft_ind);
    } catch (const std::invalid_argument& e) {
        // Both samples constant: d is 0/0 (same rates) or unbounded
        // (perfect separation); either way the number would mislead.
        report.effect_note = std::string("effect size omitted: ") + e.what();
    }
    return report;
}

}  // namespace obfkit::exp
