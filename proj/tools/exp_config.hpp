#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "obfkit/exp/cft.hpp"
#include "obfkit/exp/forward.hpp"
#include "obfkit/exp/patterns.hpp"
#include "obfkit/exp/prompts.hpp"
#include "obfkit/exp/reverse.hpp"
#include "obfkit/model/client.hpp"
#include "obfkit/obf/record.hpp"
#include "obfkit/obf/transforms.hpp"
#include "obfkit/util/toml.hpp"

namespace obfkit::cli {

// One [model*] TOML section: which client to construct plus the request
// parameters it carries.
struct BackendSpec {
    std::string backend = "mock-echo";  // mock-echo | mock-tool | live | replay
    model::ModelConfig config;
    std::string cache_dir;               // replay only; resolved to the config file
    std::string replay_mode = "strict";  // strict | record (record wraps a live client)
};

// Everything an experiment subcommand needs, parsed from one exp.toml.
// Relative paths are resolved against the config file's directory so a
// manifest works from any working directory.
struct GlobalConfig {
    std::string corpus_root;
    obf::Technique technique = obf::Technique::VariableRenaming;
    obf::ObfParams params;
    uint64_t seed = 0;
    exp::StrategyKind strategy = exp::StrategyKind::Simple;
    int shots = 2;  // few-shot / augmented strategies
    int samples_per_item = 5;
    metrics::ReverseMargins margins;
    exp::ExperimentLimits limits;
    BackendSpec model;                 // [model]
    std::optional<BackendSpec> base;   // [model.base], forward S2/S3 legs
    std::optional<BackendSpec> sft;    // [model.sft] three-way comparison
    std::optional<BackendSpec> bft;    // [model.bft]
    std::optional<BackendSpec> cft;    // [model.cft]
};

// Loads and validates the manifest. Throws std::runtime_error with the file
// and key on bad values.
GlobalConfig load_global_config(const std::string& path);

// Parses one model section (e.g. "model" or "model.sft") from `toml`.
BackendSpec parse_backend(const util::TomlTable& toml, const std::string& section,
                          const std::string& config_dir);

// Constructs the client a BackendSpec describes. The mock backends are
// deterministic stand-ins: mock-echo returns the prompt's code payload
// verbatim; mock-tool re-applies the configured transformation to it.
// technique/params/seed feed only the mock-tool behavior.
std::unique_ptr<model::ChatClient> make_backend(const BackendSpec& spec,
                                                obf::Technique technique,
                                                const obf::ObfParams& params, uint64_t seed);

// The code payload of the last user message, used by the mock backends.
// Prompt layout guarantees the payload follows the first blank line;
// correction prompts carry it after the fixed "Return the complete
// corrected program." marker instead.
std::string prompt_payload(const std::vector<model::Message>& messages);

}  // namespace obfkit::cli
