#include "exp_config.hpp"

#include <filesystem>
#include <stdexcept>
#include <utility>

#include "obfkit/lang/checker.hpp"
#include "obfkit/util/rng.hpp"

namespace obfkit::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
    throw std::runtime_error("config: " + key + ": " + what);
}

std::string resolve_path(const std::string& value, const std::string& config_dir) {
    fs::path p(value);
    if (p.is_absolute() || config_dir.empty()) return p.lexically_normal().string();
    return (fs::path(config_dir) / p).lexically_normal().string();
}

int require_range_int(const util::TomlTable& toml, const std::string& key, int64_t lo,
                      int64_t hi, int64_t fallback) {
    int64_t v = toml.get_int(key).value_or(fallback);
    if (v < lo || v > hi) {
        bad_key(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
}

}  // namespace

BackendSpec parse_backend(const util::TomlTable& toml, const std::string& section,
                          const std::string& config_dir) {
    BackendSpec spec;
    const std::string p = section + ".";
    spec.backend = toml.get_string(p + "backend").value_or(spec.backend);
    if (spec.backend != "mock-echo" && spec.backend != "mock-tool" &&
        spec.backend != "live" && spec.backend != "replay") {
        bad_key(p + "backend", "unknown backend '" + spec.backend +
                                   "' (expected mock-echo, mock-tool, live, or replay)");
    }
    model::ModelConfig& mc = spec.config;
    mc.model = toml.get_string(p + "name").value_or(mc.model);
    mc.endpoint = toml.get_string(p + "endpoint").value_or(mc.endpoint);
    mc.temperature = toml.get_double(p + "temperature").value_or(mc.temperature);
    mc.max_tokens = require_range_int(toml, p + "max_tokens", 1, 1 << 20, mc.max_tokens);
    mc.timeout_ms = require_range_int(toml, p + "timeout_ms", 1, 3600000, mc.timeout_ms);
    mc.api_key_env = toml.get_string(p + "api_key_env").value_or(mc.api_key_env);
    mc.max_in_flight = require_range_int(toml, p + "max_in_flight", 1, 64, mc.max_in_flight);
    mc.retry.max_attempts =
        require_range_int(toml, p + "retry_max_attempts", 1, 20, mc.retry.max_attempts);
    mc.retry.backoff_ms =
        require_range_int(toml, p + "retry_backoff_ms", 0, 600000, mc.retry.backoff_ms);

    spec.replay_mode = toml.get_string(p + "replay_mode").value_or(spec.replay_mode);
    if (spec.replay_mode != "strict" && spec.replay_mode != "record") {
        bad_key(p + "replay_mode", "expected 'strict' or 'record'");
    }
    if (auto dir = toml.get_string(p + "cache_dir")) {
        spec.cache_dir = resolve_path(*dir, config_dir);
    }
    if (spec.backend == "replay" && spec.cache_dir.empty()) {
        bad_key(p + "cache_dir", "required for the replay backend");
    }
    return spec;
}

GlobalConfig load_global_config(const std::string& path) {
    util::TomlTable toml = util::load_toml(path);
    const std::string config_dir = fs::path(path).parent_path().string();

    GlobalConfig cfg;
    if (auto root = toml.get_string("corpus.root")) {
        cfg.corpus_root = resolve_path(*root, config_dir);
    }

    if (auto name = toml.get_string("experiment.technique")) {
        auto technique = obf::technique_from_name(*name);
        if (!technique) bad_key("experiment.technique", "unknown technique '" + *name + "'");
        cfg.technique = *technique;
    }
    if (auto name = toml.get_string("experiment.scheme")) {
        auto scheme = obf::scheme_from_name(*name);
        if (!scheme) bad_key("experiment.scheme", "unknown naming scheme '" + *name + "'");
        cfg.params.scheme = *scheme;
    }
    cfg.params.density = toml.get_double("experiment.density").value_or(cfg.params.density);
    if (cfg.params.density < 0.0 || cfg.params.density > 1.0) {
        bad_key("experiment.density", "must be in [0, 1]");
    }
    if (auto seed = toml.get_int("experiment.seed")) {
        cfg.seed = static_cast<uint64_t>(*seed);
    }
    if (auto name = toml.get_string("experiment.strategy")) {
        auto kind = exp::strategy_from_name(*name);
        if (!kind) bad_key("experiment.strategy", "unknown strategy '" + *name + "'");
        cfg.strategy = *kind;
    }
    cfg.shots = require_range_int(toml, "experiment.shots", 1, 64, cfg.shots);
    cfg.samples_per_item =
        require_range_int(toml, "experiment.samples_per_item", 1, 1000, cfg.samples_per_item);
    cfg.limits.max_iterations =
        require_range_int(toml, "experiment.max_iterations", 1, 100, cfg.limits.max_iterations);
    cfg.limits.max_programs = require_range_int(toml, "experiment.max_programs", 0,
                                                1 << 20, cfg.limits.max_programs);
    cfg.limits.jobs = require_range_int(toml, "experiment.jobs", 0, 1024, cfg.limits.jobs);

    cfg.margins.sim_threshold =
        toml.get_double("margins.sim_threshold").value_or(cfg.margins.sim_threshold);
    cfg.margins.readability_margin =
        toml.get_double("margins.readability_margin").value_or(cfg.margins.readability_margin);

    if (auto ms = toml.get_int("limits.wall_clock_ms")) {
        cfg.limits.run.wall_clock_ms = static_cast<int>(*ms);
    }
    if (auto steps = toml.get_int("limits.step_budget")) {
        cfg.limits.run.step_budget = *steps;
    }

    cfg.model = parse_backend(toml, "model", config_dir);
    if (toml.contains("model.base.backend") || toml.contains("model.base.name")) {
        cfg.base = parse_backend(toml, "model.base", config_dir);
    }
    if (toml.contains("model.sft.backend") || toml.contains("model.sft.name")) {
        cfg.sft = parse_backend(toml, "model.sft", config_dir);
    }
    if (toml.contains("model.bft.backend") || toml.contains("model.bft.name")) {
        cfg.bft = parse_backend(toml, "model.bft", config_dir);
    }
    if (toml.contains("model.cft.backend") || toml.contains("model.cft.name")) {
        cfg.cft = parse_backend(toml, "model.cft", config_dir);
    }
    return cfg;
}

std::string prompt_payload(const std::vector<model::Message>& messages) {
    static const std::string kCorrectionMarker =
        "Return the complete corrected program.\n\n";
    if (messages.empty()) return "";
    const std::string& content = messages.back().content;
    if (content.rfind("The task was:", 0) == 0) {
        size_t at = content.find(kCorrectionMarker);
        if (at != std::string::npos) return content.substr(at + kCorrectionMarker.size());
    }
    size_t blank = content.find("\n\n");
    if (blank == std::string::npos) return content;
    return content.substr(blank + 2);
}

std::unique_ptr<model::ChatClient> make_backend(const BackendSpec& spec,
                                                obf::Technique technique,
                                                const obf::ObfParams& params, uint64_t seed) {
    if (spec.backend == "mock-echo") {
        return model::make_mock_client([](const std::vector<model::Message>& messages) {
            return prompt_payload(messages);
        });
    }
    if (spec.backend == "mock-tool") {
        return model::make_mock_client(
            [technique, params, seed](const std::vector<model::Message>& messages) {
                std::string payload = prompt_payload(messages);
                lang::CheckedProgram checked = lang::analyze(payload);
                if (!checked.ok()) return payload;
                uint64_t item_seed = util::splitmix64(seed ^ util::fnv1a64(payload));
                lang::Ast ast = std::move(*checked.ast);
                return obf::apply(technique, ast, params, item_seed).source;
            });
    }
    if (spec.backend == "live") {
        return model::make_live_client();
    }
    // replay
    model::ReplayMode mode = spec.replay_mode == "record" ? model::ReplayMode::Record
                                                          : model::ReplayMode::Strict;
    std::unique_ptr<model::ChatClient> inner;
    if (mode == model::ReplayMode::Record) inner = model::make_live_client();
    return model::make_replay_client(spec.cache_dir, mode, std::move(inner));
}

}  // namespace obfkit::cli
