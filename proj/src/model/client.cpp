#include "obfkit/model/client.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <semaphore>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "obfkit/util/digest.hpp"

#include "httplib.h"

namespace obfkit::model {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void require_messages(const std::vector<Message>& messages) {
    if (messages.empty()) {
        throw std::invalid_argument("model: message list is empty");
    }
    for (const auto& m : messages) {
        if (m.role != "system" && m.role != "user" && m.role != "assistant") {
            throw std::invalid_argument("model: unknown message role '" + m.role + "'");
        }
    }
}

void require_config(const ModelConfig& config) {
    if (config.temperature < 0.0) {
        throw std::invalid_argument("model: temperature must be >= 0");
    }
    if (config.max_tokens <= 0) {
        throw std::invalid_argument("model: max_tokens must be positive");
    }
    if (config.retry.max_attempts < 1) {
        throw std::invalid_argument("model: retry.max_attempts must be >= 1");
    }
}

int64_t rough_token_count(const std::string& text) {
    int64_t words = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (!ws && !in_word) ++words;
        in_word = !ws;
    }
    return words;
}

class MockClient final : public ChatClient {
public:
    explicit MockClient(MockBehavior behavior) : behavior_(std::move(behavior)) {}

    ModelResponse complete(const std::vector<Message>& messages,
                           const ModelConfig& config) override {
        require_messages(messages);
        require_config(config);
        ModelResponse resp;
        resp.text = behavior_(messages);
        for (const auto& m : messages) resp.usage.prompt_tokens += rough_token_count(m.content);
        resp.usage.output_tokens = rough_token_count(resp.text);
        return resp;
    }

private:
    MockBehavior behavior_;
};

struct Endpoint {
    std::string scheme_host;  // e.g. "https://api.example.com:8443"
    std::string path;         // e.g. "/v1/chat/completions"
};

Endpoint split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("model: endpoint must start with http:// or https://");
    }
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, "/"};
    }
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

bool transient_status(int status) {
    return status == 408 || status == 429 || (status >= 500 && status < 600);
}

class LiveClient final : public ChatClient {
public:
    ModelResponse complete(const std::vector<Message>& messages,
                           const ModelConfig& config) override {
        require_messages(messages);
        require_config(config);
        const char* key = std::getenv(config.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            // Deliberately reports the variable name, never its value.
            throw std::runtime_error("model: API key environment variable '" +
                                     config.api_key_env + "' is not set");
        }

        Endpoint ep = split_endpoint(config.endpoint);
        std::string body = build_chat_request(messages, config);
        httplib::Headers headers = {
            {"Authorization", std::string("Bearer ") + key},
            {"Content-Type", "application/json"},
        };

        std::counting_semaphore<64>& gate = gate_for(config.max_in_flight);
        gate.acquire();
        struct Release {
            std::counting_semaphore<64>& g;
            ~Release() { g.release(); }
        } release{gate};

        std::string last_error;
        int delay_ms = config.retry.backoff_ms;
        auto start = std::chrono::steady_clock::now();
        for (int attempt = 1; attempt <= config.retry.max_attempts; ++attempt) {
            if (attempt > 1) {
                std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
                delay_ms = static_cast<int>(delay_ms * config.retry.backoff_factor);
            }
            httplib::Client cli(ep.scheme_host);
            cli.set_connection_timeout(std::chrono::milliseconds(config.timeout_ms));
            cli.set_read_timeout(std::chrono::milliseconds(config.timeout_ms));
            cli.set_write_timeout(std::chrono::milliseconds(config.timeout_ms));
            auto res = cli.Post(ep.path, headers, body, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 200) {
                ModelResponse resp = parse_chat_response(res->body);
                resp.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
                return resp;
            }
            last_error = "http status " + std::to_string(res->status);
            if (!transient_status(res->status)) break;
        }
        throw std::runtime_error("model: request to " + config.endpoint +
                                 " failed: " + last_error);
    }

private:
    static std::counting_semaphore<64>& gate_for(int max_in_flight) {
        // One process-wide gate; sized on first use.
        static std::counting_semaphore<64> gate(
            std::clamp(max_in_flight, 1, 64));
        return gate;
    }
};

class ReplayClient final : public ChatClient {
public:
    ReplayClient(std::string cache_dir, ReplayMode mode, std::unique_ptr<ChatClient> inner)
        : cache_dir_(std::move(cache_dir)), mode_(mode), inner_(std::move(inner)) {}

    ModelResponse complete(const std::vector<Message>& messages,
                           const ModelConfig& config) override {
        require_messages(messages);
        require_config(config);
        std::string key = replay_cache_key(messages, config);
        fs::path file = fs::path(cache_dir_) / (key + ".json");

        if (fs::exists(file)) {
            std::ifstream in(file, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            json j = json::parse(buf.str());
            ModelResponse resp;
            resp.text = j.at("response").at("text").get<std::string>();
            resp.usage.prompt_tokens = j.at("response").at("prompt_tokens").get<int64_t>();
            resp.usage.output_tokens = j.at("response").at("output_tokens").get<int64_t>();
            resp.latency_ms = 0;  // replay is free; keeps re-runs byte-stable
            resp.cache_hit = true;
            return resp;
        }

        if (mode_ == ReplayMode::Strict || inner_ == nullptr) {
            throw ReplayMiss("model: replay cache miss for key " + key + " under " + cache_dir_);
        }

        ModelResponse resp = inner_->complete(messages, config);
        json j;
        j["key"] = key;
        j["request"] = {{"model", config.model}, {"temperature", config.temperature}};
        auto& msgs = j["request"]["messages"] = json::array();
        for (const auto& m : messages) {
            msgs.push_back({{"role", m.role}, {"content", m.content}});
        }
        j["response"] = {{"text", resp.text},
                         {"prompt_tokens", resp.usage.prompt_tokens},
                         {"output_tokens", resp.usage.output_tokens}};
        fs::create_directories(cache_dir_);
        fs::path tmp = file;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("model: cannot write replay cache file " + tmp.string());
            }
            out << j.dump(2) << '\n';
        }
        fs::rename(tmp, file);
        return resp;
    }

private:
    std::string cache_dir_;
    ReplayMode mode_;
    std::unique_ptr<ChatClient> inner_;
};

}  // namespace

std::string build_chat_request(const std::vector<Message>& messages, const ModelConfig& config) {
    require_messages(messages);
    require_config(config);
    json j;
    j["model"] = config.model;
    j["temperature"] = config.temperature;
    j["max_tokens"] = config.max_tokens;
    auto& msgs = j["messages"] = json::array();
    for (const auto& m : messages) {
        msgs.push_back({{"role", m.role}, {"content", m.content}});
    }
    return j.dump();
}

ModelResponse parse_chat_response(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("model: response is not JSON: ") + e.what());
    }
    ModelResponse resp;
    try {
        const auto& choices = j.at("choices");
        if (!choices.is_array() || choices.empty()) {
            throw std::runtime_error("model: response has no choices");
        }
        resp.text = choices.at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw std::runtime_error("model: response missing choices[0].message.content");
    }
    if (j.contains("usage") && j["usage"].is_object()) {
        const auto& u = j["usage"];
        if (u.contains("prompt_tokens")) resp.usage.prompt_tokens = u["prompt_tokens"].get<int64_t>();
        if (u.contains("completion_tokens")) {
            resp.usage.output_tokens = u["completion_tokens"].get<int64_t>();
        }
    }
    return resp;
}

std::string replay_cache_key(const std::vector<Message>& messages, const ModelConfig& config) {
    // Canonical digest input: model + temperature + ordered messages. The
    // key never sees the API key or endpoint, so caches stay shareable.
    json j;
    j["model"] = config.model;
    j["temperature"] = config.temperature;
    auto& msgs = j["messages"] = json::array();
    for (const auto& m : messages) {
        msgs.push_back({{"role", m.role}, {"content", m.content}});
    }
    return util::sha256_hex(j.dump());
}

std::unique_ptr<ChatClient> make_mock_client(MockBehavior behavior) {
    if (!behavior) {
        throw std::invalid_argument("model: mock behavior must be callable");
    }
    return std::make_unique<MockClient>(std::move(behavior));
}

std::unique_ptr<ChatClient> make_mock_client(std::string fixed_text) {
    return std::make_unique<MockClient>(
        [text = std::move(fixed_text)](const std::vector<Message>&) { return text; });
}

std::unique_ptr<ChatClient> make_live_client() { return std::make_unique<LiveClient>(); }

std::unique_ptr<ChatClient> make_replay_client(std::string cache_dir, ReplayMode mode,
                                               std::unique_ptr<ChatClient> inner) {
    if (cache_dir.empty()) {
        throw std::invalid_argument("model: replay cache directory must not be empty");
    }
    return std::make_unique<ReplayClient>(std::move(cache_dir), mode, std::move(inner));
}

}  // namespace obfkit::model
