#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace obfkit::model {

struct Message {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct RetryPolicy {
    int max_attempts = 3;      // total tries, >= 1
    int backoff_ms = 250;      // first retry delay
    double backoff_factor = 2.0;
};

struct ModelConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4.1-mini";
    double temperature = 0.0;
    int max_tokens = 2048;
    int timeout_ms = 60000;
    RetryPolicy retry;
    std::string api_key_env = "MODEL_API_KEY";  // indirection only, never the key itself
    int max_in_flight = 4;                      // live-backend concurrency cap
};

struct ModelUsage {
    int64_t prompt_tokens = 0;
    int64_t output_tokens = 0;
};

struct ModelResponse {
    std::string text;
    ModelUsage usage;
    int64_t latency_ms = 0;
    bool cache_hit = false;
};

// Raised by the replay backend in strict mode when a prompt was never
// recorded.
class ReplayMiss : public std::runtime_error {
public:
    explicit ReplayMiss(const std::string& what) : std::runtime_error(what) {}
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    // Throws std::invalid_argument on empty messages; backend-specific
    // errors are std::runtime_error (or ReplayMiss).
    virtual ModelResponse complete(const std::vector<Message>& messages,
                                   const ModelConfig& config) = 0;
};

// Deterministic in-process backend; the behavior sees the full message list.
using MockBehavior = std::function<std::string(const std::vector<Message>&)>;
std::unique_ptr<ChatClient> make_mock_client(MockBehavior behavior);
std::unique_ptr<ChatClient> make_mock_client(std::string fixed_text);

// Live chat-completions backend (httplib) with bounded retries on transient
// failures. The API key is read from config.api_key_env at call time.
std::unique_ptr<ChatClient> make_live_client();

enum class ReplayMode {
    Record,  // miss -> ask `inner`, persist, return
    Strict,  // miss -> ReplayMiss
};

// Content-addressed record/replay cache under `cache_dir`. Keys are
// sha256(model, temperature, messages); files carry request + response but
// never credentials.
std::unique_ptr<ChatClient> make_replay_client(std::string cache_dir, ReplayMode mode,
                                               std::unique_ptr<ChatClient> inner = nullptr);

// Pure helpers, exposed for tests: wire-format request body and response
// parsing for the chat-completions schema.
std::string build_chat_request(const std::vector<Message>& messages, const ModelConfig& config);
ModelResponse parse_chat_response(const std::string& body);

// Cache key for the replay backend (sha256 hex).
std::string replay_cache_key(const std::vector<Message>& messages, const ModelConfig& config);

}  // namespace obfkit::model
