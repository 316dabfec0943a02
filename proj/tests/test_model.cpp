#include "doctest.h"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "obfkit/model/client.hpp"
#include "obfkit/model/extract.hpp"
#include "obfkit/util/digest.hpp"

namespace fs = std::filesystem;
using namespace obfkit;

namespace {

struct TempDir {
    fs::path root;
    TempDir() {
        auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        root = fs::temp_directory_path() /
               ("obfkit_model_" + util::short_digest(std::to_string(stamp)));
        fs::create_directories(root);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }
};

std::vector<model::Message> sample_messages() {
    return {{"system", "You are a code assistant."},
            {"user", "Rename every variable in this program."}};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("mock client returns fixed and scripted text with usage estimates") {
    auto fixed = model::make_mock_client("int done;");
    model::ModelConfig cfg;
    auto resp = fixed->complete(sample_messages(), cfg);
    CHECK(resp.text == "int done;");
    CHECK(resp.cache_hit == false);
    CHECK(resp.usage.prompt_tokens > 0);
    CHECK(resp.usage.output_tokens == 2);

    auto scripted = model::make_mock_client(
        [](const std::vector<model::Message>& ms) { return "echo: " + ms.back().content; });
    auto r2 = scripted->complete(sample_messages(), cfg);
    CHECK(r2.text == "echo: Rename every variable in this program.");

    CHECK_THROWS_AS(fixed->complete({}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(fixed->complete({{"robot", "hi"}}, cfg), std::invalid_argument);
    model::ModelConfig bad = cfg;
    bad.temperature = -0.5;
    CHECK_THROWS_AS(fixed->complete(sample_messages(), bad), std::invalid_argument);
    bad = cfg;
    bad.max_tokens = 0;
    CHECK_THROWS_AS(fixed->complete(sample_messages(), bad), std::invalid_argument);
    CHECK_THROWS_AS(model::make_mock_client(model::MockBehavior{}), std::invalid_argument);
}

TEST_CASE("chat request body carries model, sampling knobs, and ordered messages") {
    model::ModelConfig cfg;
    cfg.model = "test-model";
    cfg.temperature = 0.25;
    cfg.max_tokens = 77;
    auto body = nlohmann::json::parse(model::build_chat_request(sample_messages(), cfg));
    CHECK(body["model"] == "test-model");
    CHECK(body["temperature"].get<double>() == doctest::Approx(0.25));
    CHECK(body["max_tokens"] == 77);
    REQUIRE(body["messages"].size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][1]["content"] == "Rename every variable in this program.");
}

TEST_CASE("chat response parsing pulls text and usage, rejects malformed bodies") {
    std::string body = R"({
        "choices": [{"message": {"role": "assistant", "content": "done"}}],
        "usage": {"prompt_tokens": 12, "completion_tokens": 3}
    })";
    auto resp = model::parse_chat_response(body);
    CHECK(resp.text == "done");
    CHECK(resp.usage.prompt_tokens == 12);
    CHECK(resp.usage.output_tokens == 3);

    CHECK_THROWS_AS(model::parse_chat_response("not json"), std::runtime_error);
    CHECK_THROWS_AS(model::parse_chat_response(R"({"choices": []})"), std::runtime_error);
    CHECK_THROWS_AS(model::parse_chat_response(R"({"id": "x"})"), std::runtime_error);
    // Usage block optional.
    auto bare = model::parse_chat_response(R"({"choices":[{"message":{"content":"ok"}}]})");
    CHECK(bare.text == "ok");
    CHECK(bare.usage.prompt_tokens == 0);
}

TEST_CASE("replay cache key tracks messages, model, and temperature only") {
    model::ModelConfig cfg;
    auto base = model::replay_cache_key(sample_messages(), cfg);
    CHECK(base == model::replay_cache_key(sample_messages(), cfg));
    CHECK(base.size() == 64);

    model::ModelConfig other = cfg;
    other.temperature = 0.7;
    CHECK(base != model::replay_cache_key(sample_messages(), other));
    other = cfg;
    other.model = "different-model";
    CHECK(base != model::replay_cache_key(sample_messages(), other));

    auto msgs = sample_messages();
    msgs.back().content += "!";
    CHECK(base != model::replay_cache_key(msgs, cfg));

    // Key ignores knobs outside the (messages, model, temperature) triple.
    other = cfg;
    other.max_tokens = 9999;
    other.timeout_ms = 1;
    CHECK(base == model::replay_cache_key(sample_messages(), other));
}

TEST_CASE("record mode persists responses and replays them byte-identically") {
    TempDir dir;
    model::ModelConfig cfg;
    std::atomic<int> calls{0};
    auto counting = model::make_mock_client([&](const std::vector<model::Message>&) {
        ++calls;
        return std::string("first answer");
    });
    auto recorder = model::make_replay_client(dir.root.string(), model::ReplayMode::Record,
                                              std::move(counting));

    auto miss = recorder->complete(sample_messages(), cfg);
    CHECK(miss.cache_hit == false);
    CHECK(miss.text == "first answer");
    CHECK(calls == 1);

    auto hit = recorder->complete(sample_messages(), cfg);
    CHECK(hit.cache_hit == true);
    CHECK(hit.text == "first answer");
    CHECK(hit.latency_ms == 0);
    CHECK(calls == 1);  // second call never reached the inner client

    // A strict client over the same directory replays without any backend.
    auto strict = model::make_replay_client(dir.root.string(), model::ReplayMode::Strict);
    auto replayed = strict->complete(sample_messages(), cfg);
    CHECK(replayed.text == "first answer");
    CHECK(replayed.cache_hit == true);
    CHECK(replayed.usage.prompt_tokens == miss.usage.prompt_tokens);
    CHECK(replayed.usage.output_tokens == miss.usage.output_tokens);

    // New prompt in strict mode -> typed miss.
    auto msgs = sample_messages();
    msgs.back().content = "something never recorded";
    CHECK_THROWS_AS(strict->complete(msgs, cfg), model::ReplayMiss);
    // Record mode without an inner backend cannot fill the gap either.
    auto hollow = model::make_replay_client(dir.root.string(), model::ReplayMode::Record);
    CHECK_THROWS_AS(hollow->complete(msgs, cfg), model::ReplayMiss);
    CHECK_THROWS_AS(model::make_replay_client("", model::ReplayMode::Strict),
                    std::invalid_argument);
}

TEST_CASE("cache files carry request and response but never the API key") {
    TempDir dir;
    ::setenv("MODEL_API_KEY", "sk-super-secret-value-123", 1);
    model::ModelConfig cfg;
    auto recorder = model::make_replay_client(dir.root.string(), model::ReplayMode::Record,
                                              model::make_mock_client("clean"));
    recorder->complete(sample_messages(), cfg);

    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir.root)) {
        ++files;
        std::string blob = slurp(entry.path());
        CHECK(blob.find("sk-super-secret-value-123") == std::string::npos);
        CHECK(blob.find("MODEL_API_KEY") == std::string::npos);
        auto j = nlohmann::json::parse(blob);
        CHECK(j["response"]["text"] == "clean");
        CHECK(j["request"]["messages"].size() == 2);
    }
    CHECK(files == 1);
    ::unsetenv("MODEL_API_KEY");
}

TEST_CASE("live client refuses to start without the configured key variable") {
    ::unsetenv("OBFKIT_TEST_MISSING_KEY");
    auto live = model::make_live_client();
    model::ModelConfig cfg;
    cfg.api_key_env = "OBFKIT_TEST_MISSING_KEY";
    try {
        live->complete(sample_messages(), cfg);
        FAIL("expected a missing-key error");
    } catch (const std::runtime_error& e) {
        std::string what = e.what();
        CHECK(what.find("OBFKIT_TEST_MISSING_KEY") != std::string::npos);
    }
}

TEST_CASE("live client retries transient failures and sends bearer auth") {
    httplib::Server server;
    std::atomic<int> hits{0};
    std::string seen_auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        int n = ++hits;
        seen_auth = req.get_header_value("Authorization");
        if (n == 1) {
            res.status = 503;
            res.set_content("overloaded", "text/plain");
            return;
        }
        auto req_json = nlohmann::json::parse(req.body);
        nlohmann::json out = {
            {"choices",
             {{{"message", {{"role", "assistant"}, {"content", req_json["model"]}}}}}},
            {"usage", {{"prompt_tokens", 5}, {"completion_tokens", 1}}},
        };
        res.set_content(out.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread pump([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ::setenv("OBFKIT_TEST_LIVE_KEY", "sk-test-abc", 1);
    model::ModelConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    cfg.model = "loopback-model";
    cfg.api_key_env = "OBFKIT_TEST_LIVE_KEY";
    cfg.retry.max_attempts = 3;
    cfg.retry.backoff_ms = 1;

    auto live = model::make_live_client();
    auto resp = live->complete(sample_messages(), cfg);
    CHECK(resp.text == "loopback-model");
    CHECK(resp.usage.prompt_tokens == 5);
    CHECK(resp.usage.output_tokens == 1);
    CHECK(resp.cache_hit == false);
    CHECK(hits == 2);
    CHECK(seen_auth == "Bearer sk-test-abc");

    // Exhausting retries surfaces the last HTTP failure.
    server.Post("/v1/chat/always-503", [](const httplib::Request&, httplib::Response& res) {
        res.status = 503;
    });
    model::ModelConfig dead = cfg;
    dead.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/always-503";
    CHECK_THROWS_AS(live->complete(sample_messages(), dead), std::runtime_error);

    server.stop();
    pump.join();
    ::unsetenv("OBFKIT_TEST_LIVE_KEY");
}

TEST_CASE("code extraction prefers the largest fenced block") {
    CHECK(model::extract_code("```java\nint a;\n```") == "int a;");
    CHECK(model::extract_code("plain answer, no fences") == "plain answer, no fences");
    CHECK(model::extract_code("Sure!\n```\nclass A {}\n```\nHope that helps.") == "class A {}");

    // Two blocks, second longer -> second block.
    std::string two = "First:\n```java\nint a;\n```\nSecond:\n```java\nint a;\nint b;\n```\n";
    CHECK(model::extract_code(two) == "int a;\nint b;");
    // Two blocks, first longer -> first block.
    std::string rev = "```\nint a;\nint b;\nint c;\n```\nthen\n```\nint z;\n```";
    CHECK(model::extract_code(rev) == "int a;\nint b;\nint c;");

    // Unterminated fence runs to the end of the reply.
    CHECK(model::extract_code("```java\nint partial;\n") == "int partial;");
    // Indented fences and CRLF replies still extract.
    CHECK(model::extract_code("  ```java\r\nint w;\r\n  ```\r\n") == "int w;");
    // Language tag with trailing junk is still a fence line.
    CHECK(model::extract_code("````java copy\nint t;\n````") == "int t;");
    CHECK(model::extract_code("") == "");
    // Inline backticks are not fences.
    CHECK(model::extract_code("use `x` here") == "use `x` here");
}
