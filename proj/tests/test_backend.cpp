// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <httplib.h>

#include <json.hpp>

#include <atomic>
#include <regex>
#include <thread>

#include "madacc/cache.hpp"
#include "madacc/errors.hpp"
#include "madacc/http_backend.hpp"
#include "madacc/mock_backend.hpp"
#include "madacc/rate_limiter.hpp"
#include "madacc/text_util.hpp"
#include "test_support.hpp"

using namespace madacc;
using testsupport::TempDir;
using testsupport::VirtualClock;

namespace {

std::vector<ChatMessage> sample_messages() {
  return {{MessageRole::System, "You are the manager agent."},
          {MessageRole::User, "first user message"},
          {MessageRole::User, "classify the marked span"}};
}

GenerationParams sample_params() {
  GenerationParams params;
  params.model_id = "test-model";
  params.temperature = 0.7;
  params.max_output_tokens = 256;
  return params;
}

// Local HTTP endpoint replaying a scripted (status, body) sequence; requests
// past the end of the script repeat the last entry.
class ScriptedServer {
 public:
  explicit ScriptedServer(std::vector<std::pair<int, std::string>> script)
      : script_(std::move(script)) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   const std::size_t n = hits_.fetch_add(1);
                   {
                     std::lock_guard<std::mutex> lock(mu_);
                     bodies_.push_back(req.body);
                     auth_headers_.push_back(req.get_header_value("Authorization"));
                   }
                   const auto& entry =
                       script_[n < script_.size() ? n : script_.size() - 1];
                   res.status = entry.first;
                   res.set_content(entry.second, "application/json");
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~ScriptedServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }

  std::size_t hits() const { return hits_.load(); }
  std::vector<std::string> bodies() const {
    std::lock_guard<std::mutex> lock(mu_);
    return bodies_;
  }
  std::vector<std::string> auth_headers() const {
    std::lock_guard<std::mutex> lock(mu_);
    return auth_headers_;
  }

 private:
  std::vector<std::pair<int, std::string>> script_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> hits_{0};
  mutable std::mutex mu_;
  std::vector<std::string> bodies_;
  std::vector<std::string> auth_headers_;
};

HttpBackendConfig test_http_config(const std::string& url) {
  HttpBackendConfig config;
  config.endpoint_url = url;
  config.api_key = "test-key";
  config.timeout_ms = 5000;
  return config;
}

std::string openai_body(const std::string& content) {
  nlohmann::json doc;
  doc["choices"] = {{{"message", {{"role", "assistant"}, {"content", content}}},
                     {"finish_reason", "stop"}}};
  doc["usage"] = {{"prompt_tokens", 120}, {"completion_tokens", 45}};
  return doc.dump();
}

}  // namespace

TEST_CASE("mock backend: first matching rule wins") {
  MockBackend backend({{"manager", "", "from manager rule"},
                       {"", "marked span", "from user rule"},
                       {"", "", "catch-all"}},
                      "fallback text");
  CHECK(backend.complete(sample_messages(), sample_params()).text ==
        "from manager rule");
  // no system match: second rule fires on the last user message
  std::vector<ChatMessage> no_system = {{MessageRole::User, "classify the marked span"}};
  CHECK(backend.complete(no_system, sample_params()).text == "from user rule");
}

TEST_CASE("mock backend: role match is case-insensitive, user match is not") {
  MockBackend backend({{"MANAGER", "", "role hit"}}, "fallback");
  CHECK(backend.complete(sample_messages(), sample_params()).text == "role hit");

  MockBackend exact({{"", "Marked Span", "user hit"}}, "fallback");
  CHECK(exact.complete(sample_messages(), sample_params()).text == "fallback");
}

TEST_CASE("mock backend: user rules see only the last user message") {
  MockBackend backend({{"", "first user message", "matched earlier message"}},
                      "fallback");
  CHECK(backend.complete(sample_messages(), sample_params()).text == "fallback");
}

TEST_CASE("mock backend: no rule matches yields the fallback") {
  MockBackend backend({{"judge", "", "never"}}, "the fallback");
  CHECK(backend.complete(sample_messages(), sample_params()).text == "the fallback");
}

TEST_CASE("mock backend captures calls and estimates usage") {
  MockBackend backend({}, "xxxxxxxx");  // 8 chars -> 2 output tokens
  const auto messages = sample_messages();
  std::int64_t chars = 0;
  for (const auto& m : messages) chars += static_cast<std::int64_t>(m.content.size());

  const auto resp = backend.complete(messages, sample_params());
  CHECK(resp.usage.input_tokens == chars / 4);
  CHECK(resp.usage.output_tokens == 2);

  REQUIRE(backend.call_count() == 1);
  const auto captured = backend.captured();
  REQUIRE(captured.size() == 1);
  CHECK(captured[0].messages.size() == messages.size());
  CHECK(captured[0].params.model_id == "test-model");
  CHECK(captured[0].params.temperature == doctest::Approx(0.7));

  backend.clear_captures();
  CHECK(backend.call_count() == 0);
}

TEST_CASE("mock backend loads the script file format") {
  TempDir dir;
  const auto path = dir / "script.json";
  write_text_file(path, R"({
    "fallback": "nothing matched",
    "rules": [
      {"role": "manager", "response": "{\"Premise\": 1.0}"},
      {"match": "marked span", "response": "user matched"}
    ]
  })");
  MockBackend backend = MockBackend::from_script_file(path);
  CHECK(backend.complete(sample_messages(), sample_params()).text ==
        R"({"Premise": 1.0})");
  std::vector<ChatMessage> other = {{MessageRole::User, "nothing relevant"}};
  CHECK(backend.complete(other, sample_params()).text == "nothing matched");
}

TEST_CASE("mock backend rejects broken script files") {
  TempDir dir;
  const auto bad_json = dir / "bad.json";
  write_text_file(bad_json, "{not json");
  CHECK_THROWS_AS(MockBackend::from_script_file(bad_json), ConfigError);

  const auto no_response = dir / "norsp.json";
  write_text_file(no_response, R"({"rules": [{"role": "manager"}]})");
  CHECK_THROWS_WITH_AS(MockBackend::from_script_file(no_response),
                       doctest::Contains("response"), ConfigError);
}

TEST_CASE("rate limiter blocks the rpm+1-th call for the window remainder") {
  VirtualClock clock;
  RateLimiter limiter(2, clock);
  limiter.acquire();
  clock.advance(10'000);
  limiter.acquire();
  CHECK(clock.slept_total() == 0);
  // window [0, 60000) holds 2 stamps; the next slot frees at t=60000
  limiter.acquire();
  CHECK(clock.slept_total() == 50'000);
  CHECK(clock.now_ms() == 60'000);
}

TEST_CASE("rate limiter with rpm=0 never sleeps") {
  VirtualClock clock;
  RateLimiter limiter(0, clock);
  for (int i = 0; i < 1000; ++i) limiter.acquire();
  CHECK(clock.slept_total() == 0);
}

TEST_CASE("rate limiter admits calls spaced past the window immediately") {
  VirtualClock clock;
  RateLimiter limiter(1, clock);
  limiter.acquire();
  clock.advance(60'000);
  limiter.acquire();
  CHECK(clock.slept_total() == 0);
}

TEST_CASE("response cache stores and retrieves by key material") {
  TempDir dir;
  ResponseCache cache(dir.path());
  const std::string key =
      ResponseCache::key_material(sample_messages(), sample_params());

  CHECK_FALSE(cache.lookup(key).has_value());

  BackendResponse resp;
  resp.text = "cached reply";
  resp.usage.input_tokens = 10;
  resp.usage.output_tokens = 3;
  cache.store(key, resp);

  const auto hit = cache.lookup(key);
  REQUIRE(hit.has_value());
  CHECK(hit->text == "cached reply");
  CHECK(hit->usage.input_tokens == 10);
  CHECK(hit->usage.output_tokens == 3);

  // entries are 16-hex-digit .json files; no leftover temp files
  std::size_t entries = 0;
  const std::regex name_re("^[0-9a-f]{16}\\.json$");
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    CHECK(std::regex_match(e.path().filename().string(), name_re));
    ++entries;
  }
  CHECK(entries == 1);
}

TEST_CASE("cache key material separates params but ignores seed hints") {
  const auto messages = sample_messages();
  auto params = sample_params();
  const std::string base = ResponseCache::key_material(messages, params);

  auto hotter = params;
  hotter.temperature = 0.9;
  CHECK(ResponseCache::key_material(messages, hotter) != base);

  auto other_model = params;
  other_model.model_id = "other";
  CHECK(ResponseCache::key_material(messages, other_model) != base);

  auto seeded = params;
  seeded.seed_hint = 1234;
  CHECK(ResponseCache::key_material(messages, seeded) == base);
}

TEST_CASE("a hash collision reads as a miss, not a foreign response") {
  TempDir dir;
  ResponseCache cache(dir.path());
  const std::string key =
      ResponseCache::key_material(sample_messages(), sample_params());
  BackendResponse resp;
  resp.text = "mine";
  cache.store(key, resp);

  // rewrite the stored key material, simulating another request that hashed
  // to the same file
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    auto doc = nlohmann::json::parse(read_text_file(e.path()));
    doc["key"] = "unrelated key material";
    write_text_file(e.path(), doc.dump());
  }
  CHECK_FALSE(cache.lookup(key).has_value());
}

TEST_CASE("a corrupted cache entry is an error, not a silent miss") {
  TempDir dir;
  ResponseCache cache(dir.path());
  const std::string key =
      ResponseCache::key_material(sample_messages(), sample_params());
  BackendResponse resp;
  resp.text = "fine";
  cache.store(key, resp);

  for (const auto& e : std::filesystem::directory_iterator(dir.path()))
    write_text_file(e.path(), "{torn write");
  CHECK_THROWS_WITH_AS(cache.lookup(key), doctest::Contains("corrupted"),
                       CacheError);

  for (const auto& e : std::filesystem::directory_iterator(dir.path()))
    write_text_file(e.path(), R"({"some": "object"})");
  CHECK_THROWS_WITH_AS(cache.lookup(key), doctest::Contains("corrupted"),
                       CacheError);
}

TEST_CASE("cached backend calls the inner backend once per distinct request") {
  TempDir dir;
  MockBackend inner({}, "inner reply");
  CachedBackend cached(inner, dir.path());

  const auto first = cached.complete(sample_messages(), sample_params());
  CHECK(first.text == "inner reply");
  CHECK(inner.call_count() == 1);

  const auto second = cached.complete(sample_messages(), sample_params());
  CHECK(second.text == "inner reply");
  CHECK(inner.call_count() == 1);  // served from disk

  auto hotter = sample_params();
  hotter.temperature = 0.9;
  cached.complete(sample_messages(), hotter);
  CHECK(inner.call_count() == 2);

  // a fresh cache over the same directory still hits
  CachedBackend reopened(inner, dir.path());
  CHECK(reopened.complete(sample_messages(), sample_params()).text == "inner reply");
  CHECK(inner.call_count() == 2);
}

TEST_CASE("http backend parses an OpenAI-shaped completion") {
  ScriptedServer server({{200, openai_body("the completion text")}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(server.url()), clock);

  const auto resp = backend.complete(sample_messages(), sample_params());
  CHECK(resp.text == "the completion text");
  CHECK(resp.usage.input_tokens == 120);
  CHECK(resp.usage.output_tokens == 45);
  CHECK(server.hits() == 1);

  REQUIRE(server.auth_headers().size() == 1);
  CHECK(server.auth_headers()[0] == "Bearer test-key");

  const auto sent = nlohmann::json::parse(server.bodies()[0]);
  CHECK(sent["model"] == "test-model");
  CHECK(sent["temperature"].get<double>() == doctest::Approx(0.7));
  CHECK(sent["max_tokens"] == 256);
  REQUIRE(sent["messages"].size() == 3);
  CHECK(sent["messages"][0]["role"] == "system");
  CHECK(sent["messages"][2]["content"] == "classify the marked span");
}

TEST_CASE("http backend parses a Gemini-shaped completion") {
  nlohmann::json body;
  body["candidates"] = {{{"content", {{"parts", {{{"text", "part one, "}},
                                                 {{"text", "part two"}}}}}}}};
  body["usageMetadata"] = {{"promptTokenCount", 80}, {"candidatesTokenCount", 20}};
  ScriptedServer server({{200, body.dump()}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(server.url()), clock);

  const auto resp = backend.complete(sample_messages(), sample_params());
  CHECK(resp.text == "part one, part two");
  CHECK(resp.usage.input_tokens == 80);
  CHECK(resp.usage.output_tokens == 20);
}

TEST_CASE("http backend accepts a bare text completion body") {
  ScriptedServer server({{200, R"({"text": "plain reply"})"}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(server.url()), clock);
  CHECK(backend.complete(sample_messages(), sample_params()).text == "plain reply");
}

TEST_CASE("http backend retries transient failures with exponential backoff") {
  ScriptedServer server({{500, "boom"},
                         {429, "slow down"},
                         {200, openai_body("eventually fine")}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(server.url()), clock);

  const auto resp = backend.complete(sample_messages(), sample_params());
  CHECK(resp.text == "eventually fine");
  CHECK(server.hits() == 3);
  REQUIRE(clock.sleeps().size() == 2);
  CHECK(clock.sleeps()[0] == 1000);
  CHECK(clock.sleeps()[1] == 2000);
}

TEST_CASE("http backend gives up after five transient failures") {
  ScriptedServer server({{500, "boom"}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(server.url()), clock);

  CHECK_THROWS_WITH_AS(backend.complete(sample_messages(), sample_params()),
                       doctest::Contains("5 attempts"), TransportError);
  CHECK(server.hits() == 5);
  // 1s, 2s, 4s, 8s; no sleep after the final attempt
  CHECK(clock.slept_total() == 15'000);
}

TEST_CASE("http backend treats auth rejections as fatal, without retry") {
  for (int status : {401, 403}) {
    ScriptedServer server({{status, "no"}});
    VirtualClock clock;
    HttpBackend backend(test_http_config(server.url()), clock);
    CHECK_THROWS_AS(backend.complete(sample_messages(), sample_params()), AuthError);
    CHECK(server.hits() == 1);
    CHECK(clock.slept_total() == 0);
  }
}

TEST_CASE("http backend treats other client errors as immediate transport errors") {
  ScriptedServer server({{404, "no such route"}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(server.url()), clock);
  CHECK_THROWS_WITH_AS(backend.complete(sample_messages(), sample_params()),
                       doctest::Contains("404"), TransportError);
  CHECK(server.hits() == 1);
}

TEST_CASE("http backend surfaces refusals distinctly") {
  nlohmann::json filtered;
  filtered["choices"] = {{{"message", {{"content", "redacted"}}},
                          {"finish_reason", "content_filter"}}};
  ScriptedServer refusing({{200, filtered.dump()}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(refusing.url()), clock);
  CHECK_THROWS_AS(backend.complete(sample_messages(), sample_params()), RefusalError);

  ScriptedServer empty({{200, openai_body("")}});
  VirtualClock clock2;
  HttpBackend on_empty(test_http_config(empty.url()), clock2);
  CHECK_THROWS_AS(on_empty.complete(sample_messages(), sample_params()), RefusalError);
}

TEST_CASE("http backend rejects unrecognized completion bodies") {
  ScriptedServer server({{200, R"({"surprise": true})"}});
  VirtualClock clock;
  HttpBackend backend(test_http_config(server.url()), clock);
  CHECK_THROWS_AS(backend.complete(sample_messages(), sample_params()),
                  TransportError);

  ScriptedServer garbled({{200, "not json at all"}});
  VirtualClock clock2;
  HttpBackend on_garbled(test_http_config(garbled.url()), clock2);
  CHECK_THROWS_AS(on_garbled.complete(sample_messages(), sample_params()),
                  TransportError);
}

TEST_CASE("http backend requires a scheme in the endpoint URL") {
  VirtualClock clock;
  CHECK_THROWS_AS(HttpBackend(test_http_config("localhost/api"), clock),
                  ConfigError);
}
