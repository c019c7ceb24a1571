// SPDX-License-Identifier: Apache-2.0
#include "madacc/http_backend.hpp"

#include <httplib.h>

#include <json.hpp>

#include "madacc/errors.hpp"

namespace madacc {

namespace {

// Splits "scheme://host[:port]/path" into base and path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint URL needs a scheme: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

nlohmann::json build_request(const std::vector<ChatMessage>& messages,
                             const GenerationParams& params) {
  nlohmann::json doc;
  doc["model"] = params.model_id;
  doc["temperature"] = params.temperature;
  doc["max_tokens"] = params.max_output_tokens;
  if (params.seed_hint) doc["seed"] = *params.seed_hint;
  auto msgs = nlohmann::json::array();
  for (const ChatMessage& m : messages)
    msgs.push_back({{"role", std::string(role_name(m.role))}, {"content", m.content}});
  doc["messages"] = std::move(msgs);
  return doc;
}

// Accepts OpenAI-shaped and Gemini-shaped completion bodies.
BackendResponse parse_response_body(const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("unparseable completion body: ") + e.what());
  }

  BackendResponse resp;
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& choice = doc["choices"][0];
    if (choice.value("finish_reason", "") == "content_filter")
      throw RefusalError("completion blocked by content filter");
    if (choice.contains("message"))
      resp.text = choice["message"].value("content", "");
    const auto& usage = doc.value("usage", nlohmann::json::object());
    resp.usage.input_tokens = usage.value("prompt_tokens", std::int64_t{0});
    resp.usage.output_tokens = usage.value("completion_tokens", std::int64_t{0});
  } else if (doc.contains("candidates") && doc["candidates"].is_array() &&
             !doc["candidates"].empty()) {
    const auto& cand = doc["candidates"][0];
    for (const auto& part :
         cand.value("content", nlohmann::json::object()).value("parts", nlohmann::json::array()))
      resp.text += part.value("text", "");
    const auto& usage = doc.value("usageMetadata", nlohmann::json::object());
    resp.usage.input_tokens = usage.value("promptTokenCount", std::int64_t{0});
    resp.usage.output_tokens = usage.value("candidatesTokenCount", std::int64_t{0});
  } else if (doc.contains("text") && doc["text"].is_string()) {
    resp.text = doc["text"].get<std::string>();
  } else {
    throw TransportError("unrecognized completion body shape");
  }

  if (resp.text.empty())
    throw RefusalError("model returned an empty completion");
  return resp;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config, Clock& clock)
    : config_(std::move(config)),
      clock_(clock),
      limiter_(config_.rate_limit_rpm, clock) {
  std::tie(base_url_, path_) = split_url(config_.endpoint_url);
}

BackendResponse HttpBackend::complete(const std::vector<ChatMessage>& messages,
                                      const GenerationParams& params) {
  const std::string body = build_request(messages, params).dump();
  const std::int64_t started = clock_.now_ms();

  std::string last_failure;
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    limiter_.acquire();

    httplib::Client client(base_url_);
    client.set_connection_timeout(config_.timeout_ms / 1000,
                                  (config_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(config_.timeout_ms / 1000,
                            (config_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto result = client.Post(path_, headers, body, "application/json");

    bool transient = false;
    if (!result) {
      transient = true;
      last_failure = "connection failure: " + httplib::to_string(result.error());
    } else if (result->status == 401 || result->status == 403) {
      throw AuthError("authentication rejected (HTTP " +
                      std::to_string(result->status) + ")");
    } else if (result->status == 429 || result->status >= 500) {
      transient = true;
      last_failure = "HTTP " + std::to_string(result->status);
    } else if (result->status != 200) {
      throw TransportError("HTTP " + std::to_string(result->status) + ": " +
                           result->body);
    } else {
      BackendResponse resp = parse_response_body(result->body);
      resp.latency_ms = clock_.now_ms() - started;
      return resp;
    }

    if (transient && attempt < kMaxAttempts)
      clock_.sleep_ms(kBackoffBaseMs << (attempt - 1));  // 1s, 2s, 4s, 8s
  }
  throw TransportError("gave up after " + std::to_string(kMaxAttempts) +
                       " attempts; last failure: " + last_failure);
}

}  // namespace madacc
