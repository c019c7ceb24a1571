// SPDX-License-Identifier: Apache-2.0
#include "madacc/mock_backend.hpp"

#include <json.hpp>

#include "madacc/errors.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

MockBackend::MockBackend(std::vector<MockRule> rules, std::string fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

BackendResponse MockBackend::complete(const std::vector<ChatMessage>& messages,
                                      const GenerationParams& params) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    captured_.push_back({messages, params});
  }

  std::string system_text;
  std::string last_user;
  std::int64_t input_chars = 0;
  for (const ChatMessage& m : messages) {
    input_chars += static_cast<std::int64_t>(m.content.size());
    if (m.role == MessageRole::System) system_text += m.content;
    if (m.role == MessageRole::User) last_user = m.content;
  }

  const std::string* reply = &fallback_;
  for (const MockRule& rule : rules_) {
    const bool role_ok =
        rule.role_contains.empty() || contains_ci(system_text, rule.role_contains);
    const bool user_ok =
        rule.user_contains.empty() || last_user.find(rule.user_contains) != std::string::npos;
    if (role_ok && user_ok) {
      reply = &rule.response;
      break;
    }
  }

  BackendResponse resp;
  resp.text = *reply;
  // deterministic 4-chars-per-token estimate
  resp.usage.input_tokens = input_chars / 4;
  resp.usage.output_tokens = static_cast<std::int64_t>(reply->size()) / 4;
  resp.latency_ms = 0;
  return resp;
}

std::vector<MockBackend::CapturedCall> MockBackend::captured() const {
  std::lock_guard<std::mutex> lock(mu_);
  return captured_;
}

std::size_t MockBackend::call_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return captured_.size();
}

void MockBackend::clear_captures() {
  std::lock_guard<std::mutex> lock(mu_);
  captured_.clear();
}

MockScript load_mock_script(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("mock script " + path.string() + ": " + e.what());
  }
  MockScript script;
  for (const auto& r : doc.value("rules", nlohmann::json::array())) {
    MockRule rule;
    rule.role_contains = r.value("role", "");
    rule.user_contains = r.value("match", "");
    if (!r.contains("response") || !r["response"].is_string())
      throw ConfigError("mock script " + path.string() + ": rule without string response");
    rule.response = r["response"].get<std::string>();
    script.rules.push_back(std::move(rule));
  }
  script.fallback = doc.value("fallback", "UNSPECIFIED");
  return script;
}

MockBackend MockBackend::from_script_file(const std::filesystem::path& path) {
  MockScript script = load_mock_script(path);
  return MockBackend(std::move(script.rules), std::move(script.fallback));
}

}  // namespace madacc
