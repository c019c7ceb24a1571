// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "madacc/backend.hpp"

namespace madacc {

// First matching rule wins. `role_contains` is matched case-insensitively
// against the system message; `user_contains` is a substring of the last
// user message. Empty fields match anything.
struct MockRule {
  std::string role_contains;
  std::string user_contains;
  std::string response;
};

// Parsed form of a script file, usable to construct a MockBackend in place.
struct MockScript {
  std::vector<MockRule> rules;
  std::string fallback = "UNSPECIFIED";
};

// Reads {"fallback": "...", "rules": [{"role", "match", "response"}]}.
// Throws ConfigError on unreadable JSON or a rule without a string response.
MockScript load_mock_script(const std::filesystem::path& path);

// Deterministic scripted backend: the reply is a pure function of
// (rules, messages). Captures every call for test introspection.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::vector<MockRule> rules,
                       std::string fallback = "UNSPECIFIED");

  BackendResponse complete(const std::vector<ChatMessage>& messages,
                           const GenerationParams& params) override;

  struct CapturedCall {
    std::vector<ChatMessage> messages;
    GenerationParams params;
  };

  std::vector<CapturedCall> captured() const;
  std::size_t call_count() const;
  void clear_captures();

  // JSON script: {"fallback": "...", "rules": [{"role": "...", "match": "...",
  // "response": "..."}]}
  static MockBackend from_script_file(const std::filesystem::path& path);

 private:
  std::vector<MockRule> rules_;
  std::string fallback_;
  mutable std::mutex mu_;
  std::vector<CapturedCall> captured_;
};

}  // namespace madacc
