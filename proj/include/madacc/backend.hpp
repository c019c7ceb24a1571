// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace madacc {

enum class MessageRole { System, User, Assistant };

std::string_view role_name(MessageRole role);

struct ChatMessage {
  MessageRole role = MessageRole::User;
  std::string content;  // non-empty
};

struct GenerationParams {
  std::string model_id;
  double temperature = 0.0;  // [0, 2]
  int max_output_tokens = 1024;
  std::optional<std::int64_t> seed_hint;
};

struct TokenUsage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& other) {
    input_tokens += other.input_tokens;
    output_tokens += other.output_tokens;
    return *this;
  }
};

struct BackendResponse {
  std::string text;
  TokenUsage usage;
  std::int64_t latency_ms = 0;
};

// Uniform chat-completion surface every agent call goes through.
// Implementations must be safe for concurrent invocation.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResponse complete(const std::vector<ChatMessage>& messages,
                                   const GenerationParams& params) = 0;
};

// Time source, injectable so retry/backoff and rate limiting are testable
// without real sleeps.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() = 0;
  virtual void sleep_ms(std::int64_t ms) = 0;
};

class SystemClock : public Clock {
 public:
  std::int64_t now_ms() override;
  void sleep_ms(std::int64_t ms) override;
};

SystemClock& system_clock();

}  // namespace madacc
