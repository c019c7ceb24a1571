// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "madacc/backend.hpp"
#include "madacc/rate_limiter.hpp"

namespace madacc {

struct HttpBackendConfig {
  std::string endpoint_url;  // e.g. https://host/v1/chat/completions
  std::string api_key;       // sent as "Authorization: Bearer <key>"
  int rate_limit_rpm = 0;    // 0 = unlimited
  std::int64_t timeout_ms = 120'000;
};

// Live chat-completion client. POSTs
//   {model, messages: [{role, content}], temperature, max_tokens}
// and reads either an OpenAI-shaped or a Gemini-shaped reply. Transient
// failures (HTTP 429/5xx, timeouts) are retried with exponential backoff:
// base 1 s, factor 2, at most 5 attempts.
class HttpBackend : public Backend {
 public:
  HttpBackend(HttpBackendConfig config, Clock& clock = system_clock());

  BackendResponse complete(const std::vector<ChatMessage>& messages,
                           const GenerationParams& params) override;

  static constexpr int kMaxAttempts = 5;
  static constexpr std::int64_t kBackoffBaseMs = 1000;

 private:
  HttpBackendConfig config_;
  Clock& clock_;
  RateLimiter limiter_;
  std::string base_url_;
  std::string path_;
};

}  // namespace madacc
