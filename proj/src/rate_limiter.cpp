// SPDX-License-Identifier: Apache-2.0
#include "madacc/rate_limiter.hpp"

namespace madacc {

namespace {
constexpr std::int64_t kWindowMs = 60'000;
}

RateLimiter::RateLimiter(int rpm, Clock& clock) : rpm_(rpm), clock_(clock) {}

void RateLimiter::acquire() {
  if (rpm_ <= 0) return;
  for (;;) {
    std::int64_t wait = 0;
    {
      std::lock_guard<std::mutex> lock(mu_);
      const std::int64_t now = clock_.now_ms();
      while (!stamps_.empty() && now - stamps_.front() >= kWindowMs)
        stamps_.pop_front();
      if (static_cast<int>(stamps_.size()) < rpm_) {
        stamps_.push_back(now);
        return;
      }
      wait = stamps_.front() + kWindowMs - now;
    }
    clock_.sleep_ms(wait > 0 ? wait : 1);
  }
}

}  // namespace madacc
