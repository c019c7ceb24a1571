// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <mutex>

#include "madacc/backend.hpp"

namespace madacc {

// Sliding-window limiter: at most `rpm` acquisitions within any 60 s window.
// acquire() blocks (through the clock) until a slot frees. rpm <= 0 disables
// the limiter.
class RateLimiter {
 public:
  RateLimiter(int rpm, Clock& clock);

  void acquire();

 private:
  int rpm_;
  Clock& clock_;
  std::mutex mu_;
  std::deque<std::int64_t> stamps_;
};

}  // namespace madacc
