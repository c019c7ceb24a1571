// SPDX-License-Identifier: Apache-2.0
#include "madacc/backend.hpp"

#include <chrono>
#include <thread>

namespace madacc {

std::string_view role_name(MessageRole role) {
  switch (role) {
    case MessageRole::System: return "system";
    case MessageRole::User: return "user";
    case MessageRole::Assistant: return "assistant";
  }
  return "user";
}

std::int64_t SystemClock::now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

void SystemClock::sleep_ms(std::int64_t ms) {
  if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

SystemClock& system_clock() {
  static SystemClock clock;
  return clock;
}

}  // namespace madacc
