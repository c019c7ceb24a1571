// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "madacc/labels.hpp"

namespace madacc {

enum class Speaker { Proponent, Opponent };

std::string_view speaker_name(Speaker speaker);
Speaker other_speaker(Speaker speaker);

struct Turn {
  int index = 0;  // 1-based
  Speaker speaker = Speaker::Proponent;
  ArgLabel defended_label = ArgLabel::MajorClaim;
  std::string content;
};

// Ordered shared state of one debate. append() enforces contiguous 1-based
// indices, strict speaker alternation, and a fixed defended label per speaker.
class Transcript {
 public:
  void append(Turn turn);

  const std::vector<Turn>& turns() const { return turns_; }
  bool empty() const { return turns_.empty(); }
  std::size_t size() const { return turns_.size(); }
  bool complete(int scheduled_turns) const {
    return static_cast<int>(turns_.size()) == scheduled_turns;
  }

 private:
  std::vector<Turn> turns_;
};

}  // namespace madacc
