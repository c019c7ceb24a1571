// SPDX-License-Identifier: Apache-2.0
#include "madacc/transcript.hpp"

#include <stdexcept>

namespace madacc {

std::string_view speaker_name(Speaker speaker) {
  return speaker == Speaker::Proponent ? "Proponent" : "Opponent";
}

Speaker other_speaker(Speaker speaker) {
  return speaker == Speaker::Proponent ? Speaker::Opponent : Speaker::Proponent;
}

void Transcript::append(Turn turn) {
  if (turn.index != static_cast<int>(turns_.size()) + 1)
    throw std::logic_error("turn index must be contiguous");
  if (!turns_.empty()) {
    const Turn& prev = turns_.back();
    if (prev.speaker == turn.speaker)
      throw std::logic_error("speakers must alternate");
    // defended label is fixed per speaker for the whole debate
    for (const Turn& t : turns_)
      if (t.speaker == turn.speaker && t.defended_label != turn.defended_label)
        throw std::logic_error("speaker changed defended label mid-debate");
  }
  turns_.push_back(std::move(turn));
}

}  // namespace madacc
