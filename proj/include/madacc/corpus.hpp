// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "madacc/labels.hpp"

namespace madacc {

inline constexpr std::string_view kTargetOpen = "<TARGET>";
inline constexpr std::string_view kTargetClose = "</TARGET>";
inline constexpr std::string_view kArgOpen = "<ARG>";
inline constexpr std::string_view kArgClose = "</ARG>";

// One annotated span. Offsets are Unicode codepoint indices into the essay
// text, end exclusive.
struct ArgComponent {
  std::string component_id;
  ArgLabel gold_label = ArgLabel::MajorClaim;
  std::size_t span_start = 0;
  std::size_t span_end = 0;
  std::string surface_text;
};

// Parsed essay. Components are sorted by span start and never overlap.
struct Essay {
  std::string essay_id;
  std::string text;
  std::vector<ArgComponent> components;
};

// Prompt-ready input: the essay text with the target span wrapped in
// <TARGET>...</TARGET> and every other component in <ARG>...</ARG>.
// The gold label is carried out-of-band only.
struct Instance {
  std::string instance_id;  // "<essay_id>:<component_id>"
  std::string essay_id;
  std::string component_id;
  std::string masked_text;
  std::string target_text;
  ArgLabel gold_label = ArgLabel::MajorClaim;
};

// How much context goes into masked_text.
enum class ContextMode { FullEssay, Paragraph };

// Parses a brat-style .ann alongside its .txt content. Component lines look
// like "T1\tClaim 0 14\tCars are good."; relation and attribute lines are
// ignored. The surface field must match the sliced text after collapsing
// whitespace runs.
Essay parse_essay(const std::string& essay_id, const std::string& text_content,
                  const std::string& ann_content);

std::vector<Instance> make_instances(const Essay& essay,
                                     ContextMode mode = ContextMode::FullEssay);

// Reads "<id>.txt" and "<id>.ann" from corpus_dir for each id listed in
// split_file (one per line), in listed order.
std::vector<Essay> load_split(const std::filesystem::path& corpus_dir,
                              const std::filesystem::path& split_file);

// Removes all TARGET/ARG tags. Inverse of the masking step.
std::string strip_tags(std::string masked_text);

}  // namespace madacc
