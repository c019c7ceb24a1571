// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>

namespace madacc {

// The three argument component types. Enum order is the canonical order,
// used only for deterministic tie-breaks.
enum class ArgLabel : std::uint8_t { MajorClaim = 0, Claim = 1, Premise = 2 };

inline constexpr std::size_t kLabelCount = 3;
inline constexpr std::array<ArgLabel, kLabelCount> kAllLabels = {
    ArgLabel::MajorClaim, ArgLabel::Claim, ArgLabel::Premise};

std::string_view label_name(ArgLabel label);
std::string_view label_definition(ArgLabel label);

// Case-insensitive; ignores spaces and underscores, so "major claim" and
// "MAJOR_CLAIM" both resolve.
std::optional<ArgLabel> label_from_name(std::string_view name);

// Probability per label. Entries are >= 0 and sum to 1 (within 1e-9) once
// built via normalize().
struct LabelDistribution {
  std::array<double, kLabelCount> probs{};

  double at(ArgLabel label) const { return probs[static_cast<std::size_t>(label)]; }
  double& at(ArgLabel label) { return probs[static_cast<std::size_t>(label)]; }
  double max_prob() const;
};

// Missing entries count as 0; negative and non-finite values are clamped to 0.
// An all-zero input yields the uniform distribution.
LabelDistribution normalize(const std::map<ArgLabel, double>& raw);

// The two highest-probability labels, descending; ties resolved by canonical
// label order.
std::pair<ArgLabel, ArgLabel> top_two(const LabelDistribution& dist);

ArgLabel argmax(const LabelDistribution& dist);

// Labels defended by the Proponent and Opponent. Always distinct, and always
// the top-2 set of the distribution they were drawn from.
struct StancePair {
  ArgLabel proponent;
  ArgLabel opponent;
};

}  // namespace madacc
