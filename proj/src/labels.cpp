// SPDX-License-Identifier: Apache-2.0
#include "madacc/labels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace madacc {

std::string_view label_name(ArgLabel label) {
  switch (label) {
    case ArgLabel::MajorClaim: return "MajorClaim";
    case ArgLabel::Claim: return "Claim";
    case ArgLabel::Premise: return "Premise";
  }
  return "MajorClaim";
}

std::string_view label_definition(ArgLabel label) {
  switch (label) {
    case ArgLabel::MajorClaim:
      return "the root node of the argument structure; it expresses the central thesis of the document";
    case ArgLabel::Claim:
      return "an intermediate node that receives support and serves as the topic of evidentiary statements";
    case ArgLabel::Premise:
      return "a leaf node that provides support (an example, evidence, or a reason) for a claim or for another premise";
  }
  return "";
}

std::optional<ArgLabel> label_from_name(std::string_view name) {
  std::string folded;
  folded.reserve(name.size());
  for (char c : name) {
    if (c == ' ' || c == '_' || c == '\t') continue;
    folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (folded == "majorclaim") return ArgLabel::MajorClaim;
  if (folded == "claim") return ArgLabel::Claim;
  if (folded == "premise") return ArgLabel::Premise;
  return std::nullopt;
}

double LabelDistribution::max_prob() const {
  return *std::max_element(probs.begin(), probs.end());
}

LabelDistribution normalize(const std::map<ArgLabel, double>& raw) {
  LabelDistribution dist;
  double sum = 0.0;
  for (ArgLabel label : kAllLabels) {
    auto it = raw.find(label);
    double v = (it != raw.end()) ? it->second : 0.0;
    if (!std::isfinite(v) || v < 0.0) v = 0.0;  // untrusted numeric input
    dist.at(label) = v;
    sum += v;
  }
  if (sum <= 0.0) {
    for (ArgLabel label : kAllLabels) dist.at(label) = 1.0 / kLabelCount;
    return dist;
  }
  for (ArgLabel label : kAllLabels) dist.at(label) /= sum;
  return dist;
}

std::pair<ArgLabel, ArgLabel> top_two(const LabelDistribution& dist) {
  std::array<ArgLabel, kLabelCount> order = kAllLabels;
  // stable sort keeps canonical order between equal probabilities
  std::stable_sort(order.begin(), order.end(), [&](ArgLabel a, ArgLabel b) {
    return dist.at(a) > dist.at(b);
  });
  return {order[0], order[1]};
}

ArgLabel argmax(const LabelDistribution& dist) {
  return top_two(dist).first;
}

}  // namespace madacc
