// SPDX-License-Identifier: Apache-2.0
//
// Evaluation for 3-way argument-component prediction: confusion matrix,
// per-class precision/recall/F1, and macro / weighted aggregates.
//
// All scores are percentages carried at full double precision; rounding to
// one decimal happens only when a report is formatted.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "madacc/labels.hpp"

namespace madacc {

struct Prediction {
  std::string instance_id;
  ArgLabel predicted = ArgLabel::MajorClaim;
  ArgLabel gold = ArgLabel::MajorClaim;
  bool failed = false;  // excluded from the matrix, counted in the report
};

// rows: gold label, cols: predicted label, both in canonical order
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kLabelCount>, kLabelCount> cells{};

  std::uint64_t at(ArgLabel gold, ArgLabel predicted) const {
    return cells[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
  }
  std::uint64_t row_total(ArgLabel gold) const;  // gold support
  std::uint64_t col_total(ArgLabel predicted) const;
  std::uint64_t total() const;
};

struct ClassScores {
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  double f1 = 0.0;         // percent
  std::uint64_t support = 0;
};

struct EvalReport {
  std::string method = "run";  // row label in the formatted table
  ConfusionMatrix matrix;
  std::array<ClassScores, kLabelCount> per_class;
  double macro_f1 = 0.0;     // unweighted mean over classes, percent
  double weighted_f1 = 0.0;  // support-weighted mean, percent
  double accuracy = 0.0;     // percent
  std::uint64_t n_scored = 0;
  std::uint64_t n_failed = 0;
};

// Throws DuplicateInstanceId if two non-failed predictions share an id.
ConfusionMatrix confusion(const std::vector<Prediction>& predictions);

// Per-class scores from a matrix. Zero denominators yield 0, not NaN.
std::array<ClassScores, kLabelCount> f1_scores(const ConfusionMatrix& matrix);

// Unweighted mean of the three per-class values (percent in, percent out).
double macro_average(double a, double b, double c);

// Full report. Throws EmptyMatrix when no prediction survives the failed filter.
EvalReport evaluate(const std::vector<Prediction>& predictions);

// Fixed-width text table: confusion matrix, per-class rows, aggregate lines.
// The only place scores are rounded (one decimal, half away from zero).
std::string format_report(const EvalReport& report);

// "92.0" style rendering used by format_report; exposed for tests.
std::string format_percent(double value);

}  // namespace madacc
