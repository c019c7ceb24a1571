// SPDX-License-Identifier: Apache-2.0
#include "madacc/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>

#include "madacc/errors.hpp"

namespace madacc {

std::uint64_t ConfusionMatrix::row_total(ArgLabel gold) const {
  std::uint64_t sum = 0;
  for (std::uint64_t cell : cells[static_cast<std::size_t>(gold)]) sum += cell;
  return sum;
}

std::uint64_t ConfusionMatrix::col_total(ArgLabel predicted) const {
  std::uint64_t sum = 0;
  for (const auto& row : cells) sum += row[static_cast<std::size_t>(predicted)];
  return sum;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (ArgLabel label : kAllLabels) sum += row_total(label);
  return sum;
}

ConfusionMatrix confusion(const std::vector<Prediction>& predictions) {
  ConfusionMatrix matrix;
  std::set<std::string> seen;
  for (const Prediction& p : predictions) {
    if (p.failed) continue;
    if (!seen.insert(p.instance_id).second)
      throw DuplicateInstanceId("duplicate prediction for instance '" +
                                p.instance_id + "'");
    ++matrix.cells[static_cast<std::size_t>(p.gold)]
                  [static_cast<std::size_t>(p.predicted)];
  }
  return matrix;
}

namespace {

double percent_ratio(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0) return 0.0;
  return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

std::array<ClassScores, kLabelCount> f1_scores(const ConfusionMatrix& matrix) {
  std::array<ClassScores, kLabelCount> scores;
  for (ArgLabel label : kAllLabels) {
    const std::size_t i = static_cast<std::size_t>(label);
    const std::uint64_t tp = matrix.at(label, label);
    ClassScores& s = scores[i];
    s.support = matrix.row_total(label);
    s.precision = percent_ratio(tp, matrix.col_total(label));
    s.recall = percent_ratio(tp, s.support);
    s.f1 = (s.precision + s.recall > 0.0)
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
  }
  return scores;
}

double macro_average(double a, double b, double c) { return (a + b + c) / 3.0; }

EvalReport evaluate(const std::vector<Prediction>& predictions) {
  EvalReport report;
  report.matrix = confusion(predictions);
  report.n_scored = report.matrix.total();
  for (const Prediction& p : predictions)
    if (p.failed) ++report.n_failed;
  if (report.n_scored == 0)
    throw EmptyMatrix("no scorable predictions (all failed or none given)");
  report.per_class = f1_scores(report.matrix);
  report.macro_f1 = macro_average(report.per_class[0].f1, report.per_class[1].f1,
                                  report.per_class[2].f1);
  std::uint64_t correct = 0;
  double weighted = 0.0;
  for (ArgLabel label : kAllLabels) {
    const std::size_t i = static_cast<std::size_t>(label);
    correct += report.matrix.at(label, label);
    weighted += report.per_class[i].f1 *
                static_cast<double>(report.per_class[i].support);
  }
  report.weighted_f1 = weighted / static_cast<double>(report.n_scored);
  report.accuracy = percent_ratio(correct, report.n_scored);
  return report;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  // normalize "-0.0" so zero renders the same regardless of sign
  if (std::strcmp(buf, "-0.0") == 0) return "0.0";
  return buf;
}

std::string format_report(const EvalReport& report) {
  std::string out;
  char line[160];

  std::snprintf(line, sizeof(line), "%-16s %9s %9s %11s %9s %9s %9s\n", "Method",
                "Macro-F1", "W-F1", "MajorClaim", "Claim", "Premise", "Acc");
  out += line;
  std::snprintf(line, sizeof(line), "%-16s %9s %9s %11s %9s %9s %9s\n",
                report.method.c_str(), format_percent(report.macro_f1).c_str(),
                format_percent(report.weighted_f1).c_str(),
                format_percent(report.per_class[0].f1).c_str(),
                format_percent(report.per_class[1].f1).c_str(),
                format_percent(report.per_class[2].f1).c_str(),
                format_percent(report.accuracy).c_str());
  out += line;

  out += "\nConfusion matrix (rows: gold, cols: predicted)\n";
  std::snprintf(line, sizeof(line), "%-12s %10s %10s %10s\n", "",
                label_name(ArgLabel::MajorClaim).data(),
                label_name(ArgLabel::Claim).data(),
                label_name(ArgLabel::Premise).data());
  out += line;
  for (ArgLabel gold : kAllLabels) {
    std::snprintf(line, sizeof(line), "%-12s %10llu %10llu %10llu\n",
                  label_name(gold).data(),
                  static_cast<unsigned long long>(report.matrix.at(gold, ArgLabel::MajorClaim)),
                  static_cast<unsigned long long>(report.matrix.at(gold, ArgLabel::Claim)),
                  static_cast<unsigned long long>(report.matrix.at(gold, ArgLabel::Premise)));
    out += line;
  }

  out += "\nPer-class scores\n";
  std::snprintf(line, sizeof(line), "%-12s %10s %10s %10s %10s\n", "",
                "precision", "recall", "F1", "support");
  out += line;
  for (ArgLabel label : kAllLabels) {
    const ClassScores& s = report.per_class[static_cast<std::size_t>(label)];
    std::snprintf(line, sizeof(line), "%-12s %10s %10s %10s %10llu\n",
                  label_name(label).data(), format_percent(s.precision).c_str(),
                  format_percent(s.recall).c_str(), format_percent(s.f1).c_str(),
                  static_cast<unsigned long long>(s.support));
    out += line;
  }

  out += '\n';
  out += "Macro F1:    " + format_percent(report.macro_f1) + "\n";
  out += "Weighted F1: " + format_percent(report.weighted_f1) + "\n";
  out += "Accuracy:    " + format_percent(report.accuracy) + "\n";
  out += "scored: " + std::to_string(report.n_scored) + "\n";
  out += "failed: " + std::to_string(report.n_failed) + " (excluded)\n";
  return out;
}

}  // namespace madacc
