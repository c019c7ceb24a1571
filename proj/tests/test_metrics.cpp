// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "madacc/errors.hpp"
#include "madacc/metrics.hpp"

using namespace madacc;

namespace {

ConfusionMatrix make_matrix(const std::array<std::array<std::uint64_t, 3>, 3>& cells) {
  ConfusionMatrix matrix;
  matrix.cells = cells;
  return matrix;
}

// Expands a target matrix into a shuffled prediction list with unique ids.
std::vector<Prediction> predictions_for(const ConfusionMatrix& matrix,
                                        int n_failed = 0) {
  std::vector<Prediction> predictions;
  int serial = 0;
  for (ArgLabel gold : kAllLabels)
    for (ArgLabel predicted : kAllLabels)
      for (std::uint64_t k = 0; k < matrix.at(gold, predicted); ++k) {
        Prediction p;
        p.instance_id = "p" + std::to_string(serial++);
        p.gold = gold;
        p.predicted = predicted;
        predictions.push_back(p);
      }
  for (int i = 0; i < n_failed; ++i) {
    Prediction p;
    p.instance_id = "f" + std::to_string(i);
    p.gold = ArgLabel::Claim;
    p.predicted = ArgLabel::Premise;  // ignored: failed predictions never score
    p.failed = true;
    predictions.push_back(p);
  }
  std::mt19937 rng(99);
  std::shuffle(predictions.begin(), predictions.end(), rng);
  return predictions;
}

// Definitional restatement: precision = TP/(TP+FP), recall = TP/(TP+FN),
// F1 = harmonic mean, all as percentages with 0 for empty denominators.
std::array<ClassScores, 3> oracle_scores(const ConfusionMatrix& m) {
  std::array<ClassScores, 3> scores;
  for (std::size_t i = 0; i < 3; ++i) {
    double tp = static_cast<double>(m.cells[i][i]);
    double fp = 0, fn = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == i) continue;
      fp += static_cast<double>(m.cells[j][i]);
      fn += static_cast<double>(m.cells[i][j]);
    }
    ClassScores& s = scores[i];
    s.support = m.cells[i][0] + m.cells[i][1] + m.cells[i][2];
    s.precision = (tp + fp) > 0 ? 100.0 * tp / (tp + fp) : 0.0;
    s.recall = (tp + fn) > 0 ? 100.0 * tp / (tp + fn) : 0.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
  }
  return scores;
}

// 13 scored predictions: MC row [2,1,0], Claim row [0,3,1], Premise row [1,0,5]
const ConfusionMatrix kReferenceMatrix =
    make_matrix({{{2, 1, 0}, {0, 3, 1}, {1, 0, 5}}});

}  // namespace

TEST_CASE("confusion tallies gold rows against predicted columns") {
  const auto predictions = predictions_for(kReferenceMatrix);
  const ConfusionMatrix matrix = confusion(predictions);
  for (ArgLabel gold : kAllLabels)
    for (ArgLabel predicted : kAllLabels)
      CHECK(matrix.at(gold, predicted) == kReferenceMatrix.at(gold, predicted));
  CHECK(matrix.total() == 13);
  CHECK(matrix.row_total(ArgLabel::Premise) == 6);
  CHECK(matrix.col_total(ArgLabel::Claim) == 4);
}

TEST_CASE("failed predictions never reach the matrix but are counted") {
  const auto predictions = predictions_for(kReferenceMatrix, 3);
  CHECK(confusion(predictions).total() == 13);
  const EvalReport report = evaluate(predictions);
  CHECK(report.n_scored == 13);
  CHECK(report.n_failed == 3);
}

TEST_CASE("a duplicated instance id is rejected") {
  auto predictions = predictions_for(kReferenceMatrix);
  predictions.push_back(predictions.front());
  CHECK_THROWS_AS(confusion(predictions), DuplicateInstanceId);

  // two failed entries may share an id without tripping the check
  std::vector<Prediction> failed_twice(2);
  failed_twice[0].instance_id = failed_twice[1].instance_id = "same";
  failed_twice[0].failed = failed_twice[1].failed = true;
  CHECK_NOTHROW(confusion(failed_twice));
}

TEST_CASE("evaluation without a single scored prediction is an error") {
  CHECK_THROWS_AS(evaluate({}), EmptyMatrix);
  std::vector<Prediction> all_failed(4);
  for (std::size_t i = 0; i < all_failed.size(); ++i) {
    all_failed[i].instance_id = "x" + std::to_string(i);
    all_failed[i].failed = true;
  }
  CHECK_THROWS_AS(evaluate(all_failed), EmptyMatrix);
}

TEST_CASE("per-class scores match the definitional oracle on random matrices") {
  std::mt19937 rng(20'240'817);
  std::uniform_int_distribution<std::uint64_t> cell(0, 50);
  for (int trial = 0; trial < 1500; ++trial) {
    ConfusionMatrix m;
    for (auto& row : m.cells)
      for (auto& c : row) c = cell(rng);
    const auto got = f1_scores(m);
    const auto want = oracle_scores(m);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(got[i].support == want[i].support);
      CHECK(got[i].precision == doctest::Approx(want[i].precision).epsilon(1e-9));
      CHECK(got[i].recall == doctest::Approx(want[i].recall).epsilon(1e-9));
      CHECK(got[i].f1 == doctest::Approx(want[i].f1).epsilon(1e-9));
    }
  }
}

TEST_CASE("aggregates match their definitions on random prediction sets") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::uint64_t> cell(0, 12);
  for (int trial = 0; trial < 200; ++trial) {
    ConfusionMatrix m;
    for (auto& row : m.cells)
      for (auto& c : row) c = cell(rng);
    if (m.total() == 0) continue;
    const EvalReport report = evaluate(predictions_for(m));
    const auto want = oracle_scores(m);

    const double macro = (want[0].f1 + want[1].f1 + want[2].f1) / 3.0;
    double weighted = 0.0;
    std::uint64_t diagonal = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      weighted += want[i].f1 * static_cast<double>(want[i].support);
      diagonal += m.cells[i][i];
    }
    weighted /= static_cast<double>(m.total());
    const double accuracy =
        100.0 * static_cast<double>(diagonal) / static_cast<double>(m.total());

    CHECK(report.macro_f1 == doctest::Approx(macro).epsilon(1e-9));
    CHECK(report.weighted_f1 == doctest::Approx(weighted).epsilon(1e-9));
    CHECK(report.accuracy == doctest::Approx(accuracy).epsilon(1e-9));

    // the macro mean sits inside the per-class range
    const double lo = std::min({want[0].f1, want[1].f1, want[2].f1});
    const double hi = std::max({want[0].f1, want[1].f1, want[2].f1});
    CHECK(report.macro_f1 >= lo - 1e-9);
    CHECK(report.macro_f1 <= hi + 1e-9);
    CHECK(report.weighted_f1 >= lo - 1e-9);
    CHECK(report.weighted_f1 <= hi + 1e-9);
  }
}

TEST_CASE("macro averaging of known per-class scores, rounded at format time") {
  CHECK(format_percent(macro_average(92.0, 74.5, 90.7)) == "85.7");
  CHECK(format_percent(macro_average(90.6, 57.0, 88.0)) == "78.5");
  CHECK(macro_average(92.0, 74.5, 90.7) ==
        doctest::Approx((92.0 + 74.5 + 90.7) / 3.0).epsilon(1e-12));
}

TEST_CASE("macro average is permutation invariant") {
  CHECK(macro_average(92.0, 74.5, 90.7) == macro_average(74.5, 90.7, 92.0));
  CHECK(macro_average(1.0, 2.0, 3.0) == macro_average(3.0, 2.0, 1.0));
}

TEST_CASE("scaling every cell leaves all ratio scores unchanged") {
  const EvalReport base = evaluate(predictions_for(kReferenceMatrix));
  ConfusionMatrix scaled = kReferenceMatrix;
  for (auto& row : scaled.cells)
    for (auto& c : row) c *= 7;
  const EvalReport big = evaluate(predictions_for(scaled));

  CHECK(big.macro_f1 == doctest::Approx(base.macro_f1).epsilon(1e-9));
  CHECK(big.weighted_f1 == doctest::Approx(base.weighted_f1).epsilon(1e-9));
  CHECK(big.accuracy == doctest::Approx(base.accuracy).epsilon(1e-9));
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(big.per_class[i].f1 == doctest::Approx(base.per_class[i].f1).epsilon(1e-9));
}

TEST_CASE("a perfect diagonal scores 100 across the board") {
  const EvalReport report =
      evaluate(predictions_for(make_matrix({{{4, 0, 0}, {0, 9, 0}, {0, 0, 2}}})));
  CHECK(report.macro_f1 == doctest::Approx(100.0));
  CHECK(report.weighted_f1 == doctest::Approx(100.0));
  CHECK(report.accuracy == doctest::Approx(100.0));
  for (const ClassScores& s : report.per_class) {
    CHECK(s.precision == doctest::Approx(100.0));
    CHECK(s.recall == doctest::Approx(100.0));
    CHECK(s.f1 == doctest::Approx(100.0));
  }
}

TEST_CASE("classes that never occur score zero, not NaN") {
  // everything is gold Premise and predicted Premise
  const EvalReport report =
      evaluate(predictions_for(make_matrix({{{0, 0, 0}, {0, 0, 0}, {0, 0, 8}}})));
  CHECK(report.per_class[0].f1 == 0.0);
  CHECK(report.per_class[1].f1 == 0.0);
  CHECK(report.per_class[2].f1 == doctest::Approx(100.0));
  CHECK(report.macro_f1 == doctest::Approx(100.0 / 3.0));
  CHECK(report.weighted_f1 == doctest::Approx(100.0));  // weight rests on Premise
  CHECK(std::isfinite(report.macro_f1));
}

TEST_CASE("the reference matrix reproduces its hand-computed scores") {
  const EvalReport report = evaluate(predictions_for(kReferenceMatrix, 3));
  CHECK(report.per_class[0].f1 == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
  CHECK(report.per_class[1].f1 == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(report.per_class[2].f1 == doctest::Approx(250.0 / 3.0).epsilon(1e-12));
  CHECK(report.macro_f1 == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(report.weighted_f1 == doctest::Approx(1000.0 / 13.0).epsilon(1e-12));
  CHECK(report.accuracy == doctest::Approx(1000.0 / 13.0).epsilon(1e-12));
}

TEST_CASE("percent formatting keeps one decimal and merges signed zero") {
  CHECK(format_percent(92.0) == "92.0");
  CHECK(format_percent(100.0) == "100.0");
  CHECK(format_percent(1000.0 / 13.0) == "76.9");
  CHECK(format_percent(0.0) == "0.0");
  CHECK(format_percent(-0.0) == "0.0");
  CHECK(format_percent(-0.04) == "0.0");
  CHECK(format_percent(0.04) == "0.0");
  CHECK(format_percent(66.6666666) == "66.7");
}

TEST_CASE("the formatted report carries the summary row and exclusion count") {
  EvalReport report = evaluate(predictions_for(kReferenceMatrix, 3));
  report.method = "madacc";
  const std::string text = format_report(report);

  CHECK(text.find("Method") != std::string::npos);
  CHECK(text.find("Macro-F1") != std::string::npos);
  CHECK(text.find("scored: 13") != std::string::npos);
  CHECK(text.find("failed: 3 (excluded)") != std::string::npos);
  CHECK(text.find("Confusion matrix") != std::string::npos);

  // second line is the method row with exactly six numeric cells
  std::istringstream lines(text);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::istringstream cells(row);
  std::string method;
  cells >> method;
  CHECK(method == "madacc");
  const std::array<std::string, 6> expected = {
      format_percent(report.macro_f1),      format_percent(report.weighted_f1),
      format_percent(report.per_class[0].f1), format_percent(report.per_class[1].f1),
      format_percent(report.per_class[2].f1), format_percent(report.accuracy)};
  for (const std::string& want : expected) {
    std::string cell;
    REQUIRE((cells >> cell));
    CHECK(cell == want);
  }
  std::string extra;
  CHECK_FALSE((cells >> extra));
}

TEST_CASE("zero scores render as 0.0 cells, never blanks") {
  const EvalReport report =
      evaluate(predictions_for(make_matrix({{{0, 3, 0}, {0, 4, 0}, {0, 2, 0}}})));
  const std::string text = format_report(report);
  // MajorClaim and Premise rows: precision, recall and F1 all zero
  CHECK(text.find("0.0") != std::string::npos);
  std::istringstream lines(text);
  std::string line;
  bool in_per_class = false;
  while (std::getline(lines, line)) {
    if (line.find("Per-class scores") != std::string::npos) {
      in_per_class = true;
      continue;
    }
    if (!in_per_class || line.rfind("MajorClaim", 0) != 0) continue;
    std::istringstream cells(line);
    std::string label, p, r, f1, support;
    cells >> label >> p >> r >> f1 >> support;
    CHECK(p == "0.0");
    CHECK(r == "0.0");
    CHECK(f1 == "0.0");
    CHECK(support == "3");
    return;  // found the per-class MajorClaim row
  }
  FAIL("per-class MajorClaim row not found");
}
