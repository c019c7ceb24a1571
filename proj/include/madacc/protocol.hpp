// SPDX-License-Identifier: Apache-2.0
//
// The debate orchestrator. One instance flows through:
//
//   Manager (distribution) -> skip check -> stance assignment
//   -> 2*rounds alternating debater turns (Proponent opens)
//   -> Judge verdict over the complete transcript.
//
// Per-instance randomness is derived from (rng_seed, instance_id) alone so
// results do not depend on scheduling or parallelism.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "madacc/agents.hpp"
#include "madacc/backend.hpp"
#include "madacc/corpus.hpp"
#include "madacc/labels.hpp"
#include "madacc/metrics.hpp"
#include "madacc/transcript.hpp"

namespace madacc {

struct DebateConfig {
  int rounds = 2;               // scheduled turns = 2 * rounds
  double skip_threshold = 1.0;  // 1.0 = never skip (debate everything)
  GenerationParams manager_params{.temperature = 0.0};
  GenerationParams debater_params{.temperature = 0.7};
  GenerationParams judge_params{.temperature = 0.0};
  std::uint64_t rng_seed = 0;
  int max_parse_attempts = 3;  // total attempts per Manager/Judge/baseline call

  int scheduled_turns() const { return 2 * rounds; }
};

struct DebateRecord {
  std::string instance_id;
  std::string essay_id;
  ArgLabel gold_label = ArgLabel::MajorClaim;
  std::string target_excerpt;

  bool has_distribution = false;  // Manager phase completed
  LabelDistribution manager_distribution;
  StancePair stance;  // valid iff has_distribution
  bool coin = false;  // true = Proponent defends the top-1 label

  bool skipped = false;
  Transcript transcript;

  bool has_verdict = false;
  ArgLabel verdict_label = ArgLabel::MajorClaim;
  std::string verdict_rationale;

  bool failed = false;
  std::string failure_reason;  // empty unless failed

  TokenUsage usage;
  std::string manager_model;
  std::string debater_model;
  std::string judge_model;

  // Judge chose a label neither debater defended (full label set is allowed).
  bool verdict_outside_pair() const {
    return has_verdict && !skipped && has_distribution &&
           verdict_label != stance.proponent && verdict_label != stance.opponent;
  }
};

// Seed for one instance: FNV-1a over the little-endian global seed bytes
// followed by the instance id bytes.
std::uint64_t instance_seed(std::uint64_t global_seed, const std::string& instance_id);

// Fair coin over the top-2 labels. coin=true puts the top-1 label with the
// Proponent; both orderings have probability 1/2 under the seeded rng.
std::pair<StancePair, bool> assign_stances(const LabelDistribution& dist,
                                           std::mt19937_64& rng);

// True iff the debate should be bypassed and the argmax accepted. tau = 1.0
// always debates; otherwise skip when max probability >= tau.
bool should_skip(const LabelDistribution& dist, double tau);

// Runs one full debate. Parse budget exhaustion and per-call backend faults
// produce a record with failed=true; AuthError and ConfigError propagate.
DebateRecord run_debate(const Instance& instance, const DebateConfig& config,
                        Backend& backend, const TemplateSet& templates);

// Batch driver. Output order matches input order regardless of scheduling.
// on_record (optional) fires once per finished instance, in completion order,
// serialized by an internal mutex.
std::vector<DebateRecord> run_pipeline(
    const std::vector<Instance>& instances, const DebateConfig& config,
    Backend& backend, const TemplateSet& templates, int parallelism,
    const std::function<void(const DebateRecord&)>& on_record = {});

// Single-agent baselines: one call per instance, label read with the
// "LABEL: <name>" sentinel parser under the same parse budget.
std::vector<Prediction> run_baseline(
    const std::vector<Instance>& instances, BaselineKind kind,
    const DebateConfig& config, Backend& backend, const TemplateSet& templates,
    int parallelism, TokenUsage* usage_total = nullptr,
    const std::function<void(const Prediction&)>& on_prediction = {});

Prediction prediction_from_record(const DebateRecord& record);

}  // namespace madacc
