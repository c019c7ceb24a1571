// SPDX-License-Identifier: Apache-2.0
//
// JSON / JSONL serialization for instances, debate records, predictions and
// evaluation reports. All writers emit one object per line with keys in
// sorted order, so equal in-memory values always serialize byte-identically.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "madacc/corpus.hpp"
#include "madacc/labels.hpp"
#include "madacc/metrics.hpp"
#include "madacc/protocol.hpp"

namespace madacc {

nlohmann::json distribution_to_json(const LabelDistribution& dist);

// Accepts the three canonical label keys; absent keys read as 0. If the sum
// is off by more than 1e-6 the distribution is re-normalized.
LabelDistribution distribution_from_json(const nlohmann::json& doc);

nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& doc);

nlohmann::json record_to_json(const DebateRecord& record);
DebateRecord record_from_json(const nlohmann::json& doc);

nlohmann::json prediction_to_json(const Prediction& prediction);
Prediction prediction_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const EvalReport& report);

// One dump() per element, newline-terminated lines.
template <typename T, typename ToJson>
std::string to_jsonl(const std::vector<T>& items, ToJson to_json) {
  std::string out;
  for (const T& item : items) {
    out += to_json(item).dump();
    out += '\n';
  }
  return out;
}

// Parses every non-empty line; errors carry "<path>:<line>" context.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

std::vector<Instance> read_instances(const std::filesystem::path& path);
std::vector<DebateRecord> read_records(const std::filesystem::path& path);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

void write_instances(const std::filesystem::path& path,
                     const std::vector<Instance>& instances);
void write_records(const std::filesystem::path& path,
                   const std::vector<DebateRecord>& records);
void write_predictions(const std::filesystem::path& path,
                       const std::vector<Prediction>& predictions);

}  // namespace madacc
