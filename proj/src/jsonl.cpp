// SPDX-License-Identifier: Apache-2.0
#include "madacc/jsonl.hpp"

#include <cmath>

#include "madacc/errors.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

namespace {

ArgLabel label_from_json(const nlohmann::json& value, const char* field) {
  if (!value.is_string())
    throw Error(std::string(field) + " must be a string label");
  const auto label = label_from_name(value.get<std::string>());
  if (!label)
    throw Error(std::string(field) + " names an unknown label: '" +
                value.get<std::string>() + "'");
  return *label;
}

Speaker speaker_from_json(const nlohmann::json& value) {
  const std::string name = value.get<std::string>();
  if (name == "Proponent") return Speaker::Proponent;
  if (name == "Opponent") return Speaker::Opponent;
  throw Error("unknown speaker: '" + name + "'");
}

}  // namespace

nlohmann::json distribution_to_json(const LabelDistribution& dist) {
  nlohmann::json doc;
  for (ArgLabel label : kAllLabels)
    doc[std::string(label_name(label))] = dist.at(label);
  return doc;
}

LabelDistribution distribution_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error("distribution must be a JSON object");
  std::map<ArgLabel, double> raw;
  double sum = 0.0;
  for (ArgLabel label : kAllLabels) {
    const std::string key(label_name(label));
    const double value = doc.contains(key) ? doc[key].get<double>() : 0.0;
    raw[label] = value;
    if (std::isfinite(value) && value > 0.0) sum += value;
  }
  if (std::abs(sum - 1.0) > 1e-6) return normalize(raw);
  LabelDistribution dist;
  for (ArgLabel label : kAllLabels)
    dist.probs[static_cast<std::size_t>(label)] = raw[label];
  return dist;
}

nlohmann::json instance_to_json(const Instance& instance) {
  return {{"instance_id", instance.instance_id},
          {"essay_id", instance.essay_id},
          {"component_id", instance.component_id},
          {"masked_text", instance.masked_text},
          {"target_text", instance.target_text},
          {"gold_label", std::string(label_name(instance.gold_label))}};
}

Instance instance_from_json(const nlohmann::json& doc) {
  Instance instance;
  instance.instance_id = doc.at("instance_id").get<std::string>();
  instance.essay_id = doc.at("essay_id").get<std::string>();
  instance.component_id = doc.at("component_id").get<std::string>();
  instance.masked_text = doc.at("masked_text").get<std::string>();
  if (doc.contains("target_text"))
    instance.target_text = doc["target_text"].get<std::string>();
  instance.gold_label = label_from_json(doc.at("gold_label"), "gold_label");
  return instance;
}

nlohmann::json record_to_json(const DebateRecord& record) {
  nlohmann::json doc;
  doc["instance_id"] = record.instance_id;
  doc["essay_id"] = record.essay_id;
  doc["gold_label"] = std::string(label_name(record.gold_label));
  doc["target_excerpt"] = record.target_excerpt;
  doc["manager_distribution"] =
      record.has_distribution ? distribution_to_json(record.manager_distribution)
                              : nlohmann::json(nullptr);
  if (record.has_distribution) {
    doc["stance"] = {
        {"proponent", std::string(label_name(record.stance.proponent))},
        {"opponent", std::string(label_name(record.stance.opponent))}};
    doc["coin"] = record.coin;
  } else {
    doc["stance"] = nullptr;
    doc["coin"] = nullptr;
  }
  doc["skipped"] = record.skipped;
  nlohmann::json turns = nlohmann::json::array();
  for (const Turn& turn : record.transcript.turns()) {
    turns.push_back({{"index", turn.index},
                     {"speaker", std::string(speaker_name(turn.speaker))},
                     {"defended_label", std::string(label_name(turn.defended_label))},
                     {"content", turn.content}});
  }
  doc["turns"] = std::move(turns);
  doc["verdict"] = record.has_verdict
                       ? nlohmann::json{{"label", std::string(label_name(
                                                      record.verdict_label))},
                                        {"rationale", record.verdict_rationale}}
                       : nlohmann::json(nullptr);
  doc["failed"] = record.failed;
  doc["failure_reason"] =
      record.failed ? nlohmann::json(record.failure_reason) : nlohmann::json(nullptr);
  doc["usage"] = {{"input_tokens", record.usage.input_tokens},
                  {"output_tokens", record.usage.output_tokens}};
  doc["model_ids"] = {{"manager", record.manager_model},
                      {"debater", record.debater_model},
                      {"judge", record.judge_model}};
  return doc;
}

DebateRecord record_from_json(const nlohmann::json& doc) {
  DebateRecord record;
  record.instance_id = doc.at("instance_id").get<std::string>();
  record.essay_id = doc.at("essay_id").get<std::string>();
  record.gold_label = label_from_json(doc.at("gold_label"), "gold_label");
  if (doc.contains("target_excerpt"))
    record.target_excerpt = doc["target_excerpt"].get<std::string>();
  if (doc.contains("manager_distribution") &&
      !doc["manager_distribution"].is_null()) {
    record.manager_distribution = distribution_from_json(doc["manager_distribution"]);
    record.has_distribution = true;
  }
  if (doc.contains("stance") && !doc["stance"].is_null()) {
    record.stance.proponent =
        label_from_json(doc["stance"].at("proponent"), "stance.proponent");
    record.stance.opponent =
        label_from_json(doc["stance"].at("opponent"), "stance.opponent");
  }
  if (doc.contains("coin") && doc["coin"].is_boolean())
    record.coin = doc["coin"].get<bool>();
  record.skipped = doc.at("skipped").get<bool>();
  for (const auto& turn_doc : doc.at("turns")) {
    Turn turn;
    turn.index = turn_doc.at("index").get<int>();
    turn.speaker = speaker_from_json(turn_doc.at("speaker"));
    turn.defended_label =
        label_from_json(turn_doc.at("defended_label"), "defended_label");
    turn.content = turn_doc.at("content").get<std::string>();
    record.transcript.append(turn);
  }
  if (doc.contains("verdict") && !doc["verdict"].is_null()) {
    record.verdict_label = label_from_json(doc["verdict"].at("label"), "verdict.label");
    record.verdict_rationale = doc["verdict"].at("rationale").get<std::string>();
    record.has_verdict = true;
  }
  record.failed = doc.at("failed").get<bool>();
  if (doc.contains("failure_reason") && doc["failure_reason"].is_string())
    record.failure_reason = doc["failure_reason"].get<std::string>();
  if (doc.contains("usage") && doc["usage"].is_object()) {
    record.usage.input_tokens = doc["usage"].value("input_tokens", std::int64_t{0});
    record.usage.output_tokens = doc["usage"].value("output_tokens", std::int64_t{0});
  }
  if (doc.contains("model_ids") && doc["model_ids"].is_object()) {
    record.manager_model = doc["model_ids"].value("manager", "");
    record.debater_model = doc["model_ids"].value("debater", "");
    record.judge_model = doc["model_ids"].value("judge", "");
  }
  return record;
}

nlohmann::json prediction_to_json(const Prediction& prediction) {
  return {{"instance_id", prediction.instance_id},
          {"predicted", prediction.failed
                            ? nlohmann::json(nullptr)
                            : nlohmann::json(std::string(
                                  label_name(prediction.predicted)))},
          {"gold", std::string(label_name(prediction.gold))},
          {"failed", prediction.failed}};
}

Prediction prediction_from_json(const nlohmann::json& doc) {
  Prediction prediction;
  prediction.instance_id = doc.at("instance_id").get<std::string>();
  prediction.gold = label_from_json(doc.at("gold"), "gold");
  prediction.failed = doc.at("failed").get<bool>();
  if (!prediction.failed)
    prediction.predicted = label_from_json(doc.at("predicted"), "predicted");
  return prediction;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["method"] = report.method;
  doc["macro_f1"] = report.macro_f1;
  doc["weighted_f1"] = report.weighted_f1;
  doc["accuracy"] = report.accuracy;
  nlohmann::json per_class;
  for (ArgLabel label : kAllLabels) {
    const ClassScores& s = report.per_class[static_cast<std::size_t>(label)];
    per_class[std::string(label_name(label))] = {{"precision", s.precision},
                                                 {"recall", s.recall},
                                                 {"f1", s.f1},
                                                 {"support", s.support}};
  }
  doc["per_class"] = std::move(per_class);
  nlohmann::json matrix = nlohmann::json::array();
  for (ArgLabel gold : kAllLabels) {
    nlohmann::json row = nlohmann::json::array();
    for (ArgLabel predicted : kAllLabels) row.push_back(report.matrix.at(gold, predicted));
    matrix.push_back(std::move(row));
  }
  doc["confusion"] = std::move(matrix);
  doc["scored"] = report.n_scored;
  doc["failed"] = report.n_failed;
  return doc;
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  const std::string content = read_text_file(path);
  std::vector<nlohmann::json> docs;
  std::size_t line_number = 0;
  for (const std::string& line : split_lines(content)) {
    ++line_number;
    if (trim(line).empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded())
      throw Error(path.string() + ":" + std::to_string(line_number) +
                  ": malformed JSON line");
    docs.push_back(std::move(doc));
  }
  return docs;
}

namespace {

template <typename T, typename FromJson>
std::vector<T> read_typed(const std::filesystem::path& path, FromJson from_json) {
  std::vector<T> items;
  std::size_t index = 0;
  for (const nlohmann::json& doc : read_jsonl(path)) {
    ++index;
    try {
      items.push_back(from_json(doc));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ": record " + std::to_string(index) + ": " +
                  e.what());
    } catch (const Error& e) {
      throw Error(path.string() + ": record " + std::to_string(index) + ": " +
                  e.what());
    }
  }
  return items;
}

}  // namespace

std::vector<Instance> read_instances(const std::filesystem::path& path) {
  return read_typed<Instance>(path, instance_from_json);
}

std::vector<DebateRecord> read_records(const std::filesystem::path& path) {
  return read_typed<DebateRecord>(path, record_from_json);
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  return read_typed<Prediction>(path, prediction_from_json);
}

void write_instances(const std::filesystem::path& path,
                     const std::vector<Instance>& instances) {
  write_text_file(path, to_jsonl(instances, instance_to_json));
}

void write_records(const std::filesystem::path& path,
                   const std::vector<DebateRecord>& records) {
  write_text_file(path, to_jsonl(records, record_to_json));
}

void write_predictions(const std::filesystem::path& path,
                       const std::vector<Prediction>& predictions) {
  write_text_file(path, to_jsonl(predictions, prediction_to_json));
}

}  // namespace madacc

