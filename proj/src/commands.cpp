// SPDX-License-Identifier: Apache-2.0
#include "madacc/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <memory>
#include <ostream>

#include "madacc/cache.hpp"
#include "madacc/errors.hpp"
#include "madacc/http_backend.hpp"
#include "madacc/jsonl.hpp"
#include "madacc/metrics.hpp"
#include "madacc/mock_backend.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

int cmd_prepare(const RunConfig& config, std::ostream& out) {
  validate_config(config, Command::Prepare);
  const std::vector<Essay> essays = load_split(config.corpus_dir, config.split_file);
  std::vector<Instance> instances;
  std::array<std::size_t, kLabelCount> per_label{};
  for (const Essay& essay : essays) {
    for (Instance& instance : make_instances(essay, config.context)) {
      ++per_label[static_cast<std::size_t>(instance.gold_label)];
      instances.push_back(std::move(instance));
    }
  }
  const std::filesystem::path out_path = config.resolved_instances_path();
  if (out_path.has_parent_path())
    std::filesystem::create_directories(out_path.parent_path());
  write_instances(out_path, instances);
  out << "essays: " << essays.size() << "\n";
  out << "instances: " << instances.size() << "\n";
  for (ArgLabel label : kAllLabels)
    out << "gold " << label_name(label) << ": "
        << per_label[static_cast<std::size_t>(label)] << "\n";
  out << "wrote: " << out_path.string() << "\n";
  return 0;
}

namespace {

std::string timestamp_run_id() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &parts);
  return buf;
}

struct BackendStack {
  std::unique_ptr<MockBackend> mock;
  std::unique_ptr<HttpBackend> http;
  std::unique_ptr<CachedBackend> cached;
  Backend* active = nullptr;
};

BackendStack build_backend(const RunConfig& config) {
  BackendStack stack;
  if (config.backend == BackendKind::Mock) {
    MockScript script = load_mock_script(config.mock_script);
    stack.mock = std::make_unique<MockBackend>(std::move(script.rules),
                                               std::move(script.fallback));
    stack.active = stack.mock.get();
  } else {
    HttpBackendConfig http;
    http.endpoint_url = config.endpoint_url;
    http.api_key = resolve_api_key(config);
    http.rate_limit_rpm = config.rate_limit_rpm;
    http.timeout_ms = config.timeout_ms;
    stack.http = std::make_unique<HttpBackend>(http);
    stack.active = stack.http.get();
  }
  if (!config.cache_dir.empty()) {
    stack.cached = std::make_unique<CachedBackend>(*stack.active, config.cache_dir);
    stack.active = stack.cached.get();
  }
  return stack;
}

BaselineKind baseline_kind_from_method(const std::string& method) {
  if (method == "vanilla") return BaselineKind::Vanilla;
  if (method == "cot") return BaselineKind::Cot;
  return BaselineKind::Smart;
}

}  // namespace

int cmd_run(const RunConfig& config, const std::string& method,
            std::ostream& out, std::ostream& progress) {
  if (method != "madacc" && method != "vanilla" && method != "cot" &&
      method != "smart")
    throw ConfigError("method must be one of madacc|vanilla|cot|smart, got '" +
                      method + "'");
  validate_config(config, Command::Run);

  const std::vector<Instance> instances =
      read_instances(config.resolved_instances_path());
  const TemplateSet templates =
      TemplateSet::load_dir(config.templates_dir, config.template_overrides);
  BackendStack backend = build_backend(config);
  const DebateConfig debate = config.debate_config();

  const std::string run_id =
      config.run_id.empty() ? timestamp_run_id() : config.run_id;
  const std::filesystem::path run_dir = config.output_dir / run_id;
  std::filesystem::create_directories(run_dir);
  write_text_file(run_dir / "config.json", config_snapshot_json(config, method));

  const std::size_t total = instances.size();
  std::size_t done = 0;
  std::vector<Prediction> predictions;
  TokenUsage usage;
  std::size_t failed = 0;

  if (method == "madacc") {
    const auto records = run_pipeline(
        instances, debate, *backend.active, templates, config.parallelism,
        [&](const DebateRecord& record) {
          ++done;
          progress << "[" << done << "/" << total << "] " << record.instance_id
                   << (record.failed ? " FAILED" : record.skipped ? " skipped" : "")
                   << "\n";
        });
    write_records(run_dir / "records.jsonl", records);
    predictions.reserve(records.size());
    for (const DebateRecord& record : records) {
      predictions.push_back(prediction_from_record(record));
      usage += record.usage;
      if (record.failed) ++failed;
    }
  } else {
    predictions = run_baseline(
        instances, baseline_kind_from_method(method), debate, *backend.active,
        templates, config.parallelism, &usage, [&](const Prediction& prediction) {
          ++done;
          progress << "[" << done << "/" << total << "] " << prediction.instance_id
                   << (prediction.failed ? " FAILED" : "") << "\n";
        });
    for (const Prediction& prediction : predictions)
      if (prediction.failed) ++failed;
  }

  write_predictions(run_dir / "predictions.jsonl", predictions);
  out << "method: " << method << "\n";
  out << "instances: " << total << "\n";
  out << "failed: " << failed << "\n";
  out << "input tokens: " << usage.input_tokens << "\n";
  out << "output tokens: " << usage.output_tokens << "\n";
  out << "run dir: " << run_dir.string() << "\n";
  return 0;
}

int cmd_evaluate(const std::filesystem::path& predictions_path,
                 const std::string& method_name, std::ostream& out) {
  const std::vector<Prediction> predictions = read_predictions(predictions_path);
  EvalReport report = evaluate(predictions);
  report.method = method_name;
  const std::string text = format_report(report);
  const std::filesystem::path dir = predictions_path.has_parent_path()
                                        ? predictions_path.parent_path()
                                        : std::filesystem::path(".");
  write_text_file(dir / "report.txt", text);
  write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
  out << text;
  return 0;
}

namespace {

std::string format_probability(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace

std::string render_inspection(const DebateRecord& record) {
  std::string out;
  out += "Instance: " + record.instance_id + "\n";
  out += "Essay: " + record.essay_id + "\n";
  out += "Gold Label: " + std::string(label_name(record.gold_label)) + "\n";
  if (!record.target_excerpt.empty())
    out += "Target: \"" + record.target_excerpt + "\"\n";

  if (record.has_distribution) {
    out += "Manager distribution:\n";
    for (ArgLabel label : kAllLabels)
      out += "  " + std::string(label_name(label)) + ": " +
             format_probability(record.manager_distribution.at(label)) + "\n";
    out += "Stance: Proponent defends " +
           std::string(label_name(record.stance.proponent)) +
           ", Opponent defends " +
           std::string(label_name(record.stance.opponent)) + " (coin: " +
           (record.coin ? "top-1 to Proponent" : "top-1 to Opponent") + ")\n";
  }

  if (record.failed) {
    out += "FAILED: " + record.failure_reason + "\n";
    return out;
  }

  if (record.skipped) {
    out += "skipped (confidence >= tau): no debate held\n";
    out += "Final Label: " + std::string(label_name(record.verdict_label)) + "\n";
    return out;
  }

  out += "\n";
  for (const Turn& turn : record.transcript.turns()) {
    out += "Turn " + std::to_string(turn.index) + ", " +
           std::string(speaker_name(turn.speaker)) + " (defends " +
           std::string(label_name(turn.defended_label)) + "):\n";
    out += turn.content + "\n\n";
  }

  if (record.has_verdict) {
    out += "Judge rationale:\n" + record.verdict_rationale + "\n\n";
    if (record.verdict_outside_pair())
      out += "note: verdict lies outside the debated pair\n";
    out += "Final Label: " + std::string(label_name(record.verdict_label)) + "\n";
  }
  return out;
}

int cmd_inspect(const std::filesystem::path& records_path,
                const std::string& instance_id, std::ostream& out) {
  const std::vector<DebateRecord> records = read_records(records_path);
  for (const DebateRecord& record : records) {
    if (record.instance_id == instance_id) {
      out << render_inspection(record);
      return 0;
    }
  }
  throw UnknownInstanceId("no record with instance id '" + instance_id +
                          "' in " + records_path.string());
}

}  // namespace madacc
