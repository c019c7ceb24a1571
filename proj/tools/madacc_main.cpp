// SPDX-License-Identifier: Apache-2.0
//
// madacc: prepare / run / evaluate / inspect.
//
// Settings merge as defaults < config file (--config) < command-line flags;
// every flag funnels through apply_config_key so the two sources share one
// parser and one validation path.

#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "madacc/commands.hpp"
#include "madacc/config.hpp"
#include "madacc/errors.hpp"

namespace {

using Applier = std::function<void(madacc::RunConfig&)>;

void add_override(std::vector<Applier>& appliers, CLI::App* cmd,
                  const std::string& flag, const std::string& key,
                  const std::string& description) {
  auto storage = std::make_shared<std::string>();
  CLI::Option* option = cmd->add_option(flag, *storage, description);
  appliers.push_back([option, storage, key](madacc::RunConfig& config) {
    if (option->count() > 0) madacc::apply_config_key(config, key, *storage);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"argument-component classification by multi-agent debate"};
  app.require_subcommand(1);

  std::vector<Applier> appliers;

  std::string config_path;
  CLI::Option* config_option =
      app.add_option("--config", config_path, "key = value config file");
  add_override(appliers, &app, "--seed", "seed", "global rng seed");
  add_override(appliers, &app, "--parallelism", "parallelism",
               "max concurrent instances");

  CLI::App* prepare = app.add_subcommand(
      "prepare", "parse the corpus split and write the instances file");
  prepare->fallthrough();
  add_override(appliers, prepare, "--corpus-dir", "corpus_dir",
               "directory with .txt/.ann essay pairs");
  add_override(appliers, prepare, "--split-file", "split_file",
               "file listing one essay id per line");
  add_override(appliers, prepare, "--out", "instances_path",
               "instances JSONL output path");
  add_override(appliers, prepare, "--output-dir", "output_dir",
               "base output directory");
  add_override(appliers, prepare, "--context", "context",
               "masking context: essay | paragraph");

  CLI::App* run = app.add_subcommand("run", "run a method over prepared instances");
  run->fallthrough();
  std::string method;
  run->add_option("--method", method, "madacc | vanilla | cot | smart")
      ->required();
  add_override(appliers, run, "--instances", "instances_path",
               "instances JSONL input path");
  add_override(appliers, run, "--templates-dir", "templates_dir",
               "prompt template directory");
  add_override(appliers, run, "--output-dir", "output_dir",
               "base output directory");
  add_override(appliers, run, "--run-id", "run_id",
               "run directory name (default: timestamp)");
  add_override(appliers, run, "--backend", "backend", "mock | live");
  add_override(appliers, run, "--mock-script", "mock_script",
               "mock backend script file");
  add_override(appliers, run, "--endpoint-url", "endpoint_url",
               "live chat-completion endpoint");
  add_override(appliers, run, "--cache-dir", "cache_dir",
               "response cache directory");
  add_override(appliers, run, "--rounds", "rounds", "debate rounds");
  add_override(appliers, run, "--skip-threshold", "skip_threshold",
               "confidence skip threshold in [0,1]");
  add_override(appliers, run, "--rate-limit-rpm", "rate_limit_rpm",
               "max requests per minute (0 = unlimited)");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score a predictions file");
  evaluate->fallthrough();
  std::string predictions_path;
  evaluate->add_option("predictions", predictions_path, "predictions JSONL path")
      ->required();
  std::string method_name = "run";
  evaluate->add_option("--method-name", method_name,
                       "row label used in the report");

  CLI::App* inspect =
      app.add_subcommand("inspect", "print one debate transcript");
  inspect->fallthrough();
  std::string records_path;
  inspect->add_option("records", records_path, "records JSONL path")->required();
  std::string instance_id;
  inspect->add_option("--id", instance_id, "instance id to show")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    madacc::RunConfig config;
    if (config_option->count() > 0) madacc::load_config_file(config, config_path);
    for (const Applier& apply : appliers) apply(config);

    if (prepare->parsed()) return madacc::cmd_prepare(config, std::cout);
    if (run->parsed())
      return madacc::cmd_run(config, method, std::cout, std::cerr);
    if (evaluate->parsed())
      return madacc::cmd_evaluate(predictions_path, method_name, std::cout);
    if (inspect->parsed())
      return madacc::cmd_inspect(records_path, instance_id, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
