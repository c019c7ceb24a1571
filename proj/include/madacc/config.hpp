// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: defaults, key=value config file loading, and flag
// overrides applied through the same key parser so precedence is uniform
// (defaults < config file < command-line flags).

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "madacc/agents.hpp"
#include "madacc/corpus.hpp"
#include "madacc/protocol.hpp"

namespace madacc {

enum class BackendKind { Mock, Live };

struct RunConfig {
  // corpus / files
  std::filesystem::path corpus_dir;
  std::filesystem::path split_file;
  std::filesystem::path templates_dir = "templates";
  std::filesystem::path output_dir = "out";
  std::filesystem::path instances_path;  // empty = output_dir/instances.jsonl
  ContextMode context = ContextMode::FullEssay;

  // backend
  BackendKind backend = BackendKind::Mock;
  std::string endpoint_url;
  std::string api_key_env = "MADACC_API_KEY";
  std::filesystem::path mock_script;
  std::filesystem::path cache_dir;  // empty = no response cache
  int rate_limit_rpm = 0;           // 0 = unlimited
  int timeout_ms = 120000;

  // models and debate settings
  std::string manager_model = "gemini-2.5-flash";
  std::string debater_model = "gemini-2.5-flash";
  std::string judge_model = "gemini-2.5-pro";
  double manager_temperature = 0.0;
  double debater_temperature = 0.7;
  double judge_temperature = 0.0;
  int max_output_tokens = 1024;
  int rounds = 2;
  double skip_threshold = 1.0;
  std::uint64_t seed = 0;
  int max_parse_attempts = 3;

  // execution
  int parallelism = 1;
  std::string run_id;  // empty = timestamp at run start

  // per-role template file overrides (role name -> path)
  std::map<AgentRole, std::filesystem::path> template_overrides;

  std::filesystem::path resolved_instances_path() const {
    return instances_path.empty() ? output_dir / "instances.jsonl" : instances_path;
  }
  DebateConfig debate_config() const;
};

// Applies one "key = value" setting. Throws ConfigError on unknown keys or
// unparseable values.
void apply_config_key(RunConfig& config, const std::string& key,
                      const std::string& value);

// key = value lines, '#' comments, blank lines ignored. Errors cite
// "<path> line N".
void load_config_file(RunConfig& config, const std::filesystem::path& path);

enum class Command { Prepare, Run, Evaluate, Inspect };

// Eager validation of the inputs a command depends on. Throws ConfigError,
// or AuthError when the live backend key is missing.
void validate_config(const RunConfig& config, Command command);

// Live-backend API key from the configured environment variable.
std::string resolve_api_key(const RunConfig& config);

// Effective-settings snapshot persisted into each run directory. Never
// contains the API key itself, only the variable name.
std::string config_snapshot_json(const RunConfig& config, const std::string& method);

}  // namespace madacc
