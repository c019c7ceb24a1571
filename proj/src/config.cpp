// SPDX-License-Identifier: Apache-2.0
#include "madacc/config.hpp"

#include <cstdlib>

#include <json.hpp>

#include "madacc/errors.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

DebateConfig RunConfig::debate_config() const {
  DebateConfig debate;
  debate.rounds = rounds;
  debate.skip_threshold = skip_threshold;
  debate.rng_seed = seed;
  debate.max_parse_attempts = max_parse_attempts;
  debate.manager_params = {manager_model, manager_temperature, max_output_tokens, {}};
  debate.debater_params = {debater_model, debater_temperature, max_output_tokens, {}};
  debate.judge_params = {judge_model, judge_temperature, max_output_tokens, {}};
  return debate;
}

namespace {

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int parsed = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for '" + key + "': '" + value + "'");
  }
}

std::uint64_t parse_uint64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long parsed = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for '" + key + "': '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': '" + value + "'");
  }
}

std::string unquote(std::string value) {
  if (value.size() >= 2 &&
      ((value.front() == '"' && value.back() == '"') ||
       (value.front() == '\'' && value.back() == '\'')))
    return value.substr(1, value.size() - 2);
  return value;
}

const std::map<std::string, AgentRole>& template_keys() {
  static const std::map<std::string, AgentRole> keys = {
      {"template_manager", AgentRole::Manager},
      {"template_debater", AgentRole::Debater},
      {"template_judge", AgentRole::Judge},
      {"template_vanilla", AgentRole::Vanilla},
      {"template_cot", AgentRole::Cot},
      {"template_smart", AgentRole::Smart}};
  return keys;
}

}  // namespace

void apply_config_key(RunConfig& config, const std::string& key,
                      const std::string& raw_value) {
  const std::string value = unquote(trim(raw_value));
  if (key == "corpus_dir") config.corpus_dir = value;
  else if (key == "split_file") config.split_file = value;
  else if (key == "templates_dir") config.templates_dir = value;
  else if (key == "output_dir") config.output_dir = value;
  else if (key == "instances_path") config.instances_path = value;
  else if (key == "context") {
    if (value == "essay") config.context = ContextMode::FullEssay;
    else if (value == "paragraph") config.context = ContextMode::Paragraph;
    else throw ConfigError("context must be 'essay' or 'paragraph', got '" + value + "'");
  } else if (key == "backend") {
    if (value == "mock") config.backend = BackendKind::Mock;
    else if (value == "live") config.backend = BackendKind::Live;
    else throw ConfigError("backend must be 'mock' or 'live', got '" + value + "'");
  } else if (key == "endpoint_url") config.endpoint_url = value;
  else if (key == "api_key_env") config.api_key_env = value;
  else if (key == "mock_script") config.mock_script = value;
  else if (key == "cache_dir") config.cache_dir = value;
  else if (key == "rate_limit_rpm") config.rate_limit_rpm = parse_int(key, value);
  else if (key == "timeout_ms") config.timeout_ms = parse_int(key, value);
  else if (key == "manager_model") config.manager_model = value;
  else if (key == "debater_model") config.debater_model = value;
  else if (key == "judge_model") config.judge_model = value;
  else if (key == "manager_temperature") config.manager_temperature = parse_double(key, value);
  else if (key == "debater_temperature") config.debater_temperature = parse_double(key, value);
  else if (key == "judge_temperature") config.judge_temperature = parse_double(key, value);
  else if (key == "max_output_tokens") config.max_output_tokens = parse_int(key, value);
  else if (key == "rounds") {
    config.rounds = parse_int(key, value);
    if (config.rounds < 1) throw ConfigError("rounds must be >= 1");
  } else if (key == "skip_threshold") {
    config.skip_threshold = parse_double(key, value);
    if (config.skip_threshold < 0.0 || config.skip_threshold > 1.0)
      throw ConfigError("skip_threshold must be within [0,1]");
  } else if (key == "seed") config.seed = parse_uint64(key, value);
  else if (key == "max_parse_attempts") {
    config.max_parse_attempts = parse_int(key, value);
    if (config.max_parse_attempts < 1)
      throw ConfigError("max_parse_attempts must be >= 1");
  } else if (key == "parallelism") {
    config.parallelism = parse_int(key, value);
    if (config.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  } else if (key == "run_id") config.run_id = value;
  else if (auto it = template_keys().find(key); it != template_keys().end()) {
    config.template_overrides[it->second] = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw ConfigError("config file not found: " + path.string());
  const std::string content = read_text_file(path);
  std::size_t line_number = 0;
  for (const std::string& raw : split_lines(content)) {
    ++line_number;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + " line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    try {
      apply_config_key(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + " line " + std::to_string(line_number) +
                        ": " + e.what());
    }
  }
}

std::string resolve_api_key(const RunConfig& config) {
  const char* key = std::getenv(config.api_key_env.c_str());
  return key ? key : "";
}

namespace {

void require_exists(const std::filesystem::path& path, const char* what) {
  if (path.empty())
    throw ConfigError(std::string(what) + " is not configured");
  if (!std::filesystem::exists(path))
    throw ConfigError(std::string(what) + " not found: " + path.string());
}

}  // namespace

void validate_config(const RunConfig& config, Command command) {
  switch (command) {
    case Command::Prepare:
      require_exists(config.corpus_dir, "corpus_dir");
      require_exists(config.split_file, "split_file");
      break;
    case Command::Run: {
      require_exists(config.resolved_instances_path(), "instances file");
      require_exists(config.templates_dir, "templates_dir");
      if (config.backend == BackendKind::Mock) {
        require_exists(config.mock_script, "mock_script");
      } else {
        if (config.endpoint_url.empty())
          throw ConfigError("endpoint_url is required for the live backend");
        if (resolve_api_key(config).empty())
          throw AuthError("environment variable " + config.api_key_env +
                          " is empty; the live backend needs an API key");
      }
      break;
    }
    case Command::Evaluate:
    case Command::Inspect:
      break;  // these validate their own input paths at open time
  }
}

std::string config_snapshot_json(const RunConfig& config, const std::string& method) {
  nlohmann::json doc;
  doc["method"] = method;
  doc["backend"] = config.backend == BackendKind::Mock ? "mock" : "live";
  doc["endpoint_url"] = config.endpoint_url;
  doc["api_key_env"] = config.api_key_env;
  doc["mock_script"] = config.mock_script.string();
  doc["cache_dir"] = config.cache_dir.string();
  doc["rate_limit_rpm"] = config.rate_limit_rpm;
  doc["timeout_ms"] = config.timeout_ms;
  doc["instances_path"] = config.resolved_instances_path().string();
  doc["templates_dir"] = config.templates_dir.string();
  doc["manager_model"] = config.manager_model;
  doc["debater_model"] = config.debater_model;
  doc["judge_model"] = config.judge_model;
  doc["manager_temperature"] = config.manager_temperature;
  doc["debater_temperature"] = config.debater_temperature;
  doc["judge_temperature"] = config.judge_temperature;
  doc["max_output_tokens"] = config.max_output_tokens;
  doc["rounds"] = config.rounds;
  doc["skip_threshold"] = config.skip_threshold;
  doc["seed"] = config.seed;
  doc["max_parse_attempts"] = config.max_parse_attempts;
  doc["parallelism"] = config.parallelism;
  return doc.dump(2) + "\n";
}

}  // namespace madacc
