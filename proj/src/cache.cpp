// SPDX-License-Identifier: Apache-2.0
#include "madacc/cache.hpp"

#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "madacc/errors.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw CacheError("cannot create cache directory " + dir_.string());
}

std::string ResponseCache::key_material(const std::vector<ChatMessage>& messages,
                                        const GenerationParams& params) {
  nlohmann::json doc;
  doc["model"] = params.model_id;
  doc["temperature"] = params.temperature;
  doc["max_tokens"] = params.max_output_tokens;
  auto msgs = nlohmann::json::array();
  for (const ChatMessage& m : messages)
    msgs.push_back({{"role", std::string(role_name(m.role))}, {"content", m.content}});
  doc["messages"] = std::move(msgs);
  return doc.dump();
}

std::filesystem::path ResponseCache::entry_path(const std::string& key_material) const {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(key_material)));
  return dir_ / (std::string(hex) + ".json");
}

std::optional<BackendResponse> ResponseCache::lookup(const std::string& key_material) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto path = entry_path(key_material);
  if (!std::filesystem::exists(path)) return std::nullopt;

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
    if (!doc.is_object() || !doc.contains("key") || !doc.contains("response_text"))
      throw CacheError("cache entry corrupted: " + path.string());
    if (doc["key"].get<std::string>() != key_material)
      return std::nullopt;  // hash collision, not our entry
    BackendResponse resp;
    resp.text = doc["response_text"].get<std::string>();
    const auto& usage = doc.value("usage", nlohmann::json::object());
    resp.usage.input_tokens = usage.value("input_tokens", std::int64_t{0});
    resp.usage.output_tokens = usage.value("output_tokens", std::int64_t{0});
    resp.latency_ms = 0;
    return resp;
  } catch (const nlohmann::json::exception&) {
    throw CacheError("cache entry corrupted: " + path.string());
  }
}

void ResponseCache::store(const std::string& key_material,
                          const BackendResponse& response) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto path = entry_path(key_material);
  nlohmann::json doc;
  doc["key"] = key_material;
  doc["response_text"] = response.text;
  doc["usage"] = {{"input_tokens", response.usage.input_tokens},
                  {"output_tokens", response.usage.output_tokens}};
  doc["created_at"] = std::chrono::duration_cast<std::chrono::seconds>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count();
  // write-then-rename keeps readers from seeing a torn entry
  const auto tmp = path.string() + ".tmp";
  write_text_file(tmp, doc.dump());
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CacheError("cannot finalize cache entry " + path.string());
}

BackendResponse cached_complete(Backend& inner, ResponseCache& cache,
                                const std::vector<ChatMessage>& messages,
                                const GenerationParams& params) {
  const std::string key = ResponseCache::key_material(messages, params);
  if (auto hit = cache.lookup(key)) return *hit;
  BackendResponse resp = inner.complete(messages, params);
  cache.store(key, resp);
  return resp;
}

}  // namespace madacc
