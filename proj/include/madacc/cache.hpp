// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "madacc/backend.hpp"

namespace madacc {

// Content-addressed response store: one JSON file per entry under `dir`,
// named by the 64-bit hash of the request's canonical key material. The full
// key material is stored inside the entry and verified on lookup, so a hash
// collision reads as a miss instead of returning a stranger's response.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  // Canonical serialization of (model_id, messages, temperature,
  // max_output_tokens). seed_hint is deliberately excluded.
  static std::string key_material(const std::vector<ChatMessage>& messages,
                                  const GenerationParams& params);

  std::optional<BackendResponse> lookup(const std::string& key_material);
  void store(const std::string& key_material, const BackendResponse& response);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(const std::string& key_material) const;

  std::filesystem::path dir_;
  std::mutex mu_;
};

// Cache hit returns the stored response without touching the inner backend;
// a miss delegates and stores.
BackendResponse cached_complete(Backend& inner, ResponseCache& cache,
                                const std::vector<ChatMessage>& messages,
                                const GenerationParams& params);

class CachedBackend : public Backend {
 public:
  CachedBackend(Backend& inner, std::filesystem::path cache_dir)
      : inner_(inner), cache_(std::move(cache_dir)) {}

  BackendResponse complete(const std::vector<ChatMessage>& messages,
                           const GenerationParams& params) override {
    return cached_complete(inner_, cache_, messages, params);
  }

  ResponseCache& cache() { return cache_; }

 private:
  Backend& inner_;
  ResponseCache cache_;
};

}  // namespace madacc
