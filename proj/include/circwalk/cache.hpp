#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "circwalk/spectral.hpp"

namespace circwalk {

inline constexpr const char* kCacheEnvVar = "CIRCWALK_CACHE_DIR";

// Content-addressed spectrum store keyed by (n, k, p, schema version).
class SpectrumCache {
 public:
  explicit SpectrumCache(std::filesystem::path dir);
  static std::optional<SpectrumCache> from_env();

  const std::filesystem::path& dir() const { return dir_; }
  std::string key(const ChainModel& model) const;

  // Empty on miss, version mismatch or checksum failure.
  std::optional<Spectrum> load(const ChainModel& model) const;
  void store(const ChainModel& model, const Spectrum& spectrum) const;
  Spectrum get_or_compute(const ChainModel& model, bool* hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace circwalk
