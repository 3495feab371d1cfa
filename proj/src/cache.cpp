#include "circwalk/cache.hpp"

#include <cstdlib>

#include "circwalk/io.hpp"

namespace circwalk {

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<SpectrumCache> SpectrumCache::from_env() {
  const char* d = std::getenv(kCacheEnvVar);
  if (!d || !*d) return std::nullopt;
  return SpectrumCache(d);
}

std::string SpectrumCache::key(const ChainModel& model) const {
  return io::checksum("spectrum|v" + std::to_string(io::kSchemaVersion) + "|" + std::to_string(model.n()) + "|" +
                      std::to_string(model.k()) + "|" + model.p().to_string());
}

std::optional<Spectrum> SpectrumCache::load(const ChainModel& model) const {
  const std::string base = key(model);
  const auto csv = dir_ / (base + ".csv");
  const auto meta = dir_ / (base + ".json");
  if (!std::filesystem::exists(csv) || !std::filesystem::exists(meta)) return std::nullopt;
  try {
    const std::string body = io::read_file(csv);
    const auto j = nlohmann::json::parse(io::read_file(meta));
    if (j.value("schema_version", -1) != io::kSchemaVersion) return std::nullopt;
    if (j.value("checksum", std::string()) != io::checksum(body)) return std::nullopt;
    if (j.value("p", std::string()) != model.p().to_string()) return std::nullopt;
    return io::parse_spectrum(model.n(), model.k(), model.p(), body);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void SpectrumCache::store(const ChainModel& model, const Spectrum& spectrum) const {
  const std::string base = key(model);
  const std::string body = io::spectrum_table(spectrum).render();
  io::write_atomic(dir_ / (base + ".csv"), body);
  io::write_atomic(dir_ / (base + ".json"), io::spectrum_sidecar(spectrum, body).dump(2) + "\n");
}

Spectrum SpectrumCache::get_or_compute(const ChainModel& model, bool* hit) const {
  if (auto s = load(model)) {
    if (hit) *hit = true;
    return *s;
  }
  if (hit) *hit = false;
  Spectrum s = full_spectrum(model);
  store(model, s);
  return s;
}

}  // namespace circwalk
