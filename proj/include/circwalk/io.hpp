#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "circwalk/asymptotics.hpp"
#include "circwalk/kernels.hpp"
#include "circwalk/mixing.hpp"
#include "circwalk/spectral.hpp"

namespace circwalk::io {

inline constexpr int kSchemaVersion = 1;

// 17 significant digits, round-trips every double.
std::string fmt(double v);
// FNV-1a 64-bit, lowercase hex.
std::string checksum(std::string_view bytes);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;
};

// "# {header + checksum of the CSV body}\n" followed by the CSV.
std::string with_json_header(nlohmann::json header, const CsvTable& table);

// Writes to a sibling temp file, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

nlohmann::json model_json(const ChainModel& model);

CsvTable kernel_table(const SparseKernel& kernel);
CsvTable spectrum_table(const Spectrum& spectrum);
// Sidecar for a spectrum CSV body.
nlohmann::json spectrum_sidecar(const Spectrum& spectrum, const std::string& csv_body);
Spectrum parse_spectrum(int n, int k, const StepDistribution& p, const std::string& csv_body);

CsvTable curve_table(const MixingCurve& curve);
CsvTable cutoff_table(const CutoffSweep& sweep);
CsvTable t_eps_table(const CutoffSweep& sweep);
CsvTable envelope_table(const EnvelopeReport& report);
CsvTable classification_table(const std::vector<OrbitClassification>& classes);
CsvTable trajectory_table(const std::vector<CircleConfig>& path);

// "3 2 0"
std::string positions_field(const CircleConfig& c);

}  // namespace circwalk::io
