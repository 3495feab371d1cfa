#include "circwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "circwalk/errors.hpp"

namespace circwalk::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string checksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += '\n';
  }
  return out;
}

std::string with_json_header(nlohmann::json header, const CsvTable& table) {
  const std::string body = table.render();
  header["schema_version"] = kSchemaVersion;
  header["checksum"] = checksum(body);
  return "# " + header.dump() + "\n" + body;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json model_json(const ChainModel& model) {
  nlohmann::json j;
  j["n"] = model.n();
  j["k"] = model.k();
  j["p"] = model.p().to_string();
  j["label"] = model.label;
  j["metadata"] = model.metadata;
  j["warnings"] = model.warnings;
  return j;
}

std::string positions_field(const CircleConfig& c) {
  std::string s;
  for (int j = 0; j < c.k(); ++j) s += (j ? " " : "") + std::to_string(c[j]);
  return s;
}

CsvTable kernel_table(const SparseKernel& kernel) {
  CsvTable t{{"row_index", "col_index", "weight"}, {}};
  for (int r = 0; r < kernel.outerSize(); ++r)
    for (SparseKernel::InnerIterator it(kernel, r); it; ++it)
      t.rows.push_back({std::to_string(it.row()), std::to_string(it.col()), fmt(it.value())});
  return t;
}

CsvTable spectrum_table(const Spectrum& spectrum) {
  CsvTable t;
  t.columns = {"orbit_rep", "orbit_size"};
  for (int l = 1; l <= spectrum.k; ++l) {
    t.columns.push_back("re_l" + std::to_string(l));
    t.columns.push_back("im_l" + std::to_string(l));
  }
  for (const char* c : {"re_lambda_mix", "im_lambda_mix", "abs_lambda_mix", "d"}) t.columns.push_back(c);
  for (const auto& e : spectrum.entries) {
    std::vector<std::string> row{positions_field(e.orbit.representative), std::to_string(e.orbit.size)};
    for (int l = 1; l <= spectrum.k; ++l) {
      row.push_back(fmt(e.lambda_by_ell[l].real()));
      row.push_back(fmt(e.lambda_by_ell[l].imag()));
    }
    row.push_back(fmt(e.lambda_mixture.real()));
    row.push_back(fmt(e.lambda_mixture.imag()));
    row.push_back(fmt(std::abs(e.lambda_mixture)));
    row.push_back(fmt(e.d));
    t.rows.push_back(std::move(row));
  }
  return t;
}

nlohmann::json spectrum_sidecar(const Spectrum& spectrum, const std::string& csv_body) {
  nlohmann::json j;
  j["n"] = spectrum.n;
  j["k"] = spectrum.k;
  j["p"] = spectrum.p.to_string();
  j["orbits"] = spectrum.entries.size();
  j["schema_version"] = kSchemaVersion;
  j["checksum"] = checksum(csv_body);
  return j;
}

Spectrum parse_spectrum(int n, int k, const StepDistribution& p, const std::string& csv_body) {
  Spectrum s;
  s.n = n;
  s.k = k;
  s.p = p;
  std::istringstream in(csv_body);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty spectrum table");
  const std::size_t expected = 2 + 2 * k + 4;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != expected) throw Error("malformed spectrum row");
    std::vector<int> pos;
    std::istringstream ps(f[0]);
    for (int v; ps >> v;) pos.push_back(v);
    SpectrumEntry e{{CircleConfig(n, pos), std::stoi(f[1])}, std::vector<cplx>(k + 1), 0.0, 0.0};
    e.lambda_by_ell[0] = 1.0;
    for (int l = 1; l <= k; ++l)
      e.lambda_by_ell[l] = {std::strtod(f[2 * l].c_str(), nullptr), std::strtod(f[2 * l + 1].c_str(), nullptr)};
    e.lambda_mixture = {std::strtod(f[2 + 2 * k].c_str(), nullptr), std::strtod(f[3 + 2 * k].c_str(), nullptr)};
    e.d = std::strtod(f[5 + 2 * k].c_str(), nullptr);
    s.entries.push_back(std::move(e));
  }
  return s;
}

CsvTable curve_table(const MixingCurve& curve) {
  CsvTable t{{"t", "tv", "l2_sq", "lower_bound"}, {}};
  for (std::size_t i = 0; i < curve.times.size(); ++i)
    t.rows.push_back({std::to_string(curve.times[i]), fmt(curve.tv[i]), fmt(curve.l2_sq[i]), fmt(curve.lower_bound[i])});
  return t;
}

CsvTable cutoff_table(const CutoffSweep& sweep) {
  CsvTable t{{"n", "k", "gamma", "centering", "s", "t", "profile_value", "profile_floor", "profile_ceil"}, {}};
  for (const auto& r : sweep.rows)
    t.rows.push_back({std::to_string(r.n), std::to_string(r.k), fmt(r.gamma), r.centering, fmt(r.s), std::to_string(r.t),
                      fmt(r.profile_value), fmt(r.profile_floor), fmt(r.profile_ceil)});
  return t;
}

CsvTable t_eps_table(const CutoffSweep& sweep) {
  CsvTable t{{"n", "k", "gamma", "eps", "reached", "t_eps", "d_at_t", "t_eps_gamma_over_log_n"}, {}};
  for (const auto& r : sweep.t_eps)
    t.rows.push_back({std::to_string(r.n), std::to_string(r.k), fmt(r.gamma), fmt(r.eps), r.t_eps.reached ? "1" : "0",
                      std::to_string(r.t_eps.t), fmt(r.t_eps.achieved), fmt(r.normalized)});
  return t;
}

CsvTable envelope_table(const EnvelopeReport& report) {
  CsvTable t{{"n", "s", "t", "d2", "d2_sq", "gamma_shifted_minus_one", "c0"}, {}};
  for (const auto& r : report.rows) {
    double c0 = 0.0;
    for (auto [n, c] : report.fitted_c0)
      if (n == r.n) c0 = c;
    t.rows.push_back({std::to_string(r.n), fmt(r.s), std::to_string(r.t), fmt(r.d2), fmt(r.d2 * r.d2),
                      fmt(r.gamma_value), fmt(c0)});
  }
  return t;
}

CsvTable classification_table(const std::vector<OrbitClassification>& classes) {
  CsvTable t{{"orbit_rep", "orbit_size", "class", "W1", "tau", "tau_weight"}, {}};
  for (const auto& c : classes)
    t.rows.push_back({positions_field(c.orbit.representative), std::to_string(c.orbit.size), to_string(c.kind),
                      fmt(c.transport_cost), c.tau ? c.tau->to_string() : "", c.tau ? std::to_string(c.tau->weight()) : ""});
  return t;
}

CsvTable trajectory_table(const std::vector<CircleConfig>& path) {
  CsvTable t{{"step", "config"}, {}};
  for (std::size_t i = 0; i < path.size(); ++i) t.rows.push_back({std::to_string(i), positions_field(path[i])});
  return t;
}

}  // namespace circwalk::io
