#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sys/wait.h>

#include <json.hpp>

#include "circwalk/cache.hpp"
#include "circwalk/errors.hpp"
#include "circwalk/io.hpp"
#include "circwalk/models.hpp"
#include "circwalk/spectral.hpp"

using namespace circwalk;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const StepDistribution kLazy{{{-1, 0.25}, {0, 0.5}, {1, 0.25}}};

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("circwalk_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& out = {}) {
  std::string cmd = std::string(CIRCWALK_CLI_PATH) + " " + args;
  cmd += out.empty() ? " > /dev/null 2>&1" : " > '" + out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double sum_of(const StepDistribution& p) {
  double s = 0.0;
  for (auto [l, w] : p.weights()) s += w;
  return s;
}

}  // namespace

TEST(BuildConstant, LazyPrediction) {
  const ChainModel m = build_constant(12, 6, kLazy);
  EXPECT_DOUBLE_EQ(m.metadata.at("mean_abs"), 0.5);
  EXPECT_NEAR(m.metadata.at("predicted_t_mix"), 144.0 * std::log(12.0) / (kPi * kPi), 1e-12);
  EXPECT_TRUE(m.warnings.empty());
}

TEST(BuildConstant, DegenerateAndRejected) {
  const ChainModel m = build_constant(12, 6, StepDistribution::parse("1:1"));
  EXPECT_NEAR(m.metadata.at("Ka_hat"), 0.0, 1e-12);
  EXPECT_FALSE(m.warnings.empty());
  EXPECT_THROW(build_constant(12, 6, StepDistribution()), InvalidArgument);
  EXPECT_THROW(build_constant(12, 6, StepDistribution::parse("-2:0.5,2:0.5")), InvalidArgument);
}

TEST(BuildAsep, SymmetryAndTasep) {
  const StepDistribution s = asep_distribution(16, 8, 0.7, 0.7);
  EXPECT_DOUBLE_EQ(s(-1), s(1));
  const ChainModel t = build_asep(16, 8, 0.0, 1.0);
  EXPECT_EQ(t.p()(-1), 0.0);
  EXPECT_EQ(t.p().support_gcd(), 1);
  EXPECT_EQ(t.metadata.at("gcd_ok"), 1.0);
  EXPECT_GT(t.metadata.at("Ka_hat"), 0.0);
  EXPECT_THROW(build_asep(16, 2, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(build_asep(16, 8, -1.0, 1.0), InvalidArgument);
}

TEST(BuildAsep, GapTrend) {
  double prev = 1e9;
  for (int n : {20, 40}) {
    const ChainModel m = build_asep(n, n / 2, 1.0, 1.0, 1);
    const auto& p = m.p();
    EXPECT_NEAR(sum_of(p), 1.0, 1e-13);
    const double approx = 2 * kPi * kPi * (p(-1) + p(1)) / (n * n);
    const double err = std::abs(m.gamma() / approx - 1.0);
    if (n == 20) EXPECT_LE(err, 0.2);
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(BuildAsep, GapDependsOnlyOnSum) {
  const double g = build_asep(16, 8, 2.0, 0.0, 1).gamma();
  EXPECT_NEAR(build_asep(16, 8, 1.0, 1.0, 1).gamma(), g, 1e-12);
  EXPECT_NEAR(build_asep(16, 8, 0.0, 2.0, 1).gamma(), g, 1e-12);
}

TEST(BuildDimer, WeightsAndIdentities) {
  const ChainModel m = build_dimer(12, 6, 1.0, 1.0);
  EXPECT_NEAR(sum_of(m.p()), 1.0, 1e-12);
  for (auto [l, w] : m.p().weights()) EXPECT_GE(w, 0.0);
  const DimerCheck d = dimer_check(12, 6, 1.0, 1.0);
  EXPECT_LE(d.fourier_residual, 1e-9);
  EXPECT_LE(d.lambda_residual, 1e-12);
  EXPECT_NEAR(d.t_mix_prediction, d.log_n_over_gamma_asymptotic, 1e-10 * d.t_mix_prediction);
  for (auto [a1, a2] : std::vector<std::pair<double, double>>{{0.5, 2.0}, {2.0, 0.7}}) {
    const DimerCheck e = dimer_check(14, 5, a1, a2);
    EXPECT_LE(e.fourier_residual, 1e-9);
    EXPECT_LE(e.lambda_residual, 1e-12);
  }
}

TEST(BuildDimer, SmallA1Degenerates) {
  const ChainModel m = build_dimer(12, 6, 1e-12, 1.0);
  EXPECT_GT(m.p()(0), 1.0 - 1e-9);
  EXPECT_FALSE(m.warnings.empty());
  EXPECT_THROW(build_dimer(12, 6, 0.0, 1.0), InvalidArgument);
}

TEST(Io, FormattingAndChecksum) {
  EXPECT_EQ(io::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(io::fmt(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(io::checksum(""), "cbf29ce484222325");
  EXPECT_NE(io::checksum("a"), io::checksum("b"));
}

TEST(Io, SpectrumRoundTrip) {
  const ChainModel m(9, 4, StepDistribution::parse("-1:0.3,0:0.2,2:0.5"));
  const Spectrum& s = m.spectrum();
  const Spectrum back = io::parse_spectrum(9, 4, m.p(), io::spectrum_table(s).render());
  ASSERT_EQ(back.entries.size(), s.entries.size());
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].orbit.representative, s.entries[i].orbit.representative);
    EXPECT_EQ(back.entries[i].orbit.size, s.entries[i].orbit.size);
    EXPECT_EQ(back.entries[i].lambda_by_ell, s.entries[i].lambda_by_ell);
    EXPECT_EQ(back.entries[i].lambda_mixture, s.entries[i].lambda_mixture);
    EXPECT_EQ(back.entries[i].d, s.entries[i].d);
  }
}

TEST(Cache, ColdWarmAndCorruption) {
  const fs::path dir = scratch("cache");
  const SpectrumCache cache(dir);
  const ChainModel m(12, 6, kLazy);
  bool hit = true;
  const Spectrum cold = cache.get_or_compute(m, &hit);
  EXPECT_FALSE(hit);
  const std::string body = io::spectrum_table(cold).render();
  const Spectrum warm = cache.get_or_compute(m, &hit);
  EXPECT_TRUE(hit);
  EXPECT_EQ(io::spectrum_table(warm).render(), body);

  // flip a digit in the stored CSV
  const fs::path csv = dir / (cache.key(m) + ".csv");
  std::string stored = io::read_file(csv);
  const auto pos = stored.find_last_of("0123456789");
  stored[pos] = stored[pos] == '1' ? '2' : '1';
  io::write_atomic(csv, stored);
  EXPECT_FALSE(cache.load(m).has_value());
  const Spectrum again = cache.get_or_compute(m, &hit);
  EXPECT_FALSE(hit);
  EXPECT_EQ(io::spectrum_table(again).render(), body);

  // schema mismatch forces recomputation
  const fs::path meta = dir / (cache.key(m) + ".json");
  auto j = nlohmann::json::parse(io::read_file(meta));
  j["schema_version"] = io::kSchemaVersion + 1;
  io::write_atomic(meta, j.dump());
  EXPECT_FALSE(cache.load(m).has_value());
  fs::remove_all(dir);
}

TEST(Cache, HitSkipsRecomputation) {
  const fs::path dir = scratch("cache_timing");
  const SpectrumCache cache(dir);
  const ChainModel cold_model(18, 9, kLazy);
  const auto t0 = std::chrono::steady_clock::now();
  cache.get_or_compute(cold_model, nullptr);
  const auto t1 = std::chrono::steady_clock::now();
  const ChainModel warm_model(18, 9, kLazy);
  bool hit = false;
  cache.get_or_compute(warm_model, &hit);
  const auto t2 = std::chrono::steady_clock::now();
  EXPECT_TRUE(hit);
  EXPECT_LT(t2 - t1, t1 - t0);
  fs::remove_all(dir);
}

TEST(Cli, GapJsonFields) {
  const fs::path dir = scratch("cli_gap");
  ASSERT_EQ(run_cli("gap --n 12 --k 6 --p \"-1:0.25,0:0.5,1:0.25\"", dir / "gap.json"), 0);
  const auto j = nlohmann::json::parse(io::read_file(dir / "gap.json"));
  EXPECT_TRUE(j.contains("gamma_exact"));
  EXPECT_TRUE(j.contains("gamma_formula"));
  EXPECT_NEAR(j["gamma_exact"].get<double>(), build_constant(12, 6, kLazy).gamma(), 1e-15);
  fs::remove_all(dir);
}

TEST(Cli, SpectrumRowsAreOrbits) {
  const fs::path dir = scratch("cli_spectrum");
  ASSERT_EQ(run_cli("spectrum --n 5 --k 2 --p 1:1 --out " + (dir / "s.csv").string()), 0);
  std::ifstream f(dir / "s.csv");
  std::string line;
  int lines = 0;
  while (std::getline(f, line)) ++lines;
  EXPECT_EQ(lines, 2 + static_cast<int>(orbit_decompose(5, 2).size()));
  fs::remove_all(dir);
}

TEST(Cli, MixAsepCurve) {
  const fs::path dir = scratch("cli_mix");
  ASSERT_EQ(run_cli("mix --model asep --alpha 0 --beta 1 --n 16 --k 8 --tmax 2000 --out " + (dir / "m.csv").string()), 0);
  std::ifstream f(dir / "m.csv");
  std::string header, columns;
  std::getline(f, header);
  std::getline(f, columns);
  EXPECT_EQ(header.rfind("# {", 0), 0u);
  EXPECT_EQ(columns, "t,tv,l2_sq,lower_bound");
  int rows = 0;
  for (std::string l; std::getline(f, l);) ++rows;
  EXPECT_EQ(rows, 2001);
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("gap --n 12 --k 6 --p 0:1"), 2);
  EXPECT_EQ(run_cli("gap --n 12 --k 12"), 2);
  EXPECT_EQ(run_cli("spectrum --n 30 --k 15"), 3);
  EXPECT_EQ(run_cli("spectrum --n 12 --k 6 --cap 100"), 3);
  EXPECT_EQ(run_cli("saddle --n 40 --k 20 --l 1"), 0);
}

TEST(Cli, DeterministicArtifacts) {
  const fs::path dir = scratch("cli_det");
  const std::string args = "sample --n 10 --k 4 --seed 1234 --steps 500 --start ground";
  ASSERT_EQ(run_cli(args + " --out " + (dir / "a.csv").string()), 0);
  ASSERT_EQ(run_cli(args + " --out " + (dir / "b.csv").string()), 0);
  EXPECT_EQ(io::read_file(dir / "a.csv"), io::read_file(dir / "b.csv"));
  ASSERT_EQ(run_cli("sample --n 10 --k 4 --seed 1235 --steps 500 --start ground --out " + (dir / "c.csv").string()), 0);
  EXPECT_NE(io::read_file(dir / "a.csv"), io::read_file(dir / "c.csv"));
  fs::remove_all(dir);
}

TEST(Cli, CacheDirectoryIsUsed) {
  const fs::path dir = scratch("cli_cache");
  const std::string args = "spectrum --n 10 --k 5 --cache-dir " + (dir / "c").string();
  ASSERT_EQ(run_cli(args + " --out " + (dir / "cold.csv").string()), 0);
  ASSERT_EQ(run_cli(args + " --out " + (dir / "warm.csv").string()), 0);
  EXPECT_EQ(io::read_file(dir / "cold.csv"), io::read_file(dir / "warm.csv"));
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "c")) ++entries;
  EXPECT_EQ(entries, 2);
  fs::remove_all(dir);
}
