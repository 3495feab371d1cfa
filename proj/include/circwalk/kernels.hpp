#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "circwalk/config_space.hpp"

namespace circwalk {

// Probability vector over signed jump sizes l.
class StepDistribution {
 public:
  StepDistribution() : StepDistribution(std::map<int, double>{{0, 1.0}}) {}
  explicit StepDistribution(std::map<int, double> weights);

  // "-1:0.25,0:0.5,1:0.25"
  static StepDistribution parse(const std::string& text);

  const std::map<int, double>& weights() const { return w_; }
  double operator()(int l) const;
  int max_abs() const;
  double mean() const;
  double mean_abs() const;
  double variance() const;
  // gcd of |l| over the nonzero support; 0 if the support is {0}.
  int support_gcd() const;
  std::complex<double> fourier(double theta) const;
  // Canonical text form, used for hashing and headers.
  std::string to_string() const;

  bool operator==(const StepDistribution&) const = default;

 private:
  std::map<int, double> w_;
};

using SparseKernel = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Block {
  int start;  // lowest site of the run
  int length;
  bool operator==(const Block&) const = default;
};

// Maximal cyclic runs of occupied sites, ordered by descending start.
std::vector<Block> blocks(const CircleConfig& c);

// Targets reached by moving exactly l particles one step in `direction` (+1 anti-clockwise).
std::vector<CircleConfig> enumerate_moves(const CircleConfig& c, int l, int direction);

// e_{|l|}(xi(I0)), the Perron eigenvalue of A^(l).
double perron_eigenvalue(int n, int k, int l);

// Rows are source states, columns targets, both indexed by StateSpace order.
SparseKernel adjacency(const StateSpace& space, int l);
SparseKernel doob_kernel(const StateSpace& space, int l);
SparseKernel mixture_kernel(const StateSpace& space, const StepDistribution& p);

struct Spectrum;

// (n, k, p) with lazily built, shared caches. Caches are dropped when p changes.
class ChainModel {
 public:
  ChainModel(int n, int k, StepDistribution p, std::uint64_t cap = kDefaultCap);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t cap() const { return cap_; }
  const StepDistribution& p() const { return p_; }
  void set_distribution(StepDistribution p);

  const StateSpace& space() const;
  const SparseKernel& kernel() const;
  const Spectrum& spectrum() const;
  double gamma() const;

  // Free-form model description and predictions attached by the builders.
  std::string label;
  std::map<std::string, double> metadata;
  std::vector<std::string> warnings;

 private:
  struct Cache;
  int n_, k_;
  std::uint64_t cap_;
  StepDistribution p_;
  std::shared_ptr<Cache> cache_;
};

struct AssumptionAudit {
  double eta_hat = 0;
  double mean_abs = 0;      // E|X|, the lower side of delta
  double mean_abs_over_k = 0;
  double delta_hat = 0;     // min(E|X|, 1 - E|X|/k)
  double Kg_hat = 0;
  double Ka_hat = 0;
  bool gcd_ok = false;
  bool reducible = false;
};

AssumptionAudit audit_assumptions(const StepDistribution& p, int n, int k);

// Reproducible stream: one 64-bit seed plus a stream id seeds an independent engine.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);
  double uniform();  // [0, 1)

 private:
  std::mt19937_64 engine_;
};

CircleConfig step_sample(RngStream& rng, const CircleConfig& c, const ChainModel& model);
// Returns t+1 states, the start included.
std::vector<CircleConfig> simulate(RngStream& rng, const ChainModel& model, const CircleConfig& start, int t);

// Inverse-CDF sampler over the enumerated stationary measure.
class StationarySampler {
 public:
  explicit StationarySampler(const StateSpace& space);
  CircleConfig draw(RngStream& rng) const;

 private:
  const StateSpace* space_;
  std::vector<double> cdf_;
};

CircleConfig sample_stationary(RngStream& rng, const StateSpace& space);

}  // namespace circwalk
