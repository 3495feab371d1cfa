#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "circwalk/kernels.hpp"

namespace circwalk {

double tv_distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

struct MixingCurve {
  std::vector<int> times;
  std::vector<double> tv;
  // Computed from the rows of P^t started at `start`; for the worst-case curve this is the I0 row.
  std::vector<double> l2_sq;
  std::vector<double> lower_bound;
  std::optional<CircleConfig> start;  // empty means the worst case over orbit representatives
};

// start = nullopt selects the worst case over point masses (one per shift orbit).
MixingCurve exact_tv_curve(const ChainModel& model, int t_max, const std::optional<CircleConfig>& start);

// Spectral D2^2(t) = sum_{J != I0} d(J)^2 |lambda_J|^{2t}.
std::vector<double> l2_curve(const ChainModel& model, int t_max);
// Direct sum_I mu(I) (P^t(I0,I)/mu(I) - 1)^2 by row propagation.
std::vector<double> l2_curve_direct(const ChainModel& model, int t_max);

// max_t 4 D(t)^2 - D2^2(t)
double domination_check(const MixingCurve& curve);

// Second-moment lower bound on D(t) from the I1 eigenfunction, variances exact.
std::vector<double> lower_bound_curve(const ChainModel& model, int t_max);

struct MixingTime {
  bool reached = false;
  int t = 0;
  double achieved = 1.0;  // D at t (or at t_max if not reached)
};

MixingTime mixing_time(const MixingCurve& curve, double eps);
MixingTime mixing_time(const ChainModel& model, double eps, int t_max);

struct CutoffRow {
  int n, k;
  double gamma;
  std::string centering;  // "log_n" or "log_k"
  double s;
  int t;  // round((log c + s)/gamma), clamped at 0
  double profile_value;
  double profile_floor;  // D at floor(.)
  double profile_ceil;   // D at ceil(.)
};

struct TEpsRow {
  int n, k;
  double gamma;
  double eps;
  MixingTime t_eps;
  double normalized;  // t_eps * gamma / log n
};

struct CutoffSweep {
  std::string family;
  std::vector<CutoffRow> rows;
  std::vector<TEpsRow> t_eps;
};

using ModelFamily = std::function<ChainModel(int n)>;

std::vector<double> default_s_grid();
std::vector<double> default_eps_grid();

// Worst-case start when the space has at most worst_case_limit states, I0 otherwise.
CutoffSweep cutoff_sweep(const ModelFamily& family, const std::string& description, const std::vector<int>& ns,
                         const std::vector<double>& s_grid, const std::vector<double>& eps_grid,
                         std::size_t worst_case_limit = 20000);

struct EnvelopeRow {
  int n;
  double s;
  int t;
  double d2;           // D2 = sqrt(D2^2)
  double gamma_value;  // Gamma(2s - c0) - 1, compared with D2^2
};

struct EnvelopeReport {
  std::vector<EnvelopeRow> rows;
  std::vector<std::pair<int, double>> fitted_c0;  // per n
};

EnvelopeReport gamma_envelope_report(const ModelFamily& family, const std::vector<int>& ns,
                                     const std::vector<double>& s_grid);

}  // namespace circwalk
