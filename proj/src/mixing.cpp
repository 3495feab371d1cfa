#include "circwalk/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circwalk/errors.hpp"
#include "circwalk/spectral.hpp"
#include "circwalk/symmetric.hpp"

namespace circwalk {

double tv_distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw InvalidArgument("tv_distance: dimension mismatch");
  if (std::abs(a.sum() - 1.0) > 1e-10 || std::abs(b.sum() - 1.0) > 1e-10)
    throw InvalidArgument("tv_distance: inputs must be probability vectors");
  return 0.5 * (a - b).cwiseAbs().sum();
}

namespace {

Eigen::VectorXd stationary_vector(const StateSpace& space) {
  Eigen::VectorXd mu(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) mu(i) = stationary_weight(space[i]);
  return mu;
}

struct RowRun {
  std::vector<double> tv, l2;
};

// Propagates the deviation v_t - mu instead of v_t, so small distances keep their relative accuracy.
// The stationary component is projected out each step to stop rounding from accumulating there.
RowRun propagate(const SparseKernel& P, const Eigen::VectorXd& mu, std::size_t start, int t_max) {
  RowRun r;
  Eigen::VectorXd d = -mu;
  d(start) += 1.0;
  for (int t = 0; t <= t_max; ++t) {
    if (t > 0) {
      d = P.transpose() * d;
      d -= d.sum() * mu;
    }
    r.tv.push_back(0.5 * d.cwiseAbs().sum());
    r.l2.push_back((d.array().square() / mu.array()).sum());
  }
  return r;
}

}  // namespace

MixingCurve exact_tv_curve(const ChainModel& model, int t_max, const std::optional<CircleConfig>& start) {
  if (t_max < 0) throw InvalidArgument("t_max must be >= 0");
  const StateSpace& space = model.space();
  const SparseKernel& P = model.kernel();
  const Eigen::VectorXd mu = stationary_vector(space);

  MixingCurve c;
  c.start = start;
  for (int t = 0; t <= t_max; ++t) c.times.push_back(t);

  if (start) {
    RowRun r = propagate(P, mu, space.index_of(*start), t_max);
    c.tv = std::move(r.tv);
    c.l2_sq = std::move(r.l2);
  } else {
    const auto orbits = orbit_decompose(model.n(), model.k(), model.cap());
    std::vector<double> worst(t_max + 1, 0.0);
    const long m = static_cast<long>(orbits.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long o = 0; o < m; ++o) {
      RowRun r = propagate(P, mu, space.index_of(orbits[o].representative), t_max);
#pragma omp critical
      {
        for (int t = 0; t <= t_max; ++t) worst[t] = std::max(worst[t], r.tv[t]);
        if (o == 0) c.l2_sq = r.l2;  // first representative is I0
      }
    }
    c.tv = std::move(worst);
  }
  if (model.k() >= 2 && model.k() + 2 <= model.n()) {
    c.lower_bound = lower_bound_curve(model, t_max);
  } else {
    c.lower_bound.assign(t_max + 1, 0.0);
  }
  return c;
}

std::vector<double> l2_curve(const ChainModel& model, int t_max) {
  const Spectrum& sp = model.spectrum();
  const CircleConfig g = CircleConfig::ground(model.n(), model.k());
  std::vector<double> w, r2;  // d^2 and |lambda|^2 per J != I0
  for (const auto& e : sp.entries)
    for (int t = 0; t < e.orbit.size; ++t) {
      if (t == 0 && e.orbit.representative == g) continue;
      w.push_back(e.d * e.d);
      r2.push_back(std::norm(e.lambda_at_shift(t, sp.p)));
    }
  std::vector<double> out(t_max + 1, 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    double term = w[j];
    for (int t = 0; t <= t_max; ++t) {
      out[t] += term;
      term *= r2[j];
    }
  }
  return out;
}

std::vector<double> l2_curve_direct(const ChainModel& model, int t_max) {
  const StateSpace& space = model.space();
  return propagate(model.kernel(), stationary_vector(space), space.ground_index(), t_max).l2;
}

double domination_check(const MixingCurve& curve) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < curve.tv.size(); ++t)
    worst = std::max(worst, 4.0 * curve.tv[t] * curve.tv[t] - curve.l2_sq[t]);
  return worst;
}

std::vector<double> lower_bound_curve(const ChainModel& model, int t_max) {
  const int n = model.n(), k = model.k();
  if (k < 2) throw InvalidArgument("lower bound needs k >= 2");
  const double l1 = std::abs(mixture_eigenvalue(CircleConfig::first_excited(n, k), model.p()));
  const double l2 = lambda_I2(model).direct.real();
  const double s1 = schur_at_ground(CircleConfig::first_excited(n, k));
  const double s2 = schur_at_ground(CircleConfig::second_excited(n, k));
  const double var_mu = 1.0 / (s1 * s1);
  std::vector<double> out;
  for (int t = 0; t <= t_max; ++t) {
    const double num = ipow(l1, 2 * t);
    const double var_t = std::max(0.0, (ipow(l2, t) * s2 + 1.0) / (s1 * s1) - num);
    const double den = 2.0 * var_t + 2.0 * var_mu + num;
    out.push_back(den > 0 ? num / den : 0.0);
  }
  return out;
}

MixingTime mixing_time(const MixingCurve& curve, double eps) {
  if (curve.tv.empty()) throw InvalidArgument("empty curve");
  if (eps >= 1.0) return {true, 0, curve.tv.front()};
  if (curve.tv.back() > eps) return {false, curve.times.back(), curve.tv.back()};
  std::size_t lo = 0, hi = curve.tv.size() - 1;  // tv[hi] <= eps
  if (curve.tv[0] <= eps) return {true, curve.times[0], curve.tv[0]};
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    (curve.tv[mid] <= eps ? hi : lo) = mid;
  }
  return {true, curve.times[hi], curve.tv[hi]};
}

MixingTime mixing_time(const ChainModel& model, double eps, int t_max) {
  const bool small = binomial(model.n(), model.k()) <= 20000;
  std::optional<CircleConfig> start;
  if (!small) start = CircleConfig::ground(model.n(), model.k());
  return mixing_time(exact_tv_curve(model, t_max, start), eps);
}

std::vector<double> default_s_grid() {
  std::vector<double> s;
  for (int i = -8; i <= 8; ++i) s.push_back(0.5 * i);
  return s;
}

std::vector<double> default_eps_grid() { return {0.5, 0.25, 0.1, 0.05}; }

CutoffSweep cutoff_sweep(const ModelFamily& family, const std::string& description, const std::vector<int>& ns,
                         const std::vector<double>& s_grid, const std::vector<double>& eps_grid,
                         std::size_t worst_case_limit) {
  CutoffSweep sweep;
  sweep.family = description;
  const double s_max = s_grid.empty() ? 0.0 : *std::max_element(s_grid.begin(), s_grid.end());
  for (int n : ns) {
    ChainModel model = family(n);
    const int k = model.k();
    const double gamma = model.gamma();
    if (!(gamma > 0)) throw InvalidArgument("cutoff sweep needs a positive spectral gap");
    const double logn = std::log(double(n));
    const int t_max = static_cast<int>(std::ceil(std::max((logn + s_max) / gamma, 3.0 * logn / gamma))) + 1;
    std::optional<CircleConfig> start;
    if (binomial(n, k) > worst_case_limit) start = CircleConfig::ground(n, k);
    const MixingCurve curve = exact_tv_curve(model, t_max, start);
    auto at = [&](double t) { return curve.tv[std::clamp<long>(std::lround(t), 0, t_max)]; };
    for (const auto& [name, centre] : {std::pair<std::string, double>{"log_n", logn}, {"log_k", std::log(double(k))}}) {
      for (double s : s_grid) {
        const double t = std::max(0.0, (centre + s) / gamma);
        sweep.rows.push_back({n, k, gamma, name, s, static_cast<int>(std::lround(std::min(t, double(t_max)))), at(t),
                              at(std::floor(t)), at(std::ceil(t))});
      }
    }
    for (double eps : eps_grid) {
      MixingTime m = mixing_time(curve, eps);
      sweep.t_eps.push_back({n, k, gamma, eps, m, m.t * gamma / logn});
    }
  }
  return sweep;
}

EnvelopeReport gamma_envelope_report(const ModelFamily& family, const std::vector<int>& ns,
                                     const std::vector<double>& s_grid) {
  EnvelopeReport rep;
  for (int n : ns) {
    ChainModel model = family(n);
    const double gamma = model.gamma();
    const double logn = std::log(double(n));
    int t_max = 0;
    for (double s : s_grid) t_max = std::max<int>(t_max, std::lround(std::max(0.0, (logn + s) / gamma)));
    const auto l2 = l2_curve(model, t_max);
    std::vector<std::pair<double, double>> pts;  // (s, D2)
    for (double s : s_grid) {
      const int t = static_cast<int>(std::lround(std::max(0.0, (logn + s) / gamma)));
      pts.emplace_back(s, std::sqrt(std::max(0.0, l2[t])));
      rep.rows.push_back({n, s, t, pts.back().second, 0.0});
    }
    // Fit log D2^2 ~ log(Gamma(2s - c0) - 1) over s >= 0; the empty partition matches J = I0,
    // which D2 excludes.
    double best = std::numeric_limits<double>::infinity(), best_c0 = 0.0;
    for (int i = -1000; i <= -5; ++i) {
      const double c0 = 0.01 * i;
      double err = 0.0;
      int used = 0;
      for (auto [s, d2] : pts) {
        if (s < 0.0 || d2 <= 0.0) continue;
        const double e = 2.0 * std::log(d2) - std::log(gamma_function(2.0 * s - c0) - 1.0);
        err += e * e;
        ++used;
      }
      if (used > 0 && err < best) {
        best = err;
        best_c0 = c0;
      }
    }
    rep.fitted_c0.emplace_back(n, best_c0);
    for (auto& row : rep.rows)
      if (row.n == n)
        row.gamma_value = 2.0 * row.s - best_c0 > 0 ? gamma_function(2.0 * row.s - best_c0) - 1.0
                                                    : std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace circwalk
