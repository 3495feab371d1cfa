#include "circwalk/spectral.hpp"

#include <cmath>
#include <numbers>

#include "circwalk/errors.hpp"
#include "circwalk/symmetric.hpp"
#include "model_cache.hpp"

namespace circwalk {

namespace {

constexpr double kPi = std::numbers::pi;

// e_0..e_k of xi(J) divided by the same for I0.
std::vector<cplx> ratios_all(const CircleConfig& J) {
  const Eigen::VectorXcd eJ = elementary_all(xi(J));
  const Eigen::VectorXcd e0 = elementary_all(xi(CircleConfig::ground(J.n(), J.k())));
  std::vector<cplx> r(J.k() + 1);
  for (int l = 0; l <= J.k(); ++l) {
    if (std::abs(e0(l)) < 1e-300) throw NumericalGuard("e_l(xi(I0)) vanishes");
    r[l] = eJ(l) / e0(l).real();
  }
  return r;
}

cplx mix(const std::vector<cplx>& ratios, const StepDistribution& p, int n, int t) {
  cplx s = 0.0;
  for (auto& [l, w] : p.weights()) {
    cplx lam = l >= 0 ? ratios[l] : std::conj(ratios[-l]);
    s += w * (t == 0 ? lam : std::polar(1.0, 2.0 * kPi * t * l / n) * lam);
  }
  return s;
}

}  // namespace

cplx eigenvalue_ell(const CircleConfig& J, int l) {
  if (std::abs(l) > J.k()) throw InvalidArgument("|l| must not exceed k");
  const cplx num = elementary(xi(J), std::abs(l));
  const cplx den = elementary(xi(CircleConfig::ground(J.n(), J.k())), std::abs(l));
  if (std::abs(den) < 1e-300) throw NumericalGuard("e_l(xi(I0)) vanishes");
  const cplx r = num / den.real();
  return l < 0 ? std::conj(r) : r;
}

cplx lambda_I1_closed_form(int n, int k, int l) {
  if (std::abs(l) > k || k >= n) throw InvalidArgument("need |l| <= k < n");
  const cplx w = std::polar(1.0, 2.0 * kPi / n);
  const int a = std::abs(l);
  const cplx v = 1.0 - ipow(w, k - a) * (1.0 - w) * (1.0 - ipow(w, a)) / (1.0 - ipow(w, k));
  return l < 0 ? std::conj(v) : v;
}

cplx mixture_eigenvalue(const CircleConfig& J, const StepDistribution& p) {
  if (p.max_abs() > J.k()) throw InvalidArgument("step support exceeds [-k, k]");
  return mix(ratios_all(J), p, J.n(), 0);
}

cplx SpectrumEntry::lambda_ell(int l) const {
  return l >= 0 ? lambda_by_ell.at(l) : std::conj(lambda_by_ell.at(-l));
}

cplx SpectrumEntry::lambda_at_shift(int t, const StepDistribution& p) const {
  return mix(lambda_by_ell, p, orbit.representative.n(), t);
}

std::vector<ExpandedEigen> Spectrum::expand() const {
  std::vector<ExpandedEigen> out;
  for (const auto& e : entries)
    for (int t = 0; t < e.orbit.size; ++t)
      out.push_back({shift(e.orbit.representative, t), e.lambda_at_shift(t, p), e.d});
  return out;
}

Spectrum full_spectrum(const ChainModel& model) {
  Spectrum s;
  s.n = model.n();
  s.k = model.k();
  s.p = model.p();
  for (auto& o : orbit_decompose(s.n, s.k, model.cap())) s.entries.push_back({o, {}, 0.0, 0.0});
  const long count = static_cast<long>(s.entries.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) {
    auto& e = s.entries[i];
    e.lambda_by_ell = ratios_all(e.orbit.representative);
    e.lambda_mixture = mix(e.lambda_by_ell, s.p, s.n, 0);
    e.d = schur_at_ground(e.orbit.representative);
  }
  return s;
}

const Spectrum& ChainModel::spectrum() const {
  {
    std::lock_guard lock(cache_->mutex);
    if (cache_->spectrum) return *cache_->spectrum;
  }
  auto sp = std::make_unique<Spectrum>(full_spectrum(*this));
  std::lock_guard lock(cache_->mutex);
  if (!cache_->spectrum) cache_->spectrum = std::move(sp);
  return *cache_->spectrum;
}

double ChainModel::gamma() const {
  std::lock_guard lock(cache_->mutex);
  if (!cache_->gamma)
    cache_->gamma = 1.0 - std::abs(mixture_eigenvalue(CircleConfig::first_excited(n_, k_), p_));
  return *cache_->gamma;
}

cplx eigenvector(const CircleConfig& J, const CircleConfig& I) { return std::conj(schur(J, xi(I))); }

double orthonormality_check(int n, int k) {
  StateSpace space(n, k, 2000);
  const auto N = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXcd F(N, N);
  Eigen::VectorXd mu(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    mu(i) = stationary_weight(space[i]);
    const Eigen::VectorXcd x = xi(space[i]);
    for (Eigen::Index j = 0; j < N; ++j) F(j, i) = std::conj(schur(space[j], x));
  }
  const Eigen::MatrixXcd G = F * mu.asDiagonal() * F.adjoint();
  return (G - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
}

GapReport gap(const ChainModel& model) {
  const int n = model.n(), k = model.k();
  GapReport g;
  const auto I1 = CircleConfig::first_excited(n, k);
  const auto r = ratios_all(I1);
  g.gamma_exact = 1.0 - std::abs(mix(r, model.p(), n, 0));
  const double s = std::sin(kPi / n) / std::sin(k * kPi / n);
  for (int l = -k; l <= k; ++l) {
    const int a = std::abs(l);
    g.gamma_ell[l] = 1.0 - std::abs(r[a]);
    g.gamma_ell_formula[l] = 2.0 * s * std::sin(a * kPi / n) * std::sin((k - a) * kPi / n);
  }
  for (auto& [l, w] : model.p().weights()) {
    g.gamma_formula += w * g.gamma_ell_formula[l];
    g.gamma_avg += w * g.gamma_ell[l];
  }
  return g;
}

LambdaI2 lambda_I2(const ChainModel& model) {
  const int n = model.n(), k = model.k();
  LambdaI2 out;
  out.direct = mixture_eigenvalue(CircleConfig::second_excited(n, k), model.p());
  double acc = 0.0;
  for (auto& [l, w] : model.p().weights()) {
    const int a = std::abs(l);
    acc += w * std::sin(a * kPi / n) * std::sin((k - a) * kPi / n);
  }
  out.closed_form = 1.0 - 4.0 * std::sin(kPi / n) / std::sin((k - 1) * kPi / n) * acc;
  return out;
}

HeatKernel::HeatKernel(const ChainModel& model) : model_(&model), eig_(model.spectrum().expand()) {
  const StateSpace& space = model.space();
  const auto N = static_cast<Eigen::Index>(space.size());
  f_.resize(N, N);
  std::vector<Eigen::VectorXcd> xs(N);
  for (Eigen::Index i = 0; i < N; ++i) xs[i] = xi(space[i]);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) f_(j, i) = std::conj(schur(eig_[j].J, xs[i]));
}

Eigen::VectorXd HeatKernel::density_row(int t) const {
  const auto N = static_cast<Eigen::Index>(eig_.size());
  const auto i0 = static_cast<Eigen::Index>(model_->space().ground_index());
  Eigen::VectorXcd c(N);
  for (Eigen::Index j = 0; j < N; ++j) c(j) = ipow(eig_[j].lambda, t) * f_(j, i0);
  return (f_.transpose() * c).real();
}

double HeatKernel::density(int t, const CircleConfig& I) const {
  return density_row(t)(static_cast<Eigen::Index>(model_->space().index_of(I)));
}

double heat_kernel_density(const ChainModel& model, int t, const CircleConfig& I) {
  return HeatKernel(model).density(t, I);
}

SubgaussianGap subgaussian_gap_estimate(const ChainModel& model) {
  const GapReport g = gap(model);
  const double gamma = g.gamma_exact;
  std::vector<std::pair<double, double>> dev;  // (weight, gamma_X - gamma)
  bool degenerate = true;
  for (auto& [l, w] : model.p().weights()) {
    double y = g.gamma_ell.at(l) - gamma;
    dev.emplace_back(w, y);
    degenerate = degenerate && std::abs(y) < 1e-15;
  }
  SubgaussianGap out{0.0, 0.0};
  if (degenerate) return out;
  auto psi = [&](double th) {
    double s = 0.0;
    for (auto [w, y] : dev) s += w * std::exp(y * y / (th * th));
    return s;
  };
  double lo = 0.0, hi = 1e-6;
  while (psi(hi) > 2.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (psi(mid) > 2.0 ? lo : hi) = mid;
  }
  out.parameter = hi;
  out.ratio = gamma > 0 ? hi * model.k() / std::sqrt(gamma) : 0.0;
  return out;
}

}  // namespace circwalk
