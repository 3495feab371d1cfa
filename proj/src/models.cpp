#include "circwalk/models.hpp"

#include <cmath>
#include <numbers>

#include "circwalk/errors.hpp"
#include "circwalk/spectral.hpp"
#include "circwalk/symmetric.hpp"

namespace circwalk {

namespace {

constexpr double kPi = std::numbers::pi;

void attach_audit(ChainModel& m) {
  const AssumptionAudit a = audit_assumptions(m.p(), m.n(), m.k());
  m.metadata["eta_hat"] = a.eta_hat;
  m.metadata["mean_abs"] = a.mean_abs;
  m.metadata["delta_hat"] = a.delta_hat;
  m.metadata["Kg_hat"] = a.Kg_hat;
  m.metadata["Ka_hat"] = a.Ka_hat;
  m.metadata["gcd_ok"] = a.gcd_ok ? 1.0 : 0.0;
  if (a.Ka_hat <= 1e-12) m.warnings.push_back("Ka_hat ~ 0: |Phi_p| reaches 1 away from 0 (aperiodicity constant degenerate)");
  if (m.p()(0) > 1.0 - 1e-9) m.warnings.push_back("p is numerically a point mass at 0 (degenerate chain)");
}

}  // namespace

ChainModel build_constant(int n, int k, const StepDistribution& p, std::uint64_t cap) {
  const int g = p.support_gcd();
  if (g == 0) throw InvalidArgument("p = delta_0 is reducible");
  if (g != 1) throw InvalidArgument("support gcd is " + std::to_string(g) + ", chain is periodic");
  ChainModel m(n, k, p, cap);
  m.label = "constant p=" + p.to_string();
  attach_audit(m);
  const double ln = std::log(double(n));
  m.metadata["predicted_t_mix"] = n * double(n) * ln / (2.0 * kPi * kPi * p.mean_abs());
  return m;
}

StepDistribution asep_distribution(int n, int k, double alpha, double beta) {
  if (alpha < 0 || beta < 0 || !(alpha + beta > 0)) throw InvalidArgument("need alpha, beta >= 0 and alpha + beta > 0");
  const double eps = 1.0 - (alpha + beta) / k;
  if (!(eps > 0)) throw InvalidArgument("need alpha + beta < k so the killing rate is positive");
  const double s = std::sin(kPi / n), S = std::sin(k * kPi / n);
  const double den = alpha + beta + eps * k * s / S;
  std::map<int, double> w;
  w[-1] = alpha / den;
  w[1] = beta / den;
  w[0] = eps / ((alpha + beta) * S / (k * s) + eps);
  return StepDistribution(std::move(w));
}

ChainModel build_asep(int n, int k, double alpha, double beta, std::uint64_t cap) {
  ChainModel m(n, k, asep_distribution(n, k, alpha, beta), cap);
  m.label = "asep alpha=" + std::to_string(alpha) + " beta=" + std::to_string(beta);
  attach_audit(m);
  const double theta = double(k) / n;
  m.metadata["alpha"] = alpha;
  m.metadata["beta"] = beta;
  m.metadata["epsilon"] = 1.0 - (alpha + beta) / k;
  m.metadata["predicted_t_mix"] = n * double(n) * std::log(double(n)) / (2.0 * kPi * kPi) *
                                  (1.0 + theta * kPi / ((alpha + beta) * std::sin(theta * kPi)));
  return m;
}

StepDistribution dimer_distribution(int n, int k, double a1, double a2) {
  if (!(a1 > 0) || !(a2 > 0)) throw InvalidArgument("dimer weights must be positive");
  const Eigen::VectorXcd x = xi(CircleConfig::ground(n, k));
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(k + 1);
  c(0) = 1.0;
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l >= 1; --l) c(l) = a2 * c(l) + a1 * x(j) * c(l - 1);
    c(0) *= a2;
  }
  const std::complex<double> total = c.sum();
  std::map<int, double> w;
  double sum = 0.0;
  for (int l = 0; l <= k; ++l) {
    const std::complex<double> v = c(l) / total;
    if (std::abs(v.imag()) > 1e-10) throw NumericalGuard("dimer weight has an imaginary part");
    w[l] = std::max(v.real(), 0.0);
    sum += w[l];
  }
  for (auto& [l, v] : w) v /= sum;
  return StepDistribution(std::move(w));
}

ChainModel build_dimer(int n, int k, double a1, double a2, std::uint64_t cap) {
  ChainModel m(n, k, dimer_distribution(n, k, a1, a2), cap);
  m.label = "dimer a1=" + std::to_string(a1) + " a2=" + std::to_string(a2);
  attach_audit(m);
  const DimerCheck d = dimer_check(n, k, a1, a2);
  m.metadata["a1"] = a1;
  m.metadata["a2"] = a2;
  m.metadata["r"] = d.r;
  m.metadata["theta0"] = d.theta0;
  m.metadata["predicted_t_mix"] = d.t_mix_prediction;
  m.metadata["r_alt"] = d.r_alt;
  m.metadata["theta0_alt"] = d.theta0_alt;
  return m;
}

ChainModel build_model(const ModelSpec& spec, std::uint64_t cap) {
  switch (spec.kind) {
    case ModelKind::Constant: return build_constant(spec.n, spec.k, spec.p, cap);
    case ModelKind::Asep: return build_asep(spec.n, spec.k, spec.alpha, spec.beta, cap);
    case ModelKind::Dimer: return build_dimer(spec.n, spec.k, spec.a1, spec.a2, cap);
  }
  throw InvalidArgument("unknown model kind");
}

DimerCheck dimer_check(int n, int k, double a1, double a2) {
  const StepDistribution p = dimer_distribution(n, k, a1, a2);
  const Eigen::VectorXcd x = xi(CircleConfig::ground(n, k));
  DimerCheck d{};
  d.lambda_I1_closed = (a2 + a1 * std::polar(1.0, kPi * (k + 1) / n)) / (a2 + a1 * std::polar(1.0, kPi * (k - 1) / n));
  d.lambda_I1_spectral = mixture_eigenvalue(CircleConfig::first_excited(n, k), p);
  d.lambda_residual = std::abs(d.lambda_I1_closed - d.lambda_I1_spectral);
  for (int j = -256; j < 256; ++j) {
    const double th = kPi * j / 256.0;
    std::complex<double> prod = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) prod *= (a2 + a1 * std::polar(1.0, th) * x(i)) / (a2 + a1 * x(i));
    d.fourier_residual = std::max(d.fourier_residual, std::abs(p.fourier(th) - prod));
  }
  const double ln = std::log(double(n));
  const std::complex<double> z = a2 + a1 * std::polar(1.0, kPi * k / n);
  d.r = std::abs(z);
  d.theta0 = std::arg(z);
  d.gamma_asymptotic = 4.0 * kPi / n * (a1 / d.r) * std::sin(kPi * k / n - d.theta0);
  d.t_mix_prediction = n * d.r * ln / (4.0 * kPi * a1 * std::sin(kPi * k / n - d.theta0));
  d.log_n_over_gamma_asymptotic = ln / d.gamma_asymptotic;
  const std::complex<double> z_alt = a2 + a1 * std::polar(1.0, kPi / n);
  d.r_alt = std::abs(z_alt);
  d.theta0_alt = std::arg(z_alt);
  d.gamma_asymptotic_alt = 4.0 * kPi / n * (a1 / d.r_alt) * std::sin(kPi * k / n - d.theta0_alt);
  d.gamma_exact = 1.0 - std::abs(d.lambda_I1_spectral);
  return d;
}

}  // namespace circwalk
