#include "circwalk/symmetric.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace circwalk {

namespace {

using cd = std::complex<double>;

cd det(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

}  // namespace

cd schur_exponents(const std::vector<int>& exponents, const Eigen::VectorXcd& x) {
  const int k = static_cast<int>(x.size());
  if (static_cast<int>(exponents.size()) != k) throw InvalidArgument("schur: |x| must equal k");
  Eigen::MatrixXcd num(k, k), den(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      num(i, j) = ipow(x(i), exponents[j]);
      den(i, j) = ipow(x(i), k - 1 - j);
    }
  cd d = det(den);
  if (std::abs(d) < 1e-10) throw DegenerateEvaluation("degenerate evaluation: confluent points in Schur denominator");
  return det(num) / d;
}

cd schur(const CircleConfig& I, const Eigen::VectorXcd& x) { return schur_exponents(I.positions(), x); }

double schur_at_ground(const CircleConfig& I) {
  const int k = I.k();
  const double w = std::numbers::pi / I.n();
  double r = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) r *= std::sin(w * (I[i] - I[j])) / std::sin(w * (j - i));
  return r;
}

double vandermonde_abs_sq(const CircleConfig& I) {
  const int k = I.k();
  const double w = std::numbers::pi / I.n();
  double r = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      double s = 2.0 * std::sin(w * (I[i] - I[j]));
      r *= s * s;
    }
  return r;
}

double stationary_weight(const CircleConfig& I) {
  return vandermonde_abs_sq(I) / std::pow(static_cast<double>(I.n()), I.k());
}

double q_binomial_check(int n, int k, int l) {
  if (l < 0 || l > k || k >= n) throw InvalidArgument("q_binomial_check needs 0 <= l <= k < n");
  const cd q = std::polar(1.0, 2.0 * std::numbers::pi / n);
  Eigen::VectorXcd pts(k);
  for (int j = 0; j < k; ++j) pts(j) = ipow(q, j);
  cd lhs = elementary(pts, l);
  cd rhs = ipow(q, l * (l - 1) / 2);
  for (int j = 1; j <= l; ++j) rhs *= (1.0 - ipow(q, k - j + 1)) / (1.0 - ipow(q, j));
  return std::abs(lhs - rhs);
}

double pieri_check(int n, int k, std::uint64_t cap) {
  if (k < 2) throw InvalidArgument("pieri_check needs k >= 2");
  const CircleConfig i1 = CircleConfig::first_excited(n, k);
  const CircleConfig i2 = CircleConfig::second_excited(n, k);
  std::vector<int> i1_prime = CircleConfig::ground(n, k).positions();
  i1_prime.back() = -1;
  double worst = 0.0;
  for (const auto& I : enumerate_configs(n, k, cap)) {
    Eigen::VectorXcd x = xi(I);
    cd r = schur(i1, x) * schur_exponents(i1_prime, x) - schur(i2, x) - 1.0;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace circwalk
