#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "circwalk/config_space.hpp"
#include "circwalk/errors.hpp"

namespace circwalk {

template <typename Derived>
using ColumnOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;

// Coefficients e_0..e_k of prod_j (1 + z x_j).
template <typename Derived>
ColumnOf<Derived> elementary_all(const Eigen::MatrixBase<Derived>& x) {
  using S = typename Derived::Scalar;
  const Eigen::Index k = x.size();
  ColumnOf<Derived> e = ColumnOf<Derived>::Zero(k + 1);
  e(0) = S(1);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index l = j + 1; l >= 1; --l) e(l) += x(j) * e(l - 1);
  return e;
}

template <typename Derived>
typename Derived::Scalar elementary(const Eigen::MatrixBase<Derived>& x, int l) {
  using S = typename Derived::Scalar;
  if (l < 0 || l > x.size()) throw InvalidArgument("elementary: l out of range");
  // O(k l): only track coefficients up to degree l
  ColumnOf<Derived> e = ColumnOf<Derived>::Zero(l + 1);
  e(0) = S(1);
  for (Eigen::Index j = 0; j < x.size(); ++j)
    for (Eigen::Index m = std::min<Eigen::Index>(j + 1, l); m >= 1; --m) e(m) += x(j) * e(m - 1);
  return e(l);
}

// Integer power by repeated squaring; negative exponents invert.
template <typename S>
S ipow(S z, int e) {
  if (e < 0) return S(1) / ipow(z, -e);
  S r(1);
  while (e) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

template <typename Derived>
typename Derived::Scalar power_sum(const Eigen::MatrixBase<Derived>& x, int s) {
  using S = typename Derived::Scalar;
  if (s < 1) throw InvalidArgument("power_sum: s must be >= 1");
  return x.unaryExpr([s](S v) { return ipow(v, s); }).sum();
}

// Newton recursion l e_l = sum_i (-1)^{i-1} e_{l-i} p_i.
template <typename Derived>
typename Derived::Scalar elementary_via_newton(const Eigen::MatrixBase<Derived>& x, int l) {
  using S = typename Derived::Scalar;
  if (l < 0 || l > x.size()) throw InvalidArgument("elementary_via_newton: l out of range");
  std::vector<S> p(l + 1), e(l + 1);
  ColumnOf<Derived> xp = ColumnOf<Derived>::Ones(x.size());
  for (int i = 1; i <= l; ++i) {
    xp = xp.cwiseProduct(x.derived());
    p[i] = xp.sum();
  }
  e[0] = S(1);
  for (int m = 1; m <= l; ++m) {
    S acc(0);
    for (int i = 1; i <= m; ++i) acc += (i % 2 ? S(1) : S(-1)) * e[m - i] * p[i];
    e[m] = acc / S(m);
  }
  return e[l];
}

// Bialternant det(x_i^{a_j}) / det(x_i^{k-j}) for an arbitrary (possibly negative) exponent list.
std::complex<double> schur_exponents(const std::vector<int>& exponents, const Eigen::VectorXcd& x);
std::complex<double> schur(const CircleConfig& I, const Eigen::VectorXcd& x);

// S_I(xi(I0)) as a positive sine product.
double schur_at_ground(const CircleConfig& I);

double vandermonde_abs_sq(const CircleConfig& I);
// |V(xi(I))|^2 / n^k
double stationary_weight(const CircleConfig& I);

double q_binomial_check(int n, int k, int l);
double pieri_check(int n, int k, std::uint64_t cap = kDefaultCap);

}  // namespace circwalk
