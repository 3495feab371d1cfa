#include "circwalk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "circwalk/errors.hpp"
#include "circwalk/spectral.hpp"
#include "circwalk/symmetric.hpp"

namespace circwalk {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

}  // namespace

cd g_of(const CircleConfig& J, cd z) {
  const Eigen::VectorXcd x = xi(J);
  cd s = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) s += std::log(1.0 + z * x(j));
  return s / double(J.k());
}

cd contour_alpha(const CircleConfig& J, int l, double r, int N) {
  if (!(r > 0)) throw InvalidArgument("contour radius must be positive");
  if (N < 1) throw InvalidArgument("need at least one quadrature node");
  if (l < 0 || l > J.k()) throw InvalidArgument("need 0 <= l <= k");
  const Eigen::VectorXcd x = xi(J);
  cd acc = 0.0;
  for (int m = 0; m < N; ++m) {
    const double th = 2.0 * kPi * m / N;
    const cd z = std::polar(r, th);
    cd prod = 1.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const cd f = 1.0 + z * x(j);
      if (std::abs(f) <= 1e-10)
        throw NumericalGuard("contour passes within 1e-10 of the log branch point at theta = " + std::to_string(th));
      prod *= f;
    }
    acc += prod * std::polar(1.0, -l * th);
  }
  return acc / double(N) / std::pow(r, l);
}

double saddle_m(int n, int k, double r) {
  const Eigen::VectorXcd x = xi(CircleConfig::ground(n, k));
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) s += (r * x(j) / (1.0 + r * x(j))).real();
  return s / k;
}

SaddleData solve_r(int n, int k, int l) {
  if (l < 1 || 2 * l > k) throw InvalidArgument("solve_r needs 1 <= l <= k/2");
  if (k >= n) throw InvalidArgument("solve_r needs k < n");
  const double target = double(l) / k;
  double lo = 0.0, hi = 2.0;
  if (saddle_m(n, k, hi) < target) throw NumericalGuard("solve_r: bracket failure on (0, 2]");
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (saddle_m(n, k, mid) < target ? lo : hi) = mid;
  }
  SaddleData d{};
  d.n = n;
  d.k = k;
  d.l = l;
  d.r = 0.5 * (lo + hi);
  if (std::abs(saddle_m(n, k, d.r) - target) > 1e-12) throw NumericalGuard("solve_r: tolerance not reached");

  const Eigen::VectorXcd x = xi(CircleConfig::ground(n, k));
  cd g = 0.0, g1 = 0.0, g2 = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const cd den = 1.0 + d.r * x(j);
    g += std::log(den);
    g1 += x(j) / den;
    g2 -= x(j) * x(j) / (den * den);
  }
  g /= double(k);
  g1 /= double(k);
  g2 /= double(k);
  d.f0 = g.real() - target * std::log(d.r);
  d.curvature = (d.r * g1 + d.r * d.r * g2).real();
  d.approx_alpha_ell = std::exp(k * d.f0) / std::sqrt(2.0 * kPi * k * d.curvature);
  d.r_closed = std::sin(l * kPi / n) / std::sin((k - l) * kPi / n);
  d.r_gap = std::abs(d.r - d.r_closed);
  return d;
}

SaddleApprox saddle_approx(int n, int k, int l) {
  const SaddleData d = solve_r(n, k, l);
  SaddleApprox a;
  a.approx = d.approx_alpha_ell;
  a.exact = elementary(xi(CircleConfig::ground(n, k)), l).real();
  a.rel_error = std::abs(a.approx / a.exact - 1.0);
  a.kr = k * d.r;
  a.small_r_regime = a.kr < 2.0;
  return a;
}

SaddleGamma gamma_from_saddle(int n, int k, int l) {
  const SaddleData d = solve_r(n, k, l);
  const double th = k * kPi / n;
  SaddleGamma g;
  g.formula = 2.0 * kPi / n * d.r * std::sin(th) / (1.0 + d.r * d.r + 2.0 * d.r * std::cos(th));
  const cd z = std::polar(d.r, -th);
  g.im_form = 2.0 * kPi / n * (z / (1.0 + z)).imag();
  g.exact = 1.0 - std::abs(eigenvalue_ell(CircleConfig::first_excited(n, k), l));
  g.rel_gap = std::abs(g.formula / g.exact - 1.0);
  return g;
}

TransportPlan transport_map(const CircleConfig& J) {
  const int k = J.k();
  std::vector<int> x = doubled_atoms(CircleConfig::ground(J.n(), k));
  std::vector<int> T = doubled_atoms(J);
  std::sort(x.begin(), x.end());
  std::sort(T.begin(), T.end());
  TransportPlan plan{0.0, {}, 0};
  for (;;) {
    int pick = -1;
    for (int i = 0; i < k; ++i)
      if (std::abs(T[i]) < std::abs(x[i]) && (pick < 0 || std::abs(x[i]) < std::abs(x[pick]))) pick = i;
    if (pick < 0) break;
    const int y = T[pick];
    const auto it = std::find(x.begin(), x.end(), y);
    if (it == x.end()) throw NumericalGuard("transport exchange: target is not a ground atom");
    const auto j = it - x.begin();
    T[pick] = T[j];
    T[j] = y;
    if (++plan.exchanges > k * k + 1) throw NumericalGuard("transport exchange did not terminate");
  }
  for (int i = 0; i < k; ++i) {
    plan.matching.emplace_back(x[i], T[i]);
    plan.w1 += std::abs(T[i] - x[i]) * kPi / J.n();
  }
  return plan;
}

std::string to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::J1: return "J1";
    case OrbitKind::J2: return "J2";
    case OrbitKind::J3: return "J3";
  }
  return "?";
}

std::vector<OrbitClassification> classify_orbits(int n, int k, double c1, double c2, std::uint64_t cap) {
  if (k < 2 || k >= n) throw InvalidArgument("classification needs 2 <= k < n");
  const double unit = kPi / n;  // radians per doubled step
  const double edge = k * unit;
  const double thr = c2 / std::log(double(n));
  const double j1_mass = c1 * k / std::log(double(k));
  const PartitionBox box = box_from_threshold(n, c2);

  const auto orbits = orbit_decompose(n, k, cap);
  std::vector<OrbitClassification> out;
  for (const auto& o : orbits) out.push_back({o, OrbitKind::J2, 0.0, std::nullopt, std::nullopt, false, false, c1, c2});

  const long m = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long oi = 0; oi < m; ++oi) {
    auto& c = out[oi];
    bool all_j1 = true, all_j2 = true;
    for (const auto& J : c.orbit.members()) {
      const TransportPlan plan = transport_map(J);
      if (J == c.orbit.representative) c.transport_cost = plan.w1;
      double mass = 0.0;
      bool j2 = false, decodes_t = true;
      for (auto [xh, th] : plan.matching) {
        const double ax = std::abs(xh) * unit, at = std::abs(th) * unit;
        if (at > edge + thr) mass += at - ax;
        if (th != xh && std::min(at - edge, edge - ax) >= thr) j2 = true;
        if (ax <= edge - thr && th != xh) decodes_t = false;
        if (at > edge + thr) decodes_t = false;
      }
      all_j1 = all_j1 && mass >= j1_mass;
      all_j2 = all_j2 && j2;
      if (!decodes_t) continue;
      auto tau = partition_pair_from_config(J, box);
      if (!tau) continue;
      if (!c.tau || tau->weight() < c.tau->weight() || (tau->weight() == c.tau->weight() && J < *c.tau_member)) {
        c.tau = tau;
        c.tau_member = J;
      }
    }
    c.j1_predicate = all_j1;
    c.j2_predicate = all_j2;
    c.kind = all_j1 ? OrbitKind::J1 : (c.tau ? OrbitKind::J3 : OrbitKind::J2);
    if (c.kind == OrbitKind::J1) {
      c.tau.reset();
      c.tau_member.reset();
    }
  }
  return out;
}

EstimatesReport estimates_check(int n, int k, int l, double c1, double c2) {
  EstimatesReport rep{};
  rep.n = n;
  rep.k = k;
  rep.l = l;
  const auto I0 = CircleConfig::ground(n, k);
  rep.i1_abs = std::abs(eigenvalue_ell(CircleConfig::first_excited(n, k), l));
  rep.gamma_l = 1.0 - rep.i1_abs;
  rep.asserted_within_band = true;
  for (const auto& c : classify_orbits(n, k, c1, c2)) {
    const double a = std::abs(eigenvalue_ell(c.orbit.representative, l));
    switch (c.kind) {
      case OrbitKind::J1:
        ++rep.j1_count;
        rep.j1_max_abs = std::max(rep.j1_max_abs, a);
        break;
      case OrbitKind::J2:
        ++rep.j2_count;
        break;
      case OrbitKind::J3: {
        ++rep.j3_count;
        if (c.orbit.representative == I0) break;
        rep.j3_max_abs = std::max(rep.j3_max_abs, a);
        const int w = c.tau->weight();
        EstimateRow row{c.orbit.representative, w, a, -std::log(a) / (rep.gamma_l * w), w <= std::log(double(n))};
        if (row.asserted && !(row.ratio >= 0.5 && row.ratio <= 2.0)) rep.asserted_within_band = false;
        rep.j3_rows.push_back(row);
        break;
      }
    }
  }
  return rep;
}

NewtonTruncation newton_truncation(const CircleConfig& J, int l) {
  if (l < 0 || l > J.k()) throw InvalidArgument("need 0 <= l <= k");
  const Eigen::VectorXcd x = xi(J);
  const cd p1 = power_sum(x, 1), p2 = power_sum(x, 2), p3 = power_sum(x, 3);
  const double L = l;
  cd t = ipow(p1, l);
  if (l >= 2) t -= L * (L - 1) / 2.0 * ipow(p1, l - 2) * p2;
  if (l >= 3) t += L * (L - 1) * (L - 2) / 3.0 * ipow(p1, l - 3) * p3;
  if (l >= 4) t += L * (L - 1) * (L - 2) * (L - 3) / 8.0 * ipow(p1, l - 4) * p2 * p2;
  const double fact = std::tgamma(L + 1.0);
  NewtonTruncation out;
  out.exact = elementary(x, l);
  out.truncated = t / fact;
  out.residual = std::abs(out.exact - out.truncated) / (std::abs(ipow(p1, l)) / fact);
  return out;
}

double newton_truncation_check(const CircleConfig& J, int l) { return newton_truncation(J, l).residual; }

double subgroup_bound(int n, int k, int s) {
  const int sp = std::gcd(n, s);
  return sp * std::sin((k + sp) * kPi / n) / std::sin(sp * kPi / n);
}

double subgroup_bound_sharp(int n, int k, int s) {
  const int sp = std::gcd(n, s);
  const int q = k / sp, rho = k - q * sp;
  const cd w = std::polar(1.0, 2.0 * kPi * sp / n);
  cd acc = 0.0;
  for (int i = 0; i < q; ++i) acc += double(sp) * ipow(w, i);
  acc += double(rho) * ipow(w, q);
  return std::abs(acc);
}

SubgroupReport subgroup_bound_check(int n, int k, std::uint64_t cap) {
  if (k >= n) throw InvalidArgument("subgroup bound needs k < n");
  SubgroupReport rep;
  rep.max_slack = -std::numeric_limits<double>::infinity();
  rep.max_slack_sharp = -std::numeric_limits<double>::infinity();
  std::vector<double> bound(k + 1), sharp(k + 1);
  for (int s = 1; s <= k; ++s) {
    bound[s] = subgroup_bound(n, k, s);
    sharp[s] = subgroup_bound_sharp(n, k, s);
  }
  for (const auto& J : enumerate_configs(n, k, cap)) {
    const Eigen::VectorXcd x = xi(J);
    for (int s = 1; s <= k; ++s) {
      const double v = std::abs(power_sum(x, s));
      const double slack = v - bound[s];
      if (slack > 1e-10) ++rep.violations;
      if (slack > rep.max_slack) {
        rep.max_slack = slack;
        rep.worst_config = J;
        rep.worst_s = s;
      }
      const double slack_sharp = v - sharp[s];
      if (slack_sharp > 1e-10) ++rep.violations_sharp;
      rep.max_slack_sharp = std::max(rep.max_slack_sharp, slack_sharp);
    }
  }
  return rep;
}

}  // namespace circwalk
