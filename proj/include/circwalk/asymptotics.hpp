#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circwalk/config_space.hpp"

namespace circwalk {

// (1/k) sum_j log(1 + z xi_j(J)), principal branch.
std::complex<double> g_of(const CircleConfig& J, std::complex<double> z);

// Trapezoid rule on N nodes for (1/2pi) int prod_j(1 + r e^{i th} xi_j) r^{-l} e^{-i l th} dth.
std::complex<double> contour_alpha(const CircleConfig& J, int l, double r, int N = 4096);

struct SaddleData {
  int n, k, l;
  double r;          // m(r) = l/k with m(z) = z g'(z) at I0
  double f0;         // g(r) - (l/k) log r
  double curvature;  // r g'(r) + r^2 g''(r)
  double approx_alpha_ell;
  double r_closed;   // sin(l pi/n) / sin((k-l) pi/n)
  double r_gap;      // |r - r_closed|
};

// m(z) = z g'(z) for xi(I0), real for real z.
double saddle_m(int n, int k, double r);
SaddleData solve_r(int n, int k, int l);

struct SaddleApprox {
  double approx;
  double exact;
  double rel_error;
  double kr;
  bool small_r_regime;  // kr < 2: leading-order approximation not expected to be accurate
};

SaddleApprox saddle_approx(int n, int k, int l);

struct SaddleGamma {
  double formula;  // (2 pi/n) r sin(k pi/n) / (1 + r^2 + 2 r cos(k pi/n))
  double im_form;  // (2 pi/n) Im(r e^{-ik pi/n} / (1 + r e^{-ik pi/n})), literal
  double exact;    // 1 - |lambda^(l)_{I1}|
  double rel_gap;  // |formula/exact - 1|
};

SaddleGamma gamma_from_saddle(int n, int k, int l);

struct TransportPlan {
  double w1;  // sum over atoms of |T(x) - x|, radians
  // (x, T(x)) as doubled steps: atom h sits at angle h*pi/n
  std::vector<std::pair<int, int>> matching;
  int exchanges;
};

// Sorted 1-D matching of I0's atoms onto J's, then the exchange pass enforcing |T(x)| >= |x|.
TransportPlan transport_map(const CircleConfig& J);

enum class OrbitKind { J1, J2, J3 };
std::string to_string(OrbitKind k);

struct OrbitClassification {
  OrbitClass orbit;
  OrbitKind kind;
  double transport_cost;  // W1 of the representative
  std::optional<PartitionPair> tau;
  std::optional<CircleConfig> tau_member;  // member realising tau
  bool j1_predicate;
  bool j2_predicate;
  double c1, c2;
};

// J1 if the J1 predicate holds; J3 if some member decodes under the thresholds; J2 otherwise.
std::vector<OrbitClassification> classify_orbits(int n, int k, double c1 = 1.0, double c2 = 10.0,
                                                 std::uint64_t cap = kDefaultCap);

struct EstimateRow {
  CircleConfig representative;
  int tau_weight;
  double abs_lambda;
  double ratio;  // -log|lambda^(l)| / (gamma_l |tau|)
  bool asserted;  // |tau| <= log n
};

struct EstimatesReport {
  int n, k, l;
  double gamma_l;
  std::vector<EstimateRow> j3_rows;
  double j1_max_abs = 0;        // max |lambda^(l)| over J1 orbits (0 if none)
  double j3_max_abs = 0;        // over J3 orbits other than I0's
  double i1_abs = 0;            // |lambda^(l)_{I1}|
  std::size_t j1_count = 0, j2_count = 0, j3_count = 0;
  bool asserted_within_band;    // all asserted rows in [0.5, 2]
};

EstimatesReport estimates_check(int n, int k, int l, double c1 = 1.0, double c2 = 10.0);

struct NewtonTruncation {
  std::complex<double> exact;
  std::complex<double> truncated;
  double residual;  // |exact - truncated| / |p1^l / l!|
};

// Coefficients from the cycle types of S_l with up to four non-fixed points:
// e_l ~ (1/l!)(p1^l - C(l,2) p1^{l-2} p2 + a1 p1^{l-3} p3 + a2 p1^{l-4} p2^2),
// a1 = l(l-1)(l-2)/3, a2 = l(l-1)(l-2)(l-3)/8.
NewtonTruncation newton_truncation(const CircleConfig& J, int l);
double newton_truncation_check(const CircleConfig& J, int l);

struct SubgroupReport {
  double max_slack = 0;  // max |p_s(xi(J))| - bound, stated bound
  std::size_t violations = 0;
  std::optional<CircleConfig> worst_config;
  int worst_s = 0;
  double max_slack_sharp = 0;  // same against the arc-filling maximum
  std::size_t violations_sharp = 0;
};

// s' sin((k+s') pi/n) / sin(s' pi/n), s' = gcd(n, s)
double subgroup_bound(int n, int k, int s);
// Exact maximum of |sum_i d_i w^i| over multiplicities d_i in [0, s'] summing to k, w = e^{2 pi i s'/n}.
double subgroup_bound_sharp(int n, int k, int s);
SubgroupReport subgroup_bound_check(int n, int k, std::uint64_t cap = kDefaultCap);

}  // namespace circwalk
