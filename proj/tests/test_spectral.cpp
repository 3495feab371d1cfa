#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <numbers>

#include "circwalk/errors.hpp"
#include "circwalk/mixing.hpp"
#include "circwalk/spectral.hpp"
#include "circwalk/symmetric.hpp"

using namespace circwalk;

namespace {

constexpr double kPi = std::numbers::pi;
const StepDistribution kLazy{{{-1, 0.25}, {0, 0.5}, {1, 0.25}}};

StepDistribution binomial_p(int k, double q) {
  std::map<int, double> w;
  for (int l = 0; l <= k; ++l) w[l] = double(binomial(k, l)) * std::pow(q, l) * std::pow(1 - q, k - l);
  return StepDistribution(w);
}

}  // namespace

TEST(Eigenvalue, Examples) {
  for (int l = -4; l <= 4; ++l) EXPECT_NEAR(std::abs(eigenvalue_ell(CircleConfig::ground(9, 4), l) - 1.0), 0.0, 1e-14);
  const cplx v = eigenvalue_ell(CircleConfig::first_excited(5, 2), 1);
  EXPECT_NEAR(v.real(), 0.309017, 1e-6);
  EXPECT_NEAR(v.imag(), 0.224514, 1e-6);
  EXPECT_NEAR(std::abs(v), 0.381966, 1e-6);
  EXPECT_NEAR(std::abs(eigenvalue_ell(CircleConfig::first_excited(4, 2), 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eigenvalue_ell(CircleConfig(7, {5, 3, 0}), -2) - std::conj(eigenvalue_ell(CircleConfig(7, {5, 3, 0}), 2))), 0.0, 0.0);
}

TEST(ClosedForm, FirstExcited) {
  EXPECT_EQ(lambda_I1_closed_form(7, 3, 0), cplx(1.0));
  const cplx v = lambda_I1_closed_form(5, 2, 1);
  EXPECT_NEAR(v.real(), 0.309017, 1e-6);
  EXPECT_NEAR(v.imag(), 0.224514, 1e-6);
  for (int l = -5; l <= 5; ++l)
    EXPECT_LE(std::abs(lambda_I1_closed_form(12, 5, l) - eigenvalue_ell(CircleConfig::first_excited(12, 5), l)), 1e-12);
}

TEST(Spectrum, DeltaZeroAllOnes) {
  ChainModel m(7, 3, StepDistribution());
  for (const auto& e : m.spectrum().expand()) EXPECT_NEAR(std::abs(e.lambda - 1.0), 0.0, 1e-14);
}

TEST(Spectrum, LazySymmetricIsReal) {
  ChainModel m(6, 3, kLazy);
  for (const auto& e : m.spectrum().expand()) {
    EXPECT_LE(std::abs(e.lambda.imag()), 1e-12);
    EXPECT_LE(std::abs(e.lambda), 1.0 + 1e-10);
    EXPECT_GT(e.d, 0.0);
  }
}

TEST(Spectrum, MatchesDenseEigenSolver) {
  ChainModel m(5, 2, StepDistribution::parse("-2:0.1,-1:0.2,0:0.3,1:0.15,2:0.25"));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXd(m.kernel()).cast<cplx>());
  ASSERT_EQ(es.info(), Eigen::Success);
  std::vector<cplx> dense(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  const auto ours = m.spectrum().expand();
  ASSERT_EQ(ours.size(), dense.size());
  // greedy multiset matching
  for (const auto& e : ours) {
    auto best = std::min_element(dense.begin(), dense.end(),
                                 [&](cplx a, cplx b) { return std::abs(a - e.lambda) < std::abs(b - e.lambda); });
    EXPECT_LE(std::abs(*best - e.lambda), 1e-8);
    dense.erase(best);
  }
}

TEST(Spectrum, ShiftPhasesMatchDirectEvaluation) {
  ChainModel m(8, 3, StepDistribution::parse("-1:0.3,0:0.2,2:0.5"));
  for (const auto& e : m.spectrum().expand())
    EXPECT_LE(std::abs(e.lambda - mixture_eigenvalue(e.J, m.p())), 1e-12) << e.J.to_string();
}

TEST(Eigenvector, GroundIsConstantAndOrthonormal) {
  for (const auto& I : enumerate_configs(6, 3)) EXPECT_NEAR(std::abs(eigenvector(CircleConfig::ground(6, 3), I) - 1.0), 0.0, 1e-12);
  EXPECT_LE(orthonormality_check(5, 2), 1e-10);
  EXPECT_LE(orthonormality_check(6, 3), 1e-10);
}

TEST(Eigenvector, BoundedByGroundValue) {
  const auto cs = enumerate_configs(6, 3);
  for (const auto& J : cs) {
    const double d = schur_at_ground(J);
    EXPECT_NEAR(std::abs(eigenvector(J, CircleConfig::ground(6, 3)) - d), 0.0, 1e-12);
    for (const auto& I : cs) EXPECT_LE(std::abs(eigenvector(J, I)), d + 1e-10);
  }
}

TEST(Eigenvector, EigenRelation) {
  // P f_J = conj(lambda_J) f_J
  ChainModel m(6, 3, StepDistribution::parse("-1:0.2,0:0.3,1:0.1,3:0.4"));
  const StateSpace& s = m.space();
  const Eigen::MatrixXd P = Eigen::MatrixXd(m.kernel());
  for (const auto& e : m.spectrum().expand()) {
    Eigen::VectorXcd f(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) f(i) = eigenvector(e.J, s[i]);
    EXPECT_LE((P.cast<cplx>() * f - std::conj(e.lambda) * f).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Gap, Examples) {
  EXPECT_NEAR(gap(ChainModel(7, 3, StepDistribution())).gamma_exact, 0.0, 1e-15);
  const double g = gap(ChainModel(5, 2, StepDistribution::parse("1:1"))).gamma_exact;
  EXPECT_NEAR(g, 1.0 - std::cos(2 * kPi / 5) / std::cos(kPi / 5), 1e-12);
  EXPECT_NEAR(g, 0.618034, 1e-6);
  const GapReport r = gap(ChainModel(12, 5, kLazy));
  for (int l = 1; l <= 5; ++l) EXPECT_DOUBLE_EQ(r.gamma_ell.at(l), r.gamma_ell.at(-l));
  EXPECT_GE(r.gamma_exact, 0.0);
  EXPECT_LE(r.gamma_exact, 1.0);
}

TEST(Gap, ConstantFamilyTrend) {
  double prev = 1e9;
  for (int n : {10, 20, 40}) {
    ChainModel m(n, n / 2, kLazy, 1);  // only I1 is touched
    const double ratio = m.gamma() * n * n / (2 * kPi * kPi * kLazy.mean_abs());
    const double err = std::abs(ratio - 1.0);
    EXPECT_LT(err, prev) << n;
    prev = err;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(LambdaI2, ClosedFormAndReality) {
  EXPECT_NEAR(std::abs(lambda_I2(ChainModel(7, 3, StepDistribution())).direct - 1.0), 0.0, 1e-14);
  const LambdaI2 a = lambda_I2(ChainModel(6, 3, StepDistribution::parse("1:1")));
  EXPECT_LE(std::abs(a.direct - a.closed_form), 1e-13);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{6, 3}, {8, 4}, {10, 4}, {12, 6}, {11, 5}})
    for (const char* p : {"-1:0.25,0:0.5,1:0.25", "1:1", "0:0.2,2:0.5,-3:0.3"}) {
      const LambdaI2 v = lambda_I2(ChainModel(n, k, StepDistribution::parse(p), 1));
      EXPECT_LE(std::abs(v.direct.imag()), 1e-13);
      EXPECT_LE(std::abs(v.direct - v.closed_form), 1e-12);
    }
}

TEST(HeatKernel, BoundaryTimes) {
  ChainModel m(6, 3, kLazy);
  const HeatKernel h(m);
  const StateSpace& s = m.space();
  const Eigen::VectorXd d0 = h.density_row(0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double want = i == s.ground_index() ? 1.0 / stationary_weight(s[i]) : 0.0;
    EXPECT_NEAR(d0(i), want, 1e-9 * std::max(1.0, want));
  }
  EXPECT_LE((h.density_row(400).array() - 1.0).abs().maxCoeff(), 1e-6);
}

TEST(HeatKernel, MatchesMatrixPowers) {
  ChainModel m(6, 3, kLazy);
  const HeatKernel h(m);
  const StateSpace& s = m.space();
  const Eigen::MatrixXd P = Eigen::MatrixXd(m.kernel());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(s.size());
  row(s.ground_index()) = 1.0;
  for (int t = 0; t <= 50; ++t) {
    if (t) row = P.transpose() * row;
    const Eigen::VectorXd spectral = h.density_row(t);
    for (std::size_t i = 0; i < s.size(); ++i)
      EXPECT_NEAR(spectral(i), row(i) / stationary_weight(s[i]), 1e-9) << "t=" << t;
  }
  EXPECT_NEAR(heat_kernel_density(m, 3, s[5]), h.density(3, s[5]), 1e-15);
}

TEST(Subgaussian, Examples) {
  EXPECT_EQ(subgaussian_gap_estimate(ChainModel(8, 4, StepDistribution::parse("1:1"))).parameter, 0.0);
  const SubgaussianGap b = subgaussian_gap_estimate(ChainModel(12, 6, binomial_p(6, 0.5), 1));
  EXPECT_GT(b.parameter, 0.0);
  EXPECT_TRUE(std::isfinite(b.parameter));
  for (int n : {12, 16, 20}) {
    const SubgaussianGap g = subgaussian_gap_estimate(ChainModel(n, n / 2, kLazy, 1));
    EXPECT_TRUE(std::isfinite(g.ratio));
    EXPECT_LT(g.ratio, 10.0);
  }
}
