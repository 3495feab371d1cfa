#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "circwalk/errors.hpp"
#include "circwalk/kernels.hpp"
#include "circwalk/symmetric.hpp"

using namespace circwalk;

namespace {

CircleConfig C(int n, std::vector<int> p) { return CircleConfig(n, std::move(p)); }

const StepDistribution kLazy{{{-1, 0.25}, {0, 0.5}, {1, 0.25}}};

Eigen::VectorXd row_sums(const SparseKernel& K) { return K * Eigen::VectorXd::Ones(K.cols()); }

Eigen::VectorXd stationary(const StateSpace& s) {
  Eigen::VectorXd mu(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) mu(i) = stationary_weight(s[i]);
  return mu;
}

}  // namespace

TEST(StepDistribution, ParseAndMoments) {
  const auto p = StepDistribution::parse("-1:0.25,0:0.5,1:0.25");
  EXPECT_EQ(p, kLazy);
  EXPECT_DOUBLE_EQ(p.mean_abs(), 0.5);
  EXPECT_DOUBLE_EQ(p.mean(), 0.0);
  EXPECT_EQ(p.support_gcd(), 1);
  EXPECT_EQ(StepDistribution::parse("-2:0.5,2:0.5").support_gcd(), 2);
  EXPECT_EQ(StepDistribution().support_gcd(), 0);
  EXPECT_EQ(StepDistribution::parse(p.to_string()), p);
  EXPECT_THROW(StepDistribution::parse("1:0.5"), InvalidArgument);
  EXPECT_THROW(StepDistribution::parse("1:-0.5,0:1.5"), InvalidArgument);
  EXPECT_THROW(StepDistribution::parse("x"), InvalidArgument);
}

TEST(Blocks, Examples) {
  EXPECT_EQ(blocks(CircleConfig::ground(9, 4)), (std::vector<Block>{{0, 4}}));
  EXPECT_EQ(blocks(C(4, {2, 0})), (std::vector<Block>{{2, 1}, {0, 1}}));
  EXPECT_EQ(blocks(C(5, {3, 2, 0})), (std::vector<Block>{{2, 2}, {0, 1}}));
  EXPECT_THROW(blocks(CircleConfig::ground(3, 3)), InvalidArgument);
}

TEST(Moves, GroundHasSingleTarget) {
  const int n = 11, k = 5;
  for (int l = 1; l <= k; ++l) {
    const auto t = enumerate_moves(CircleConfig::ground(n, k), l, 1);
    ASSERT_EQ(t.size(), 1u);
    std::vector<int> want;
    for (int v = k; v >= k - l + 1; --v) want.push_back(v);
    for (int v = k - l - 1; v >= 0; --v) want.push_back(v);
    EXPECT_EQ(t[0], C(n, want));
  }
  EXPECT_EQ(enumerate_moves(CircleConfig::ground(n, k), 1, 1)[0], CircleConfig::first_excited(n, k));
}

TEST(Moves, FourTwoExamples) {
  EXPECT_EQ(enumerate_moves(C(4, {2, 0}), 1, 1), (std::vector<CircleConfig>{C(4, {2, 1}), C(4, {3, 0})}));
  EXPECT_EQ(enumerate_moves(C(4, {2, 0}), 2, 1), (std::vector<CircleConfig>{C(4, {3, 1})}));
}

TEST(Adjacency, IdentityReverseAndGroundRow) {
  const StateSpace s(4, 2);
  const Eigen::MatrixXd A0 = Eigen::MatrixXd(adjacency(s, 0));
  EXPECT_TRUE(A0.isApprox(Eigen::MatrixXd::Identity(6, 6)));
  const Eigen::MatrixXd Ap = Eigen::MatrixXd(adjacency(s, 1)), Am = Eigen::MatrixXd(adjacency(s, -1));
  EXPECT_EQ((Ap.transpose() - Am).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(((Ap.array() == 0) || (Ap.array() == 1)).all());
  const StateSpace s2(10, 4);
  for (int l = 1; l <= 4; ++l) EXPECT_DOUBLE_EQ(adjacency(s2, l).row(s2.ground_index()).sum(), 1.0);
}

TEST(Doob, IdentityAndSingleTarget) {
  const StateSpace s(4, 2);
  EXPECT_TRUE(Eigen::MatrixXd(doob_kernel(s, 0)).isApprox(Eigen::MatrixXd::Identity(6, 6)));
  const SparseKernel Q = doob_kernel(s, 1);
  EXPECT_NEAR(Q.coeff(s.ground_index(), s.index_of(CircleConfig::first_excited(4, 2))), 1.0, 1e-15);
}

TEST(Doob, RowsStochastic) {
  const StateSpace s(6, 3);
  for (int l = -3; l <= 3; ++l) {
    const SparseKernel Q = doob_kernel(s, l);
    EXPECT_EQ(Q.rows(), 20);
    EXPECT_LE((row_sums(Q).array() - 1.0).abs().maxCoeff(), 1e-13) << "l=" << l;
    for (int r = 0; r < Q.outerSize(); ++r)
      for (SparseKernel::InnerIterator it(Q, r); it; ++it) EXPECT_GE(it.value(), 0.0);
  }
}

TEST(Mixture, DeltaZeroIsIdentityAndLazyStochastic) {
  const StateSpace s(6, 3);
  EXPECT_TRUE(Eigen::MatrixXd(mixture_kernel(s, StepDistribution())).isApprox(Eigen::MatrixXd::Identity(20, 20)));
  const SparseKernel P = mixture_kernel(s, kLazy);
  EXPECT_LE((row_sums(P).array() - 1.0).abs().maxCoeff(), 1e-12);
  const Eigen::VectorXd mu = stationary(s);
  EXPECT_LE((P.transpose() * mu - mu).cwiseAbs().sum(), 1e-11);
}

TEST(Mixture, CommutesWithDoobKernels) {
  const StateSpace s(5, 2);
  const Eigen::MatrixXd P = Eigen::MatrixXd(mixture_kernel(s, StepDistribution::parse("-2:0.1,-1:0.2,0:0.3,1:0.15,2:0.25")));
  for (int l = -2; l <= 2; ++l) {
    const Eigen::MatrixXd Q = Eigen::MatrixXd(doob_kernel(s, l));
    EXPECT_LE((P * Q - Q * P).norm(), 1e-12) << "l=" << l;
  }
}

TEST(ChainModel, CacheInvalidatedOnNewDistribution) {
  ChainModel m(6, 3, kLazy);
  const double before = Eigen::MatrixXd(m.kernel()).trace();
  m.set_distribution(StepDistribution::parse("0:0.9,1:0.1"));
  EXPECT_NE(Eigen::MatrixXd(m.kernel()).trace(), before);
  EXPECT_THROW(ChainModel(6, 3, StepDistribution::parse("4:1")), InvalidArgument);
  EXPECT_THROW(ChainModel(3, 3, kLazy), InvalidArgument);
}

TEST(Audit, Examples) {
  const AssumptionAudit a = audit_assumptions(kLazy, 12, 6);
  EXPECT_TRUE(a.gcd_ok);
  EXPECT_DOUBLE_EQ(a.mean_abs, 0.5);
  EXPECT_GT(a.Ka_hat, 0.0);
  EXPECT_GT(a.Kg_hat, 0.0);
  EXPECT_TRUE(std::isfinite(a.Kg_hat));
  EXPECT_FALSE(audit_assumptions(StepDistribution::parse("-2:0.5,2:0.5"), 12, 6).gcd_ok);
  EXPECT_TRUE(audit_assumptions(StepDistribution(), 12, 6).reducible);
  EXPECT_DOUBLE_EQ(audit_assumptions(StepDistribution::parse("1:1"), 12, 6).Ka_hat, 0.0);
}

TEST(Audit, BinomialIsAperiodic) {
  const int k = 8;
  for (double q : {0.1, 0.5, 0.9}) {
    std::map<int, double> w;
    for (int l = 0; l <= k; ++l) w[l] = double(binomial(k, l)) * std::pow(q, l) * std::pow(1 - q, k - l);
    const auto a = audit_assumptions(StepDistribution(w), 16, k);
    EXPECT_GT(a.Ka_hat, 0.0) << q;
    EXPECT_TRUE(a.gcd_ok);
  }
}

TEST(Sampling, DeltaZeroIsConstant) {
  ChainModel m(6, 3, StepDistribution());
  RngStream rng(7);
  const CircleConfig start = C(6, {4, 2, 0});
  for (const auto& c : simulate(rng, m, start, 50)) EXPECT_EQ(c, start);
}

TEST(Sampling, SingleTargetRows) {
  ChainModel m(9, 4, StepDistribution::parse("2:1"));
  RngStream rng(3);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(step_sample(rng, CircleConfig::ground(9, 4), m), enumerate_moves(CircleConfig::ground(9, 4), 2, 1)[0]);
}

TEST(Sampling, ReproducibleStreams) {
  ChainModel m(8, 4, kLazy);
  RngStream a(42, 1), b(42, 1), c(42, 2);
  const auto pa = simulate(a, m, CircleConfig::ground(8, 4), 200);
  EXPECT_EQ(pa, simulate(b, m, CircleConfig::ground(8, 4), 200));
  EXPECT_NE(pa, simulate(c, m, CircleConfig::ground(8, 4), 200));
}

TEST(Sampling, LongRunOccupationMatchesStationary) {
  ChainModel m(6, 3, kLazy);
  const StateSpace& s = m.space();
  RngStream rng(2024);
  Eigen::VectorXd occ = Eigen::VectorXd::Zero(s.size());
  CircleConfig cur = CircleConfig::ground(6, 3);
  const int steps = 100000;
  for (int i = 0; i < steps; ++i) {
    cur = step_sample(rng, cur, m);
    occ(s.index_of(cur)) += 1.0;
  }
  occ /= steps;
  EXPECT_LE(0.5 * (occ - stationary(s)).cwiseAbs().sum(), 0.02);
}

TEST(Stationary, SingleParticleUniformAndFourTwo) {
  const StateSpace s1(5, 1);
  const Eigen::VectorXd mu1 = stationary(s1);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(mu1(i), 0.2, 1e-15);
  EXPECT_NEAR(stationary_weight(C(4, {2, 0})), 4.0 / 16.0, 1e-15);
}

TEST(Stationary, ChiSquareGoodnessOfFit) {
  const StateSpace s(6, 3);
  const StationarySampler sampler(s);
  RngStream rng(99);
  const int draws = 100000;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < draws; ++i) counts(s.index_of(sampler.draw(rng))) += 1.0;
  const Eigen::VectorXd expected = stationary(s) * draws;
  const double chi2 = ((counts - expected).array().square() / expected.array()).sum();
  // 99th percentile of chi-square with 19 degrees of freedom
  EXPECT_LE(chi2, 36.19086912927004);
}
