#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "circwalk/config_space.hpp"
#include "circwalk/kernels.hpp"

namespace circwalk {

using cplx = std::complex<double>;

// e_{|l|}(xi(J)) / e_{|l|}(xi(I0)), conjugated for l < 0.
cplx eigenvalue_ell(const CircleConfig& J, int l);
// 1 - w^{k-l}(1-w)(1-w^l)/(1-w^k), w = e^{2 pi i/n}; l < 0 returns the conjugate.
cplx lambda_I1_closed_form(int n, int k, int l);
cplx mixture_eigenvalue(const CircleConfig& J, const StepDistribution& p);

struct SpectrumEntry {
  OrbitClass orbit;
  std::vector<cplx> lambda_by_ell;  // index l = 0..k; negative l by conjugation
  cplx lambda_mixture;              // at the representative
  double d;                         // f_J(I0) = S_J(xi(I0))

  cplx lambda_ell(int l) const;
  // lambda^(l) at shift(rep, t) is e^{2 pi i t l / n} lambda^(l)(rep)
  cplx lambda_at_shift(int t, const StepDistribution& p) const;
};

struct ExpandedEigen {
  CircleConfig J;
  cplx lambda;
  double d;
};

struct Spectrum {
  int n = 0, k = 0;
  StepDistribution p;
  std::vector<SpectrumEntry> entries;

  // One record per configuration J (phases reconstructed).
  std::vector<ExpandedEigen> expand() const;
};

Spectrum full_spectrum(const ChainModel& model);

// f_J(I) = conj(S_J(xi(I))), normalised so f_J(I0) = d(J). P f_J = conj(lambda_J) f_J.
cplx eigenvector(const CircleConfig& J, const CircleConfig& I);
double orthonormality_check(int n, int k);

struct GapReport {
  double gamma_exact = 0;
  double gamma_formula = 0;
  std::map<int, double> gamma_ell;          // exact 1 - |lambda^(l)_{I1}|, l in [-k, k]
  std::map<int, double> gamma_ell_formula;  // leading term
  double gamma_avg = 0;                     // E[gamma_X] from exact gamma_ell
};

GapReport gap(const ChainModel& model);

struct LambdaI2 {
  cplx direct;
  double closed_form;
};

LambdaI2 lambda_I2(const ChainModel& model);

// P^t(I0, I)/mu(I) via the eigenbasis. Caches the Schur table S_J(xi(I)).
class HeatKernel {
 public:
  explicit HeatKernel(const ChainModel& model);
  Eigen::VectorXd density_row(int t) const;
  double density(int t, const CircleConfig& I) const;

 private:
  const ChainModel* model_;
  std::vector<ExpandedEigen> eig_;
  Eigen::MatrixXcd f_;  // f_(j, i) = f_{J_j}(I_i)
};

double heat_kernel_density(const ChainModel& model, int t, const CircleConfig& I);

struct SubgaussianGap {
  double parameter;  // minimal theta with E exp((gamma_X - gamma)^2/theta^2) <= 2
  double ratio;      // parameter * k / sqrt(gamma)
};

SubgaussianGap subgaussian_gap_estimate(const ChainModel& model);

}  // namespace circwalk
