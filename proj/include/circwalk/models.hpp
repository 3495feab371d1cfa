#pragma once

#include <complex>
#include <string>
#include <vector>

#include "circwalk/kernels.hpp"

namespace circwalk {

enum class ModelKind { Constant, Asep, Dimer };

struct ModelSpec {
  ModelKind kind = ModelKind::Constant;
  int n = 0, k = 0;
  StepDistribution p;  // constant
  double alpha = 0.0, beta = 1.0;  // asep
  double a1 = 1.0, a2 = 1.0;       // dimer
};

// Rejects reducible or periodic p; attaches the audit and the n^2 log n / (2 pi^2 E|X|) prediction.
ChainModel build_constant(int n, int k, const StepDistribution& p, std::uint64_t cap = kDefaultCap);

// Conditioned ASEP: jumps -1, 0, +1 with rates alpha, killing epsilon = 1 - (alpha+beta)/k, beta.
StepDistribution asep_distribution(int n, int k, double alpha, double beta);
ChainModel build_asep(int n, int k, double alpha, double beta, std::uint64_t cap = kDefaultCap);

// p_l = e_l(xi(I0)) a1^l a2^{k-l} / prod_j (a2 + a1 xi_j), from the coefficients of prod_j (a2 + a1 z xi_j).
StepDistribution dimer_distribution(int n, int k, double a1, double a2);
ChainModel build_dimer(int n, int k, double a1, double a2, std::uint64_t cap = kDefaultCap);

ChainModel build_model(const ModelSpec& spec, std::uint64_t cap = kDefaultCap);

struct DimerCheck {
  std::complex<double> lambda_I1_closed;
  std::complex<double> lambda_I1_spectral;
  double lambda_residual;
  double fourier_residual;  // max over a 512-point grid of |DFT(p) - product form|
  // a2 + a1 e^{i pi k/n} = r e^{i theta0}
  double r, theta0, gamma_asymptotic, t_mix_prediction, log_n_over_gamma_asymptotic;
  // Same quantities with a2 + a1 e^{i pi/n}
  double r_alt, theta0_alt, gamma_asymptotic_alt;
  double gamma_exact;
};

DimerCheck dimer_check(int n, int k, double a1, double a2);

}  // namespace circwalk
