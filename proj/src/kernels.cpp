#include "circwalk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include "circwalk/errors.hpp"
#include "circwalk/symmetric.hpp"
#include "model_cache.hpp"

namespace circwalk {

StepDistribution::StepDistribution(std::map<int, double> weights) {
  double total = 0.0;
  for (auto [l, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("step weights must be finite and >= 0");
    total += w;
    if (w > 0.0) w_[l] = w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("step weights must sum to 1 (got " + std::to_string(total) + ")");
}

StepDistribution StepDistribution::parse(const std::string& text) {
  std::map<int, double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidArgument("expected l:weight pairs, got '" + item + "'");
    try {
      w[std::stoi(item.substr(0, colon))] += std::stod(item.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw InvalidArgument("cannot parse step entry '" + item + "'");
    }
  }
  if (w.empty()) throw InvalidArgument("empty step distribution");
  return StepDistribution(std::move(w));
}

double StepDistribution::operator()(int l) const {
  auto it = w_.find(l);
  return it == w_.end() ? 0.0 : it->second;
}

int StepDistribution::max_abs() const {
  int m = 0;
  for (auto& [l, w] : w_) m = std::max(m, std::abs(l));
  return m;
}

double StepDistribution::mean() const {
  double m = 0.0;
  for (auto& [l, w] : w_) m += l * w;
  return m;
}

double StepDistribution::mean_abs() const {
  double m = 0.0;
  for (auto& [l, w] : w_) m += std::abs(l) * w;
  return m;
}

double StepDistribution::variance() const {
  double mu = mean(), v = 0.0;
  for (auto& [l, w] : w_) v += w * (l - mu) * (l - mu);
  return v;
}

int StepDistribution::support_gcd() const {
  int g = 0;
  for (auto& [l, w] : w_) g = std::gcd(g, std::abs(l));
  return g;
}

std::complex<double> StepDistribution::fourier(double theta) const {
  std::complex<double> s = 0.0;
  for (auto& [l, w] : w_) s += w * std::polar(1.0, l * theta);
  return s;
}

std::string StepDistribution::to_string() const {
  std::string out;
  char buf[64];
  for (auto& [l, w] : w_) {
    std::snprintf(buf, sizeof buf, "%s%d:%.17g", out.empty() ? "" : ",", l, w);
    out += buf;
  }
  return out;
}

std::vector<Block> blocks(const CircleConfig& c) {
  const int n = c.n(), k = c.k();
  if (k >= n) throw InvalidArgument("full circle: no empty site, blocks undefined");
  std::vector<char> occ(n, 0);
  for (int v : c.positions()) occ[v] = 1;
  int empty = 0;
  while (occ[empty]) ++empty;
  std::vector<Block> out;
  for (int step = 1; step <= n; ++step) {
    int site = (empty + step) % n;
    int prev = (site + n - 1) % n;
    if (occ[site] && !occ[prev]) out.push_back({site, 0});
    if (occ[site]) out.back().length++;
  }
  std::sort(out.begin(), out.end(), [](const Block& a, const Block& b) { return a.start > b.start; });
  return out;
}

std::vector<CircleConfig> enumerate_moves(const CircleConfig& c, int l, int direction) {
  const int n = c.n(), k = c.k();
  if (l < 0 || l > k) throw InvalidArgument("enumerate_moves needs 0 <= l <= k");
  if (direction != 1 && direction != -1) throw InvalidArgument("direction must be +1 or -1");
  if (l == 0) return {c};
  const auto bl = blocks(c);
  std::vector<int> moved(bl.size(), 0);
  std::vector<CircleConfig> out;
  std::function<void(std::size_t, int)> rec = [&](std::size_t b, int left) {
    if (b == bl.size()) {
      if (left != 0) return;
      std::vector<int> p;
      p.reserve(k);
      for (std::size_t i = 0; i < bl.size(); ++i) {
        const auto [s, L] = bl[i];
        for (int j = 0; j < L; ++j) {
          bool moves = direction > 0 ? (j >= L - moved[i]) : (j < moved[i]);
          p.push_back(((s + j + (moves ? direction : 0)) % n + n) % n);
        }
      }
      std::sort(p.begin(), p.end(), std::greater<>());
      out.emplace_back(n, std::move(p));
      return;
    }
    for (int m = 0; m <= std::min(bl[b].length, left); ++m) {
      moved[b] = m;
      rec(b + 1, left - m);
    }
  };
  rec(0, l);
  std::sort(out.begin(), out.end());
  return out;
}

double perron_eigenvalue(int n, int k, int l) {
  std::complex<double> a = elementary(xi(CircleConfig::ground(n, k)), std::abs(l));
  if (std::abs(a.imag()) > 1e-9 * std::max(1.0, std::abs(a)) || a.real() <= 0.0)
    throw NumericalGuard("Perron eigenvalue is not real positive");
  return a.real();
}

SparseKernel adjacency(const StateSpace& space, int l) {
  if (std::abs(l) > space.k()) throw InvalidArgument("|l| must not exceed k");
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t i = 0; i < space.size(); ++i)
    for (const auto& J : enumerate_moves(space[i], std::abs(l), l >= 0 ? 1 : -1))
      trips.emplace_back(static_cast<int>(i), static_cast<int>(space.index_of(J)), 1.0);
  SparseKernel A(space.size(), space.size());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

namespace {

std::vector<double> perron_vector(const StateSpace& space) {
  std::vector<double> phi(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) phi[i] = schur_at_ground(space[i]);
  return phi;
}

// Appends weight * Q^(l) rows to trips.
void add_doob_rows(const StateSpace& space, const std::vector<double>& phi, int l, double weight,
                   std::vector<Eigen::Triplet<double>>& trips) {
  if (space.k() >= space.n()) throw InvalidArgument("Doob kernel needs k < n");
  if (std::abs(l) > space.k()) throw InvalidArgument("|l| must not exceed k");
  const double alpha = perron_eigenvalue(space.n(), space.k(), l);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto targets = enumerate_moves(space[i], std::abs(l), l >= 0 ? 1 : -1);
    double row = 0.0;
    std::vector<std::pair<int, double>> entries;
    for (const auto& J : targets) {
      std::size_t j = space.index_of(J);
      double q = phi[j] / (alpha * phi[i]);
      if (q < -1e-14) throw NumericalGuard("negative Doob weight beyond clamp threshold");
      q = std::max(q, 0.0);
      row += q;
      entries.emplace_back(static_cast<int>(j), q);
    }
    if (std::abs(row - 1.0) > 1e-8)
      throw NumericalGuard("Perron relation violated at " + space[i].to_string() + " (row sum " +
                           std::to_string(row) + ")");
    for (auto [j, q] : entries) trips.emplace_back(static_cast<int>(i), j, weight * q);
  }
}

}  // namespace

SparseKernel doob_kernel(const StateSpace& space, int l) {
  std::vector<Eigen::Triplet<double>> trips;
  add_doob_rows(space, perron_vector(space), l, 1.0, trips);
  SparseKernel Q(space.size(), space.size());
  Q.setFromTriplets(trips.begin(), trips.end());
  return Q;
}

SparseKernel mixture_kernel(const StateSpace& space, const StepDistribution& p) {
  if (p.max_abs() > space.k()) throw InvalidArgument("step support exceeds [-k, k]");
  const auto phi = perron_vector(space);
  std::vector<Eigen::Triplet<double>> trips;
  for (auto& [l, w] : p.weights()) add_doob_rows(space, phi, l, w, trips);
  SparseKernel P(space.size(), space.size());
  P.setFromTriplets(trips.begin(), trips.end());
  return P;
}

ChainModel::ChainModel(int n, int k, StepDistribution p, std::uint64_t cap)
    : n_(n), k_(k), cap_(cap), p_(std::move(p)), cache_(std::make_shared<Cache>()) {
  if (n < 2 || k < 1 || k >= n) throw InvalidArgument("chain needs 1 <= k < n");
  if (p_.max_abs() > k) throw InvalidArgument("step support exceeds [-k, k]");
  if (cap < 1) throw InvalidArgument("cap must be >= 1");
}

void ChainModel::set_distribution(StepDistribution p) {
  if (p.max_abs() > k_) throw InvalidArgument("step support exceeds [-k, k]");
  p_ = std::move(p);
  cache_ = std::make_shared<Cache>();
}

const StateSpace& ChainModel::space() const {
  std::lock_guard lock(cache_->mutex);
  if (!cache_->space) cache_->space = std::make_unique<StateSpace>(n_, k_, cap_);
  return *cache_->space;
}

const SparseKernel& ChainModel::kernel() const {
  const StateSpace& s = space();
  std::lock_guard lock(cache_->mutex);
  if (!cache_->kernel) cache_->kernel = std::make_unique<SparseKernel>(mixture_kernel(s, p_));
  return *cache_->kernel;
}

AssumptionAudit audit_assumptions(const StepDistribution& p, int n, int k) {
  AssumptionAudit a;
  a.eta_hat = std::min(double(k) / n, 1.0 - double(k) / n);
  a.mean_abs = p.mean_abs();
  a.mean_abs_over_k = a.mean_abs / k;
  a.delta_hat = std::min(a.mean_abs, 1.0 - a.mean_abs_over_k);
  a.reducible = p.support_gcd() == 0;
  a.gcd_ok = p.support_gcd() == 1;
  if (a.reducible) return a;

  const double m = a.mean_abs;
  auto psi = [&](double K) {
    double s = 0.0;
    for (auto& [l, w] : p.weights()) {
      double y = std::abs(l) - m;
      s += w * std::exp(y * y / (2.0 * K * K * m));
    }
    return s;
  };
  bool constant_abs = true;
  for (auto& [l, w] : p.weights()) constant_abs = constant_abs && std::abs(std::abs(l) - m) < 1e-15;
  if (!constant_abs) {
    double lo = 0.0, hi = 1.0;
    while (psi(hi) > 2.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (psi(mid) > 2.0 ? lo : hi) = mid;
    }
    a.Kg_hat = hi;
  }

  double ka = std::numeric_limits<double>::infinity();
  for (int j = -256; j <= 256; ++j) {
    if (j == 0) continue;
    double th = std::numbers::pi * j / 256.0;
    double deficit = 1.0 - std::abs(p.fourier(th));
    if (deficit < 1e-12) deficit = 0.0;  // rounding of |Phi| = 1
    ka = std::min(ka, deficit / std::min(m * th * th, 1.0));
  }
  a.Ka_hat = ka;
  return a;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

CircleConfig step_sample(RngStream& rng, const CircleConfig& c, const ChainModel& model) {
  const auto& w = model.p().weights();
  int l = w.rbegin()->first;
  if (w.size() > 1) {
    double u = rng.uniform(), acc = 0.0;
    for (auto& [ll, pl] : w) {
      acc += pl;
      if (u < acc) {
        l = ll;
        break;
      }
    }
  }
  if (l == 0) return c;
  auto targets = enumerate_moves(c, std::abs(l), l > 0 ? 1 : -1);
  if (targets.size() == 1) return targets.front();
  const double norm = perron_eigenvalue(c.n(), c.k(), l) * schur_at_ground(c);
  std::vector<double> q(targets.size());
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) total += q[i] = schur_at_ground(targets[i]) / norm;
  if (std::abs(total - 1.0) > 1e-8) throw NumericalGuard("Perron relation violated during sampling");
  double u = rng.uniform() * total, acc = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    acc += q[i];
    if (u < acc) return targets[i];
  }
  return targets.back();
}

std::vector<CircleConfig> simulate(RngStream& rng, const ChainModel& model, const CircleConfig& start, int t) {
  if (t < 0) throw InvalidArgument("trajectory length must be >= 0");
  std::vector<CircleConfig> path{start};
  path.reserve(t + 1);
  for (int s = 0; s < t; ++s) path.push_back(step_sample(rng, path.back(), model));
  return path;
}

StationarySampler::StationarySampler(const StateSpace& space) : space_(&space), cdf_(space.size()) {
  double acc = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) cdf_[i] = acc += stationary_weight(space[i]);
  if (std::abs(acc - 1.0) > 1e-10) throw NumericalGuard("stationary weights do not sum to 1");
}

CircleConfig StationarySampler::draw(RngStream& rng) const {
  double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t i = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
  return (*space_)[i];
}

CircleConfig sample_stationary(RngStream& rng, const StateSpace& space) {
  return StationarySampler(space).draw(rng);
}

}  // namespace circwalk
