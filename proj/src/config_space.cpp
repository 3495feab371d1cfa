#include "circwalk/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "circwalk/errors.hpp"

namespace circwalk {

namespace {

int mod(long a, int n) {
  long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

CircleConfig::CircleConfig(int n, std::vector<int> positions) : n_(n), pos_(std::move(positions)) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (pos_.empty() || static_cast<int>(pos_.size()) > n)
    throw InvalidArgument("need 1 <= k <= n particles");
  for (std::size_t j = 0; j < pos_.size(); ++j) {
    if (pos_[j] < 0 || pos_[j] >= n) throw InvalidArgument("position outside [0, n-1]");
    if (j > 0 && pos_[j] >= pos_[j - 1]) throw InvalidArgument("positions must be strictly decreasing");
  }
}

CircleConfig CircleConfig::ground(int n, int k) {
  if (k < 1 || k > n) throw InvalidArgument("need 1 <= k <= n");
  std::vector<int> p(k);
  for (int j = 0; j < k; ++j) p[j] = k - 1 - j;
  return {n, std::move(p)};
}

CircleConfig CircleConfig::first_excited(int n, int k) {
  if (k >= n) throw InvalidArgument("I1 needs k < n");
  auto p = ground(n, k).positions();
  p[0] += 1;
  return {n, std::move(p)};
}

CircleConfig CircleConfig::second_excited(int n, int k) {
  if (k < 2 || k + 2 > n) throw InvalidArgument("I2 needs 2 <= k <= n-2");
  auto p = ground(n, k).positions();
  p[0] += 1;
  p.back() = n - 1;
  std::sort(p.begin(), p.end(), std::greater<>());
  return {n, std::move(p)};
}

std::string CircleConfig::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < pos_.size(); ++j) os << (j ? "," : "") << pos_[j];
  os << ')';
  return os.str();
}

std::strong_ordering CircleConfig::operator<=>(const CircleConfig& o) const {
  if (auto c = n_ <=> o.n_; c != 0) return c;
  return pos_ <=> o.pos_;
}

Eigen::VectorXcd xi(const CircleConfig& c) {
  const int k = c.k();
  Eigen::VectorXcd x(k);
  for (int j = 0; j < k; ++j) {
    double angle = std::numbers::pi * (2.0 * c[j] - (k - 1)) / c.n();
    x(j) = std::polar(1.0, angle);
  }
  return x;
}

CircleConfig shift(const CircleConfig& c, long t) {
  std::vector<int> p(c.positions());
  for (int& v : p) v = mod(v + t, c.n());
  std::sort(p.begin(), p.end(), std::greater<>());
  return {c.n(), std::move(p)};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<CircleConfig> enumerate_configs(int n, int k, std::uint64_t cap) {
  if (k < 1 || k > n) throw InvalidArgument("need 1 <= k <= n");
  const std::uint64_t count = binomial(n, k);
  if (count > cap)
    throw StateSpaceTooLarge("state space too large: C(" + std::to_string(n) + "," + std::to_string(k) +
                             ") = " + std::to_string(count) + " exceeds cap " + std::to_string(cap));
  std::vector<CircleConfig> out;
  out.reserve(count);
  std::vector<int> p(k);
  // Lexicographic on the decreasing tuple: top position ascending, then the next, ...
  std::function<void(int)> rec = [&](int j) {
    if (j == k) {
      out.emplace_back(n, p);
      return;
    }
    int hi = (j == 0) ? n - 1 : p[j - 1] - 1;
    for (int v = k - 1 - j; v <= hi; ++v) {
      p[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

StateSpace::StateSpace(int n, int k, std::uint64_t cap)
    : n_(n), k_(k), configs_(enumerate_configs(n, k, cap)) {}

std::size_t StateSpace::index_of(const CircleConfig& c) const {
  if (c.n() != n_ || c.k() != k_) throw InvalidArgument("config does not belong to this state space");
  std::uint64_t r = 0;
  for (int j = 0; j < k_; ++j) r += binomial(c[j], k_ - j);
  return static_cast<std::size_t>(r);
}

std::vector<CircleConfig> OrbitClass::members() const {
  std::vector<CircleConfig> m;
  m.reserve(size);
  for (int t = 0; t < size; ++t) m.push_back(shift(representative, t));
  return m;
}

std::vector<OrbitClass> orbit_decompose(int n, int k, std::uint64_t cap) {
  StateSpace space(n, k, cap);
  std::vector<char> seen(space.size(), 0);
  std::vector<OrbitClass> orbits;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (seen[i]) continue;
    // configs are visited in lexicographic order, so the first unseen member is the minimum
    const CircleConfig& rep = space[i];
    int size = 0;
    CircleConfig cur = rep;
    do {
      seen[space.index_of(cur)] = 1;
      ++size;
      cur = shift(cur, 1);
    } while (!(cur == rep));
    orbits.push_back({rep, size});
  }
  return orbits;
}

std::vector<int> doubled_atoms(const CircleConfig& c) {
  const int n = c.n(), k = c.k();
  std::vector<int> h(k);
  for (int j = 0; j < k; ++j) {
    int v = mod(2L * c[j] - (k - 1), 2 * n);
    h[j] = v > n ? v - 2 * n : v;
  }
  return h;
}

int PartitionPair::weight() const {
  int w = 0;
  for (int v : mu) w += v;
  for (int v : nu) w += v;
  return w;
}

std::string PartitionPair::to_string() const {
  auto part = [](const Partition& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i]);
    return s + ")";
  };
  return part(mu) + part(nu);
}

PartitionBox box_from_threshold(int n, double c2) {
  double spread = c2 / std::log(static_cast<double>(n)) * n / std::numbers::pi;
  int b = static_cast<int>(std::floor((1.0 + spread) / 2.0));
  return {b, b};
}

namespace {

struct AtomSplit {
  std::vector<int> pos;  // nonnegative atoms, descending
  std::vector<int> neg;  // negative atoms, ascending (outermost first)
};

AtomSplit split_atoms(std::vector<int> h) {
  AtomSplit s;
  for (int v : h) (v >= 0 ? s.pos : s.neg).push_back(v);
  std::sort(s.pos.begin(), s.pos.end(), std::greater<>());
  std::sort(s.neg.begin(), s.neg.end());
  return s;
}

bool fits(const Partition& p, const PartitionBox& box) {
  return static_cast<int>(p.size()) <= box.max_length && (p.empty() || p.front() <= box.max_part);
}

void validate_partition(const Partition& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) throw InvalidArgument("partition parts must be positive");
    if (i > 0 && p[i] > p[i - 1]) throw InvalidArgument("partition parts must be weakly decreasing");
  }
}

}  // namespace

std::optional<PartitionPair> partition_pair_from_config(const CircleConfig& c, const PartitionBox& box) {
  const int k = c.k();
  AtomSplit ground = split_atoms(doubled_atoms(CircleConfig::ground(c.n(), k)));
  AtomSplit atoms = split_atoms(doubled_atoms(c));
  if (atoms.pos.size() != ground.pos.size()) return std::nullopt;

  PartitionPair tau;
  for (std::size_t j = 0; j < atoms.pos.size(); ++j) {
    int d = (atoms.pos[j] - ground.pos[j]) / 2;
    if (d < 0) return std::nullopt;  // cannot happen for a balanced config; kept as a guard
    if (d > 0) tau.mu.push_back(d);
  }
  for (std::size_t j = 0; j < atoms.neg.size(); ++j) {
    int d = (ground.neg[j] - atoms.neg[j]) / 2;
    if (d < 0) return std::nullopt;
    if (d > 0) tau.nu.push_back(d);
  }
  if (!fits(tau.mu, box) || !fits(tau.nu, box)) return std::nullopt;
  return tau;
}

CircleConfig config_from_partition_pair(int n, int k, const PartitionPair& tau, const PartitionBox& box) {
  validate_partition(tau.mu);
  validate_partition(tau.nu);
  if (!fits(tau.mu, box) || !fits(tau.nu, box)) throw InvalidArgument("partition pair does not fit the box");
  AtomSplit g = split_atoms(doubled_atoms(CircleConfig::ground(n, k)));
  if (tau.mu.size() > g.pos.size() || tau.nu.size() > g.neg.size())
    throw InvalidArgument("partition longer than the available atoms");
  std::vector<int> h;
  for (std::size_t j = 0; j < g.pos.size(); ++j)
    h.push_back(g.pos[j] + 2 * (j < tau.mu.size() ? tau.mu[j] : 0));
  for (std::size_t j = 0; j < g.neg.size(); ++j)
    h.push_back(g.neg[j] - 2 * (j < tau.nu.size() ? tau.nu[j] : 0));
  if (!h.empty() && (*std::max_element(h.begin(), h.end()) > n || *std::min_element(h.begin(), h.end()) <= -n))
    throw InvalidArgument("partition pair displaces an atom past the antipode");
  std::vector<int> p;
  for (int v : h) p.push_back(mod((v + (k - 1)) / 2, n));
  std::sort(p.begin(), p.end(), std::greater<>());
  return {n, std::move(p)};
}

std::vector<std::vector<Partition>> enumerate_partitions(int max_weight) {
  if (max_weight < 0) throw InvalidArgument("max_weight must be >= 0");
  std::vector<std::vector<Partition>> out(max_weight + 1);
  Partition cur;
  int target = 0;
  std::function<void(int, int)> rec = [&](int remaining, int largest) {
    if (remaining == 0) {
      out[target].push_back(cur);
      return;
    }
    for (int v = std::min(remaining, largest); v >= 1; --v) {
      cur.push_back(v);
      rec(remaining - v, v);
      cur.pop_back();
    }
  };
  for (target = 0; target <= max_weight; ++target) rec(target, target);
  return out;
}

std::vector<std::uint64_t> partition_counts(int max_weight) {
  if (max_weight < 0) throw InvalidArgument("max_weight must be >= 0");
  std::vector<std::uint64_t> p(max_weight + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= max_weight; ++part)
    for (int w = part; w <= max_weight; ++w) p[w] += p[w - part];
  return p;
}

namespace {

void check_s(double s) {
  if (!(s > 0)) throw InvalidArgument("Gamma(s) diverges for s <= 0");
}

}  // namespace

double gamma_function(double s) {
  check_s(s);
  double q = std::exp(-s), qj = q, r = 1.0;
  while (qj > 1e-18) {
    r /= (1.0 - qj);
    qj *= q;
  }
  return r;
}

double gamma_series(double s, int W) {
  check_s(s);
  auto p = partition_counts(W);
  double acc = 0.0;
  for (int w = W; w >= 0; --w) acc += static_cast<double>(p[w]) * std::exp(-s * w);
  return acc;
}

double gamma_product(double s, int W) {
  check_s(s);
  double r = 1.0;
  for (int j = 1; j <= W; ++j) r /= (1.0 - std::exp(-s * j));
  return r;
}

double gamma_tail_bound(double s, int W) {
  check_s(s);
  return std::exp(-s * (W + 1) / 2.0) * gamma_function(s / 2.0);
}

}  // namespace circwalk
