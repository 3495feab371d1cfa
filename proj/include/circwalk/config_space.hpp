#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace circwalk {

inline constexpr std::uint64_t kDefaultCap = 200000;

// k particles on Z/n, positions strictly decreasing.
class CircleConfig {
 public:
  CircleConfig(int n, std::vector<int> positions);

  static CircleConfig ground(int n, int k);
  // I0 with the top particle moved up one site.
  static CircleConfig first_excited(int n, int k);
  // Top particle up one, bottom particle down one (wraps to n-1).
  static CircleConfig second_excited(int n, int k);

  int n() const { return n_; }
  int k() const { return static_cast<int>(pos_.size()); }
  const std::vector<int>& positions() const { return pos_; }
  int operator[](int j) const { return pos_[j]; }

  // "(3,2,0)"
  std::string to_string() const;

  bool operator==(const CircleConfig& o) const = default;
  std::strong_ordering operator<=>(const CircleConfig& o) const;

 private:
  int n_;
  std::vector<int> pos_;
};

// exp(i*pi*(2 I_j - (k-1))/n), evaluated directly so half-integer exponents are exact.
Eigen::VectorXcd xi(const CircleConfig& c);

CircleConfig shift(const CircleConfig& c, long t);

// Saturates at UINT64_MAX.
std::uint64_t binomial(int n, int k);

std::vector<CircleConfig> enumerate_configs(int n, int k, std::uint64_t cap = kDefaultCap);

// Enumerated B_{k,n} with O(k) config -> index lookup (combinatorial number system).
class StateSpace {
 public:
  StateSpace(int n, int k, std::uint64_t cap = kDefaultCap);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return configs_.size(); }
  const CircleConfig& operator[](std::size_t i) const { return configs_[i]; }
  const std::vector<CircleConfig>& configs() const { return configs_; }
  std::size_t index_of(const CircleConfig& c) const;
  std::size_t ground_index() const { return index_of(CircleConfig::ground(n_, k_)); }

 private:
  int n_, k_;
  std::vector<CircleConfig> configs_;
};

struct OrbitClass {
  CircleConfig representative;  // lexicographically smallest member
  int size;

  std::vector<CircleConfig> members() const;
};

std::vector<OrbitClass> orbit_decompose(int n, int k, std::uint64_t cap = kDefaultCap);

// Atoms 2*I_j - (k-1) reduced into (-n, n]: twice the centred step, so atom h sits at
// angle h*pi/n. A site exactly opposite the centre lands at +n (angle +pi).
std::vector<int> doubled_atoms(const CircleConfig& c);

using Partition = std::vector<int>;

struct PartitionPair {
  Partition mu;
  Partition nu;

  int weight() const;
  bool empty() const { return mu.empty() && nu.empty(); }
  std::string to_string() const;
  bool operator==(const PartitionPair&) const = default;
};

struct PartitionBox {
  int max_part = 1 << 30;
  int max_length = 1 << 30;
};

// Box implied by a displacement threshold c2/log n around the edge of I0's arc.
PartitionBox box_from_threshold(int n, double c2);

// Defined on balanced configs: ceil(k/2) nonnegative atoms. mu_j (nu_j) is the outward
// displacement, in sites, of the j-th outermost nonnegative (negative) atom relative to I0.
std::optional<PartitionPair> partition_pair_from_config(const CircleConfig& c,
                                                        const PartitionBox& box = {});

CircleConfig config_from_partition_pair(int n, int k, const PartitionPair& tau,
                                        const PartitionBox& box = {});

// result[w] lists the partitions of w in reverse lexicographic order.
std::vector<std::vector<Partition>> enumerate_partitions(int max_weight);
std::vector<std::uint64_t> partition_counts(int max_weight);

// sum_{w<=W} p(w) e^{-s w}
double gamma_series(double s, int W);
// prod_{j<=W} (1-e^{-s j})^{-1}
double gamma_product(double s, int W);
// Gamma(s) from the infinite product, truncated once factors are 1 to double precision.
double gamma_function(double s);
// Rigorous bound on sum_{w>W} p(w) e^{-s w}: e^{-s(W+1)/2} * Gamma(s/2).
double gamma_tail_bound(double s, int W);

}  // namespace circwalk
