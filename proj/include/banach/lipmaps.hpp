#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "banach/combinatorics.hpp"
#include "banach/vecspace.hpp"

namespace banach {

enum class Metric { hamming, johnson };

std::string metric_name(Metric m);
Metric parse_metric(std::string_view text);

/// Scalar extended by +infinity (the value of an empty infimum).
struct Extended {
  bool infinite = false;
  Scalar value;

  static Extended infinity() { return {true, 0}; }
  static Extended finite(Scalar v) { return {false, std::move(v)}; }
  friend bool operator==(const Extended&, const Extended&) = default;
};

std::string format_extended(const Extended& e, int power);

/// Codomain distances for every unordered pair of domain points, computed
/// once. Values are ||f(m) - f(n)||^p with p the codomain engine's power.
struct PairDistance {
  std::uint32_t i;
  std::uint32_t j;
  std::uint32_t domain;
  Scalar codomain;
};

/// f : ([M]^k, d) -> codomain, tabulated on all of [M]^k (colex order).
class FiniteLipschitzMap {
 public:
  FiniteLipschitzMap(GroundSet ground, std::size_t k, Metric metric, NormEnginePtr codomain,
                     const std::function<FiniteVector(const KSubset&)>& image);
  /// Images listed in the colex order of [M]^k.
  FiniteLipschitzMap(GroundSet ground, std::size_t k, Metric metric, NormEnginePtr codomain,
                     std::vector<FiniteVector> images);

  const GroundSet& ground() const { return ground_; }
  std::size_t k() const { return k_; }
  Metric metric() const { return metric_; }
  const NormEngine& codomain() const { return *codomain_; }
  NormEnginePtr codomain_ptr() const { return codomain_; }
  int power() const { return codomain_->power(); }

  const std::vector<KSubset>& points() const { return points_; }
  const std::vector<FiniteVector>& images() const { return images_; }
  std::size_t index_of(const KSubset& s) const;
  const FiniteVector& image(const KSubset& s) const { return images_[index_of(s)]; }

  std::size_t domain_distance(const KSubset& a, const KSubset& b) const;

  /// All unordered pairs i < j, row-major. The first call computes the
  /// table with `jobs` worker threads; later calls return the same table.
  const std::vector<PairDistance>& pair_distances(unsigned jobs = 1) const;

 private:
  void validate();

  GroundSet ground_;
  std::size_t k_;
  Metric metric_;
  NormEnginePtr codomain_;
  std::vector<KSubset> points_;
  std::vector<FiniteVector> images_;
  std::map<KSubset, std::size_t> index_;
  struct DistanceCache {
    std::mutex mutex;
    bool ready = false;
    std::vector<PairDistance> pairs;
  };
  std::shared_ptr<DistanceCache> cache_ = std::make_shared<DistanceCache>();
};

/// max over pairs with d > 0 of ||f(m)-f(n)||^p / d^p (so Lip^p).
/// Throws InvalidArgument when the domain has fewer than two points.
Scalar lip_constant(const FiniteLipschitzMap& f);

/// inf{ ||f(x)-f(y)|| : d(x,y) >= t }, +infinity when no pair qualifies.
/// Diagonal pairs (d = 0) take part, so rho(t) = 0 for t <= 0.
Extended compression_modulus(const FiniteLipschitzMap& f, const Scalar& t);
/// sup{ ||f(x)-f(y)|| : d(x,y) <= t }, 0 when no pair qualifies.
Scalar expansion_modulus(const FiniteLipschitzMap& f, const Scalar& t);

struct ModuliProfile {
  std::vector<Scalar> thresholds;
  std::vector<Extended> rho;
  std::vector<Scalar> omega;
};

ModuliProfile moduli_profile(const FiniteLipschitzMap& f, std::vector<Scalar> thresholds);

struct CoarseFit {
  Scalar c1;
  Scalar c2;
};

/// Tightest c1 <= ||f(x)-f(y)|| / d(x,y) <= c2 over pairs with
/// d(x,y) >= theta and d(x,y) > 0 (in the engine's power). Throws
/// InvalidArgument if no pair qualifies.
CoarseFit coarse_lipschitz_fit(const FiniteLipschitzMap& f, const Scalar& theta);

/// f(m) = 1/2 sum_i x_{m_i}; `basis_images[p]` is x at the p-th element of
/// the ground set. Images must lie in the codomain unit ball.
FiniteLipschitzMap summing_map(const GroundSet& ground,
                               const std::vector<FiniteVector>& basis_images, std::size_t k,
                               NormEnginePtr codomain, Metric metric = Metric::hamming);

/// f(m) = 1/2 sum_i x^(i)_{m_i}; `rows[i][p]` is x^(i+1) at the p-th ground
/// element. Requires exactly k rows of |M| entries each.
FiniteLipschitzMap array_map(const GroundSet& ground,
                             const std::vector<std::vector<FiniteVector>>& rows, std::size_t k,
                             NormEnginePtr codomain, Metric metric = Metric::hamming);

FiniteLipschitzMap constant_map(const GroundSet& ground, std::size_t k, const FiniteVector& value,
                                NormEnginePtr codomain, Metric metric = Metric::hamming);

/// x_n = e_n for n in M: the l1 basis, or the canonical basis of J[(u_i)]
/// when the codomain is a James engine.
std::vector<FiniteVector> unit_images(const GroundSet& ground);

/// x^(i)_j = e_{(i-1)|M| + pos(j) + 1}: disjointly supported rows.
std::vector<std::vector<FiniteVector>> disjoint_block_rows(const GroundSet& ground, std::size_t k);

/// Map file: header `k=<k> metric=<m> codomain=<name> ground={...}`, then
/// `{m1,...,mk} -> <inline vector>` per point.
void write_map(std::ostream& out, const FiniteLipschitzMap& f);

/// `resolve(name, dimension)` builds the codomain named in the header.
/// Inline entries may be replaced by `@path` to a vector file.
FiniteLipschitzMap read_map(std::istream& in,
                            const std::function<NormEnginePtr(const std::string&, Index)>& resolve);

/// CSV with header `pair,d_domain,d_codomain,ratio`.
void write_pair_csv(std::ostream& out, const FiniteLipschitzMap& f);

}  // namespace banach
