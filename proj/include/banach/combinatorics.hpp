#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "banach/vecspace.hpp"

namespace banach {

/// A k-subset of N listed in increasing order, k >= 1.
class KSubset {
 public:
  KSubset() = default;
  /// Throws InvalidArgument unless strictly increasing, nonempty and positive.
  explicit KSubset(std::vector<Index> elements);
  KSubset(std::initializer_list<Index> elements) : KSubset(std::vector<Index>(elements)) {}

  std::size_t size() const { return elements_.size(); }
  Index operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Index>& elements() const { return elements_; }

  friend auto operator<=>(const KSubset&, const KSubset&) = default;

 private:
  std::vector<Index> elements_;
};

/// Finite strictly increasing ground set M.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<Index> elements);
  GroundSet(std::initializer_list<Index> elements) : GroundSet(std::vector<Index>(elements)) {}
  /// {lo, ..., hi}
  static GroundSet range(Index lo, Index hi);

  std::size_t size() const { return elements_.size(); }
  Index operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Index>& elements() const { return elements_; }
  bool contains(Index m) const;
  /// Position of m in the ground set; throws if absent.
  std::size_t position(Index m) const;
  bool is_range() const;

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  std::vector<Index> elements_;
};

/// Colexicographic order: compare largest elements first.
bool colex_less(const KSubset& a, const KSubset& b);

/// |{i : m_i != n_i}| on the sorted representatives.
std::size_t hamming_distance(const KSubset& m, const KSubset& n);
/// Half the size of the symmetric difference.
std::size_t johnson_distance(const KSubset& m, const KSubset& n);

/// m_1 < n_1 < m_2 < n_2 < ... < m_k < n_k (ordered).
bool is_interlaced(const KSubset& m, const KSubset& n);

/// s^(1)_1 < s^(2)_1 < ... < s^(k)_1 < s^(1)_2 < ... < s^(k)_m.
/// Throws InvalidArgument for an empty or ragged family.
bool is_plegma(const std::vector<std::vector<Index>>& family);

/// [M]^k in colexicographic order.
std::vector<KSubset> enumerate_ksubsets(const GroundSet& ground, std::size_t k);

using KSubsetPair = std::pair<KSubset, KSubset>;

/// I_k(M). Each 2k-subset of M splits into exactly one interlaced pair
/// (odd positions, even positions); pairs come in colex order of that
/// 2k-subset.
std::vector<KSubsetPair> enumerate_interlaced_pairs(const GroundSet& ground, std::size_t k);

/// `{m1,m2,...,mk}`
std::string format_ksubset(const KSubset& s);
KSubset parse_ksubset(std::string_view text);
/// `{...}|{...}`
std::string format_pair(const KSubsetPair& p);
KSubsetPair parse_pair(std::string_view text);
/// `{...}` for ground sets (same syntax, any size).
std::string format_ground(const GroundSet& g);
GroundSet parse_ground(std::string_view text);

}  // namespace banach
