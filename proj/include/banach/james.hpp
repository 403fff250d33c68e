#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "banach/tsirelson.hpp"
#include "banach/vecspace.hpp"

namespace banach {

/// Successive intervals s_1 < s_2 < ... < s_n (adjacent intervals allowed).
struct IntervalSystem {
  std::vector<Interval> intervals;

  /// p_i = min s_i.
  std::vector<Index> anchors() const;
  friend bool operator==(const IntervalSystem&, const IntervalSystem&) = default;
};

/// Calls `visit` once for every nonempty interval system inside `span`, in
/// depth-first order (cheaper than the canonical order; used for sups).
void for_each_interval_system(Interval span,
                              const std::function<void(const std::vector<Interval>&)>& visit);

/// Every nonempty interval system inside `span`, in canonical order: by
/// number of intervals, then by number of covered points, then
/// lexicographically by the (lo, hi) endpoint sequence.
std::vector<IntervalSystem> enumerate_interval_systems(Interval span);

/// sup over interval systems inside `span` (default {1..max supp a}) of
///   base( sum_i (sum_{j in s_i} a_j) u_{min s_i} ).
/// Base calls are memoized per call by the assembled vector (by its
/// absolute value when the base is unconditional).
Scalar james_norm(const FiniteVector& a, const NormEngine& base,
                  std::optional<Interval> span = std::nullopt);

/// J[(u_i)] over the unit vector basis of a base engine.
class JamesEngine final : public NormEngine {
 public:
  explicit JamesEngine(NormEnginePtr base);

  std::string name() const override { return "james:" + base_->name(); }
  Index dimension() const override { return base_->dimension(); }
  int power() const override { return base_->power(); }
  bool unconditional() const override { return false; }
  const NormEngine& base() const { return *base_; }

 protected:
  Scalar evaluate_unchecked(const FiniteVector& v) const override {
    return james_norm(v, *base_);
  }

 private:
  NormEnginePtr base_;
};

}  // namespace banach
