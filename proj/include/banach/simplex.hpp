#pragma once

#include <cstddef>
#include <vector>

#include "banach/scalar.hpp"

namespace banach::lp {

/// A feasible dictionary (Chvatal form):
///
///   maximize  z = z0 + sum_j c[j] x_{nonbasic[j]}
///   subject   x_{basic[i]} = b[i] - sum_j a[i][j] x_{nonbasic[j]},  all x >= 0,
///
/// with b >= 0. Variable ids are arbitrary distinct integers; Bland's rule
/// uses their order for entering/leaving ties, which guarantees termination.
struct Dictionary {
  std::vector<int> basic;
  std::vector<int> nonbasic;
  std::vector<Scalar> b;
  std::vector<std::vector<Scalar>> a;
  std::vector<Scalar> c;
  Scalar z0 = 0;

  std::size_t rows() const { return basic.size(); }
  std::size_t cols() const { return nonbasic.size(); }
};

enum class Status { optimal, unbounded };

struct Outcome {
  Status status = Status::optimal;
  std::size_t pivots = 0;
};

/// Runs exact simplex with Bland's rule in place. On return the dictionary
/// is optimal (all c <= 0) or unbounded. Throws ResourceLimitError after
/// `max_pivots` pivots.
Outcome maximize(Dictionary& dict, std::size_t max_pivots = 1'000'000);

/// Value of variable `id` in the current basic solution.
Scalar value_of(const Dictionary& dict, int id);

/// Reduced objective coefficient of a nonbasic variable (0 if basic).
Scalar reduced_cost(const Dictionary& dict, int id);

}  // namespace banach::lp
