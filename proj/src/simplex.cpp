#include "banach/simplex.hpp"

#include <algorithm>
#include <limits>

#include "banach/errors.hpp"

namespace banach::lp {

namespace {

void pivot(Dictionary& d, std::size_t r, std::size_t s) {
  const Scalar inv = 1 / d.a[r][s];
  auto& row = d.a[r];
  // Solve row r for the entering variable.
  d.b[r] *= inv;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (j == s) {
      row[j] = inv;
    } else if (row[j] != 0) {
      row[j] *= inv;
    }
  }
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (i == r) continue;
    auto& other = d.a[i];
    const Scalar factor = other[s];
    if (factor == 0) continue;
    d.b[i] -= factor * d.b[r];
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (j == s) {
        other[j] = -factor * row[j];
      } else if (row[j] != 0) {
        other[j] -= factor * row[j];
      }
    }
  }
  const Scalar cs = d.c[s];
  if (cs != 0) {
    d.z0 += cs * d.b[r];
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (j == s) {
        d.c[j] = -cs * row[j];
      } else if (row[j] != 0) {
        d.c[j] -= cs * row[j];
      }
    }
  }
  std::swap(d.basic[r], d.nonbasic[s]);
}

}  // namespace

Outcome maximize(Dictionary& d, std::size_t max_pivots) {
  Outcome outcome;
  while (true) {
    // Entering: smallest variable id with positive reduced cost.
    std::size_t s = d.cols();
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (d.c[j] > 0 && (s == d.cols() || d.nonbasic[j] < d.nonbasic[s])) s = j;
    }
    if (s == d.cols()) return outcome;

    std::size_t r = d.rows();
    Scalar best_ratio;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      if (d.a[i][s] <= 0) continue;
      Scalar ratio = d.b[i] / d.a[i][s];
      if (r == d.rows() || ratio < best_ratio ||
          (ratio == best_ratio && d.basic[i] < d.basic[r])) {
        r = i;
        best_ratio = std::move(ratio);
      }
    }
    if (r == d.rows()) {
      outcome.status = Status::unbounded;
      return outcome;
    }
    if (outcome.pivots >= max_pivots) {
      throw ResourceLimitError("simplex pivot limit reached");
    }
    pivot(d, r, s);
    ++outcome.pivots;
  }
}

Scalar value_of(const Dictionary& d, int id) {
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (d.basic[i] == id) return d.b[i];
  }
  return 0;
}

Scalar reduced_cost(const Dictionary& d, int id) {
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (d.nonbasic[j] == id) return d.c[j];
  }
  return 0;
}

}  // namespace banach::lp
