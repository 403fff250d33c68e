#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banach/vecspace.hpp"

namespace banach {

/// The integer interval {lo, lo+1, ..., hi}.
struct Interval {
  Index lo = 1;
  Index hi = 1;

  Index size() const { return hi - lo + 1; }
  bool contains(Index i) const { return lo <= i && i <= hi; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Successive (max E_j < min E_{j+1}) and n <= min E_1. An empty family is
/// not admissible.
bool is_admissible(std::span<const Interval> parts);

/// Exact Tsirelson norm of v, via the implicit equation
///   ||x|| = max(||x||_inf, 1/2 sup sum_j ||E_j x||)
/// over admissible families. Works on |v| and restricts the E_j to
/// consecutive intervals partitioning [max(a, n), b]; values of
/// restrictions to intervals are filled bottom-up by length.
Scalar t_norm(const FiniteVector& v);

/// Lexicographically smallest admissible interval family that attains the
/// norm through the averaging branch, or nullopt when only the sup-norm
/// branch attains it.
std::optional<std::vector<Interval>> t_norm_witness(const FiniteVector& v);

class TsirelsonEngine final : public NormEngine {
 public:
  explicit TsirelsonEngine(Index dimension) : dimension_(dimension) {}
  std::string name() const override { return "t"; }
  Index dimension() const override { return dimension_; }

 protected:
  Scalar evaluate_unchecked(const FiniteVector& v) const override { return t_norm(v); }

 private:
  Index dimension_;
};

/// Nonnegative representative of a norming functional of T: coordinate i
/// carries 2^-depth(i). Signed functionals are never materialized.
class Functional {
 public:
  using Term = std::pair<Index, std::uint8_t>;

  Functional() = default;
  /// Terms must be strictly increasing in index.
  explicit Functional(std::vector<Term> terms);
  static Functional unit(Index i) { return Functional({{i, 0}}); }

  std::span<const Term> terms() const { return terms_; }
  FiniteVector coefficients() const;
  /// Number of averaging steps: the largest exponent present.
  unsigned depth() const;
  Index min_index() const { return terms_.empty() ? 0 : terms_.front().first; }
  Index max_index() const { return terms_.empty() ? 0 : terms_.back().first; }

  /// f(x) = sum_i 2^-depth(i) x_i.
  Scalar apply(const FiniteVector& x) const;
  /// Coordinatewise f >= g.
  bool dominates(const Functional& g) const;
  /// Drops coordinates outside `support` (sorted).
  Functional project(std::span<const Index> support) const;

  friend auto operator<=>(const Functional&, const Functional&) = default;
  friend bool operator==(const Functional&, const Functional&) = default;

 private:
  std::vector<Term> terms_;
};

/// `(i:num/den) (j:num/den) ...`
std::string format_functional(const Functional& f);
Functional parse_functional(const std::string& line);

struct NormingSetOptions {
  bool prune = true;
  /// Widest window N - lo + 1 accepted without an explicit override.
  Index generation_limit = 10;
  /// Refuse to hold more functionals than this.
  std::size_t max_count = 5'000'000;
};

struct NormingSet {
  Index lo = 1;
  Index N = 0;
  bool prune = true;
  /// Sorted, duplicate free.
  std::vector<Functional> functionals;

  std::size_t size() const { return functionals.size(); }
  /// max_f f(|x|); equals t_norm(x) for x supported in {lo..N}.
  Scalar support_value(const FiniteVector& x) const;
};

/// Closure of {e_i* : lo <= i <= N} under f -> (f_1 + ... + f_n) / 2 for
/// n >= 2 functionals with successive supports and n <= min supp f_1,
/// restricted to supports inside [lo, N]. With prune, functionals
/// dominated coordinatewise by another member are dropped.
NormingSet norming_set(Index N, const NormingSetOptions& options = {});
NormingSet norming_set_window(Index lo, Index N, const NormingSetOptions& options = {});

inline constexpr int kNormingSetFormatVersion = 1;

void save_norming_set(const NormingSet& set, std::ostream& out);
void save_norming_set(const NormingSet& set, const std::string& path);

struct LoadedNormingSet {
  NormingSet set;
  std::vector<std::string> warnings;
};

/// Throws VersionError, ChecksumError or ParseError. When expected_prune is
/// given and differs from the file, the set is still accepted and the
/// mismatch is reported in `warnings`.
LoadedNormingSet load_norming_set(std::istream& in, std::optional<bool> expected_prune = {});
LoadedNormingSet load_norming_set(const std::string& path,
                                  std::optional<bool> expected_prune = {});

}  // namespace banach
