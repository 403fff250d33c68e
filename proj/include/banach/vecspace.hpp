#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "banach/scalar.hpp"

namespace banach {

/// Coordinates are 1-based everywhere; index 0 is rejected.
using Index = std::uint32_t;

/// Finitely supported coefficient sequence over the unit vector basis.
/// Entries are kept sorted by index and only nonzero values are stored,
/// so two vectors are equal iff their entry lists are equal.
class FiniteVector {
 public:
  using Entry = std::pair<Index, Scalar>;

  FiniteVector() = default;
  /// Duplicate indices are summed; zeros are dropped.
  FiniteVector(std::initializer_list<Entry> entries);
  explicit FiniteVector(std::vector<Entry> entries);

  static FiniteVector unit(Index i, const Scalar& c = 1);

  Scalar operator[](Index i) const;
  void set(Index i, const Scalar& value);

  std::span<const Entry> entries() const { return entries_; }
  std::vector<Index> support() const;
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }
  /// Largest index in the support, or 0 for the zero vector.
  Index max_index() const { return entries_.empty() ? 0 : entries_.back().first; }
  Index min_index() const { return entries_.empty() ? 0 : entries_.front().first; }

  /// Coordinates in [lo, hi] only.
  FiniteVector restrict_to(Index lo, Index hi) const;

  FiniteVector& operator+=(const FiniteVector& other);
  FiniteVector& operator-=(const FiniteVector& other);
  FiniteVector& operator*=(const Scalar& c);

  friend FiniteVector operator+(FiniteVector a, const FiniteVector& b) { return a += b; }
  friend FiniteVector operator-(FiniteVector a, const FiniteVector& b) { return a -= b; }
  friend FiniteVector operator*(FiniteVector a, const Scalar& c) { return a *= c; }
  friend FiniteVector operator*(const Scalar& c, FiniteVector a) { return a *= c; }
  FiniteVector operator-() const;

  friend bool operator==(const FiniteVector& a, const FiniteVector& b) = default;

 private:
  void normalize();
  std::vector<Entry> entries_;
};

struct FiniteVectorHash {
  std::size_t operator()(const FiniteVector& v) const;
};

FiniteVector abs_vector(const FiniteVector& v);
Scalar inner_product(const FiniteVector& x, const FiniteVector& y);

enum class LpExponent { one, two, infinity };

/// Accepts "1", "2", "inf"/"infinity"; anything else is InvalidArgument.
LpExponent parse_lp_exponent(std::string_view text);

/// Rational enclosure lo <= sqrt(squared) <= hi.
struct SqrtEnclosure {
  Scalar lo;
  Scalar hi;
};

/// Exact square root enclosure of width at most `width` (exact when the
/// argument is the square of a rational).
SqrtEnclosure enclose_sqrt(const Scalar& squared, const Scalar& width);

struct LpNorm {
  LpExponent p;
  /// The norm for p in {1, inf}; the squared norm for p = 2.
  Scalar value;
  /// Only set for p = 2.
  std::optional<SqrtEnclosure> enclosure;
};

LpNorm lp_norm(const FiniteVector& v, LpExponent p, const Scalar& width = make_scalar(1, 1000000));

/// A computable norm on vectors supported in {1..dimension()}.
///
/// evaluate() returns ||v||^power(). Every engine except l2 has power 1;
/// l2 reports the exact squared norm so no irrational value enters exact
/// pipelines. Comparisons between values of one engine stay meaningful.
class NormEngine {
 public:
  virtual ~NormEngine() = default;

  virtual std::string name() const = 0;
  virtual Index dimension() const = 0;
  virtual int power() const { return 1; }
  /// True when ||sigma v|| = ||v|| for every sign pattern sigma.
  virtual bool unconditional() const { return true; }

  /// Throws DimensionError if the support exceeds dimension().
  Scalar evaluate(const FiniteVector& v) const {
    check_support(v);
    return evaluate_unchecked(v);
  }
  Scalar operator()(const FiniteVector& v) const { return evaluate(v); }

  void check_support(const FiniteVector& v) const;

 protected:
  virtual Scalar evaluate_unchecked(const FiniteVector& v) const = 0;
};

using NormEnginePtr = std::shared_ptr<const NormEngine>;

class LpEngine final : public NormEngine {
 public:
  LpEngine(LpExponent p, Index dimension) : p_(p), dimension_(dimension) {}
  std::string name() const override;
  Index dimension() const override { return dimension_; }
  int power() const override { return p_ == LpExponent::two ? 2 : 1; }

 protected:
  Scalar evaluate_unchecked(const FiniteVector& v) const override;

 private:
  LpExponent p_;
  Index dimension_;
};

/// Renders an engine value: `num/den`, or `sqrt(num/den)` for power 2.
std::string format_norm_value(const Scalar& value, int power);

/// Vector text format: one `<index> <num>[/<den>]` per line, sorted by
/// index, `#` starts a comment. write_vector emits the compact form, so
/// write(read(text)) reproduces canonical files byte for byte.
FiniteVector read_vector(std::istream& in);
FiniteVector read_vector_file(const std::string& path);
void write_vector(std::ostream& out, const FiniteVector& v);
void write_vector_file(const std::string& path, const FiniteVector& v);

/// Inline form used in map files: `i:num/den` tokens separated by spaces,
/// `0` for the zero vector.
std::string format_inline(const FiniteVector& v);
FiniteVector parse_inline(std::string_view text);

}  // namespace banach
