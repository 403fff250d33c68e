#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "banach/tsirelson.hpp"
#include "banach/vecspace.hpp"

namespace banach {

/// A polyhedral norm x -> max_f f(|x|) on vectors supported in {lo..N},
/// given by nonnegative generators. The symmetric convex hull of the
/// generators is the dual unit ball.
struct PolyhedralNormDescription {
  Index lo = 1;
  Index N = 0;
  std::vector<Functional> generators;
  std::string origin = "t";

  static PolyhedralNormDescription from_norming_set(const NormingSet& set);
};

/// max over generators of f(|x|). Throws DimensionError outside {lo..N}.
Scalar support_norm(const FiniteVector& x, const PolyhedralNormDescription& d);

/// One term of a gauge decomposition: weight * (sign pattern . functional).
struct GaugeTerm {
  Functional functional;
  Scalar weight;
  /// +1/-1 for each term of `functional`, in the same order.
  std::vector<std::int8_t> signs;

  FiniteVector signed_vector() const;
};

struct GaugeCertificate {
  Scalar value;
  /// sum of weights == value and sum weight * signed functional == |y|.
  std::vector<GaugeTerm> decomposition;
  /// x >= 0 with f(x) <= 1 for every generator and <|y|, x> == value:
  /// certifies value <= ||y|| from the other side.
  FiniteVector dual_witness;
};

struct GaugeOptions {
  /// Drop rows off supp(y) and columns whose projection onto supp(y) is
  /// zero or dominated. Disabling solves the full-column LP.
  bool restrict_columns = true;
  /// Also solve the packing formulation max <|y|,x> s.t. f(x) <= 1 and
  /// require both optimal values to agree exactly.
  bool verify = false;
  std::size_t max_generators = 200'000;
};

struct GaugeResult {
  Scalar value;
  GaugeCertificate certificate;
  std::size_t pivots = 0;
  std::size_t columns = 0;
  /// Optimal value of the packing LP when options.verify was set.
  std::optional<Scalar> packing_value;
};

/// min sum_j w_j subject to |y| = sum_j w_j sigma_j f_j, w >= 0. Solved as
/// the covering LP  min 1'w  s.t.  F w >= |y|  (equivalent by
/// unconditionality); slack is removed afterwards by splitting terms into
/// sign patterns so the certificate reproduces |y| exactly.
GaugeResult gauge_norm(const FiniteVector& y, const PolyhedralNormDescription& d,
                       const GaugeOptions& options = {});

struct PackingResult {
  Scalar value;
  FiniteVector maximizer;
};

/// max <|y|, x> subject to f(x) <= 1 for all generators, x >= 0.
PackingResult packing_norm(const FiniteVector& y, const PolyhedralNormDescription& d,
                           const GaugeOptions& options = {});

/// Throws VerificationError unless `cert` is an exact certificate for
/// ||y|| = cert.value against `d`.
void check_certificate(const FiniteVector& y, const PolyhedralNormDescription& d,
                       const GaugeCertificate& cert);

/// One decomposition term per line: `<weight> <sign-pattern> <functional>`.
std::string format_certificate(const GaugeCertificate& cert);

/// The dual norm of T on {lo..N}, from a prepared norming set. Results are
/// memoized by |y| behind a mutex, so one engine may be shared by threads.
class TStarEngine final : public NormEngine {
 public:
  explicit TStarEngine(std::shared_ptr<const PolyhedralNormDescription> description,
                       GaugeOptions options = {});

  std::string name() const override { return "tstar"; }
  Index dimension() const override { return description_->N; }
  const PolyhedralNormDescription& description() const { return *description_; }

  GaugeResult solve(const FiniteVector& y) const;

 protected:
  Scalar evaluate_unchecked(const FiniteVector& v) const override;

 private:
  std::shared_ptr<const PolyhedralNormDescription> description_;
  GaugeOptions options_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<FiniteVector, Scalar, FiniteVectorHash> memo_;
};

/// Convenience: tstar_norm against a description.
Scalar tstar_norm(const FiniteVector& y, const PolyhedralNormDescription& d,
                  const GaugeOptions& options = {});

}  // namespace banach
