#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace banach {

/// Exact rational scalar. GMP keeps results of arithmetic in lowest terms
/// with a positive denominator; values built from raw num/den pairs go
/// through make_scalar, which canonicalizes.
using Scalar = mpq_class;

Scalar make_scalar(long num, long den = 1);

/// Parses `num/den` or `num` (optional leading sign). Throws ParseError.
Scalar parse_scalar(std::string_view text);

/// Always `num/den`, denominator included even when it is 1.
std::string format_scalar(const Scalar& s);

/// `num/den`, or just `num` when the denominator is 1.
std::string format_scalar_compact(const Scalar& s);

/// 2^-exponent.
Scalar dyadic(unsigned exponent);

std::size_t hash_scalar(const Scalar& s);

inline Scalar abs_scalar(const Scalar& s) { return s < 0 ? Scalar(-s) : s; }

}  // namespace banach
