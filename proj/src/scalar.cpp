#include "banach/scalar.hpp"

#include <cctype>

#include "banach/errors.hpp"

namespace banach {

Scalar make_scalar(long num, long den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  Scalar s(num, den);
  s.canonicalize();
  return s;
}

namespace {

bool is_integer_token(std::string_view t, bool allow_sign) {
  if (t.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view t) {
  if (!t.empty() && t[0] == '+') t.remove_prefix(1);
  return mpz_class(std::string(t), 10);
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!is_integer_token(num_text, true)) {
    throw ParseError("invalid rational '" + std::string(text) + "'");
  }
  Scalar s;
  s.get_num() = parse_integer(num_text);
  if (slash == std::string_view::npos) {
    s.get_den() = 1;
  } else {
    const auto den_text = text.substr(slash + 1);
    if (!is_integer_token(den_text, false)) {
      throw ParseError("invalid rational '" + std::string(text) + "'");
    }
    s.get_den() = parse_integer(den_text);
    if (s.get_den() == 0) {
      throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
  }
  s.canonicalize();
  return s;
}

std::string format_scalar(const Scalar& s) {
  return s.get_num().get_str() + "/" + s.get_den().get_str();
}

std::string format_scalar_compact(const Scalar& s) {
  if (s.get_den() == 1) return s.get_num().get_str();
  return format_scalar(s);
}

Scalar dyadic(unsigned exponent) {
  Scalar s(1);
  mpq_div_2exp(s.get_mpq_t(), s.get_mpq_t(), exponent);
  return s;
}

std::size_t hash_scalar(const Scalar& s) {
  const auto num = mpz_get_ui(s.get_num_mpz_t());
  const auto den = mpz_get_ui(s.get_den_mpz_t());
  std::size_t h = static_cast<std::size_t>(num) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::size_t>(den) + 0x9e3779b9 + (h << 6) + (h >> 2);
  h ^= static_cast<std::size_t>(mpz_sgn(s.get_num_mpz_t()) + 1) << 1;
  h ^= mpz_size(s.get_num_mpz_t()) * 31 + mpz_size(s.get_den_mpz_t());
  return h;
}

}  // namespace banach
