#include "banach/vecspace.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "banach/errors.hpp"

namespace banach {

FiniteVector::FiniteVector(std::initializer_list<Entry> entries)
    : entries_(entries) {
  normalize();
}

FiniteVector::FiniteVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
  normalize();
}

FiniteVector FiniteVector::unit(Index i, const Scalar& c) { return FiniteVector{{i, c}}; }

void FiniteVector::normalize() {
  for (const auto& e : entries_) {
    if (e.first == 0) throw InvalidArgument("vector index 0 (indices are 1-based)");
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (auto& e : entries_) {
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second += e.second;
    } else {
      merged.push_back(std::move(e));
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.second == 0; });
  entries_ = std::move(merged);
}

Scalar FiniteVector::operator[](Index i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Index k) { return e.first < k; });
  if (it != entries_.end() && it->first == i) return it->second;
  return 0;
}

void FiniteVector::set(Index i, const Scalar& value) {
  if (i == 0) throw InvalidArgument("vector index 0 (indices are 1-based)");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Index k) { return e.first < k; });
  if (it != entries_.end() && it->first == i) {
    if (value == 0) {
      entries_.erase(it);
    } else {
      it->second = value;
    }
  } else if (value != 0) {
    entries_.insert(it, Entry{i, value});
  }
}

std::vector<Index> FiniteVector::support() const {
  std::vector<Index> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

FiniteVector FiniteVector::restrict_to(Index lo, Index hi) const {
  FiniteVector out;
  for (const auto& e : entries_) {
    if (e.first >= lo && e.first <= hi) out.entries_.push_back(e);
  }
  return out;
}

namespace {

template <typename Op>
std::vector<FiniteVector::Entry> merge(std::span<const FiniteVector::Entry> a,
                                       std::span<const FiniteVector::Entry> b, Op op) {
  std::vector<FiniteVector::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, op(Scalar(0), b[j].second));
      ++j;
    } else {
      Scalar s = op(a[i].second, b[j].second);
      if (s != 0) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

FiniteVector& FiniteVector::operator+=(const FiniteVector& other) {
  entries_ = merge(entries_, other.entries_,
                   [](const Scalar& x, const Scalar& y) -> Scalar { return x + y; });
  return *this;
}

FiniteVector& FiniteVector::operator-=(const FiniteVector& other) {
  entries_ = merge(entries_, other.entries_,
                   [](const Scalar& x, const Scalar& y) -> Scalar { return x - y; });
  return *this;
}

FiniteVector& FiniteVector::operator*=(const Scalar& c) {
  if (c == 0) {
    entries_.clear();
  } else {
    for (auto& e : entries_) e.second *= c;
  }
  return *this;
}

FiniteVector FiniteVector::operator-() const {
  FiniteVector out = *this;
  for (auto& e : out.entries_) e.second = -e.second;
  return out;
}

std::size_t FiniteVectorHash::operator()(const FiniteVector& v) const {
  std::size_t h = v.nnz();
  for (const auto& [i, c] : v.entries()) {
    h ^= (static_cast<std::size_t>(i) * 0x100000001b3ULL) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= hash_scalar(c) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

FiniteVector abs_vector(const FiniteVector& v) {
  std::vector<FiniteVector::Entry> entries(v.entries().begin(), v.entries().end());
  for (auto& e : entries) {
    if (e.second < 0) e.second = -e.second;
  }
  return FiniteVector(std::move(entries));
}

Scalar inner_product(const FiniteVector& x, const FiniteVector& y) {
  Scalar sum = 0;
  auto a = x.entries();
  auto b = y.entries();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      sum += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return sum;
}

LpExponent parse_lp_exponent(std::string_view text) {
  if (text == "1") return LpExponent::one;
  if (text == "2") return LpExponent::two;
  if (text == "inf" || text == "infinity" || text == "oo") return LpExponent::infinity;
  throw InvalidArgument("invalid p '" + std::string(text) + "' (expected 1, 2 or inf)");
}

SqrtEnclosure enclose_sqrt(const Scalar& squared, const Scalar& width) {
  if (squared < 0) throw InvalidArgument("square root of a negative value");
  if (width <= 0) throw InvalidArgument("enclosure width must be positive");
  if (mpz_perfect_square_p(squared.get_num_mpz_t()) &&
      mpz_perfect_square_p(squared.get_den_mpz_t())) {
    Scalar root;
    mpz_sqrt(root.get_num_mpz_t(), squared.get_num_mpz_t());
    mpz_sqrt(root.get_den_mpz_t(), squared.get_den_mpz_t());
    root.canonicalize();
    return {root, root};
  }
  // Grid of step 1/q with q >= 1/width: lo = floor(q sqrt(s)) / q.
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), width.get_den_mpz_t(), width.get_num_mpz_t());
  if (q < 1) q = 1;
  mpz_class scaled = squared.get_num() * q * q;
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), squared.get_den_mpz_t());
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Scalar lo(root, q);
  lo.canonicalize();
  Scalar hi(root + 1, q);
  hi.canonicalize();
  return {lo, hi};
}

LpNorm lp_norm(const FiniteVector& v, LpExponent p, const Scalar& width) {
  LpNorm out{p, 0, std::nullopt};
  for (const auto& [i, c] : v.entries()) {
    switch (p) {
      case LpExponent::one:
        out.value += abs_scalar(c);
        break;
      case LpExponent::two:
        out.value += c * c;
        break;
      case LpExponent::infinity:
        if (abs_scalar(c) > out.value) out.value = abs_scalar(c);
        break;
    }
  }
  if (p == LpExponent::two) out.enclosure = enclose_sqrt(out.value, width);
  return out;
}

void NormEngine::check_support(const FiniteVector& v) const {
  if (v.max_index() > dimension()) {
    throw DimensionError(name() + ": support reaches index " + std::to_string(v.max_index()) +
                         " beyond dimension " + std::to_string(dimension()));
  }
}

std::string LpEngine::name() const {
  switch (p_) {
    case LpExponent::one:
      return "l1";
    case LpExponent::two:
      return "l2";
    case LpExponent::infinity:
      return "linf";
  }
  return "lp";
}

Scalar LpEngine::evaluate_unchecked(const FiniteVector& v) const { return lp_norm(v, p_).value; }

std::string format_norm_value(const Scalar& value, int power) {
  if (power == 1) return format_scalar(value);
  if (power == 2) return "sqrt(" + format_scalar(value) + ")";
  return "(" + format_scalar(value) + ")^(1/" + std::to_string(power) + ")";
}

FiniteVector read_vector(std::istream& in) {
  std::vector<FiniteVector::Entry> entries;
  std::string line;
  int line_no = 0;
  Index previous = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string index_text, value_text, extra;
    if (!(fields >> index_text)) continue;
    if (!(fields >> value_text) || (fields >> extra)) {
      throw ParseError("vector line " + std::to_string(line_no) +
                       ": expected '<index> <num>/<den>'");
    }
    Index index = 0;
    try {
      std::size_t used = 0;
      const unsigned long raw = std::stoul(index_text, &used);
      if (used != index_text.size() || raw == 0 || raw > 0xffffffffUL) throw std::out_of_range("");
      index = static_cast<Index>(raw);
    } catch (const std::exception&) {
      throw ParseError("vector line " + std::to_string(line_no) + ": invalid index '" +
                       index_text + "'");
    }
    if (index <= previous) {
      throw ParseError("vector line " + std::to_string(line_no) +
                       ": indices must be strictly increasing");
    }
    previous = index;
    try {
      entries.emplace_back(index, parse_scalar(value_text));
    } catch (const ParseError& e) {
      throw ParseError("vector line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return FiniteVector(std::move(entries));
}

FiniteVector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vector file '" + path + "'");
  return read_vector(in);
}

void write_vector(std::ostream& out, const FiniteVector& v) {
  for (const auto& [i, c] : v.entries()) out << i << ' ' << format_scalar_compact(c) << '\n';
}

void write_vector_file(const std::string& path, const FiniteVector& v) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write vector file '" + path + "'");
  write_vector(out, v);
}

std::string format_inline(const FiniteVector& v) {
  if (v.is_zero()) return "0";
  std::string out;
  for (const auto& [i, c] : v.entries()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i) + ":" + format_scalar(c);
  }
  return out;
}

FiniteVector parse_inline(std::string_view text) {
  std::vector<FiniteVector::Entry> entries;
  std::istringstream tokens{std::string(text)};
  std::string token;
  while (tokens >> token) {
    if (token == "0") continue;
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw ParseError("inline vector: bad token '" + token + "'");
    unsigned long index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(token.substr(0, colon), &used);
      if (used != colon || index == 0) throw std::out_of_range("");
    } catch (const std::exception&) {
      throw ParseError("inline vector: bad index in '" + token + "'");
    }
    if (!entries.empty() && entries.back().first >= index) {
      throw ParseError("inline vector: indices must be strictly increasing");
    }
    entries.emplace_back(static_cast<Index>(index), parse_scalar(token.substr(colon + 1)));
  }
  return FiniteVector(std::move(entries));
}

}  // namespace banach
