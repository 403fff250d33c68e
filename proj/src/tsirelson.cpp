#include "banach/tsirelson.hpp"

#include <algorithm>
#include <sstream>

#include "banach/errors.hpp"

namespace banach {

bool is_admissible(std::span<const Interval> parts) {
  if (parts.empty()) return false;
  for (const auto& p : parts) {
    if (p.lo > p.hi) throw InvalidArgument("malformed interval");
  }
  for (std::size_t j = 0; j + 1 < parts.size(); ++j) {
    if (!(parts[j].hi < parts[j + 1].lo)) return false;
  }
  return parts.size() <= parts.front().lo;
}

namespace {

// Norm values of |x| restricted to every interval [a, b] of {1..len}, plus
// best[n][a][b]: the largest sum of restricted norms over partitions of
// [a, b] into n consecutive nonempty intervals.
class IntervalTable {
 public:
  explicit IntervalTable(const FiniteVector& v) : len_(v.max_index()) {
    x_.assign(len_ + 1, Scalar(0));
    for (const auto& [i, c] : v.entries()) x_[i] = abs_scalar(c);
    best_.assign((len_ + 1) * (len_ + 1) * (len_ + 1), Scalar(0));
    for (Index length = 1; length <= len_; ++length) {
      for (Index a = 1; a + length - 1 <= len_; ++a) fill(a, a + length - 1);
    }
  }

  Index length() const { return len_; }
  const Scalar& norm(Index a, Index b) const { return best(1, a, b); }
  const Scalar& best(Index n, Index a, Index b) const { return best_[key(n, a, b)]; }

  // The averaging branch: 1/2 max_n best[n][max(a,n)][b], n >= 2.
  Scalar averaged(Index a, Index b) const {
    Scalar top = 0;
    for (Index n = 2; n <= b; ++n) {
      const Index s = std::max(a, n);
      if (s + n - 1 > b) break;
      if (best(n, s, b) > top) top = best(n, s, b);
    }
    return top / 2;
  }

 private:
  std::size_t key(Index n, Index a, Index b) const {
    return (static_cast<std::size_t>(n) * (len_ + 1) + a) * (len_ + 1) + b;
  }

  void fill(Index a, Index b) {
    const Index length = b - a + 1;
    // Multi-part partitions only touch strictly shorter intervals.
    for (Index n = 2; n <= length; ++n) {
      Scalar top = 0;
      for (Index c = a; c + (n - 1) <= b; ++c) {
        Scalar candidate = norm(a, c) + best(n - 1, c + 1, b);
        if (candidate > top) top = std::move(candidate);
      }
      best_[key(n, a, b)] = std::move(top);
    }
    Scalar value = 0;
    for (Index i = a; i <= b; ++i) {
      if (x_[i] > value) value = x_[i];
    }
    Scalar avg = averaged(a, b);
    if (avg > value) value = std::move(avg);
    best_[key(1, a, b)] = std::move(value);
  }

  Index len_;
  std::vector<Scalar> x_;
  std::vector<Scalar> best_;
};

}  // namespace

Scalar t_norm(const FiniteVector& v) {
  if (v.is_zero()) return 0;
  IntervalTable table(v);
  return table.norm(1, table.length());
}

std::optional<std::vector<Interval>> t_norm_witness(const FiniteVector& v) {
  if (v.is_zero()) return std::nullopt;
  IntervalTable table(v);
  const Index len = table.length();
  const Scalar target = table.norm(1, len) * 2;
  std::optional<std::vector<Interval>> best;
  std::vector<Interval> parts;
  // Depth-first over consecutive partitions of [max(1,n), len].
  auto search = [&](auto&& self, Index start, Index remaining, const Scalar& acc) -> void {
    if (remaining == 0) {
      if (start == len + 1 && acc == target && (!best || parts < *best)) best = parts;
      return;
    }
    for (Index end = start; end + remaining - 1 <= len; ++end) {
      parts.push_back({start, end});
      self(self, end + 1, remaining - 1, acc + table.norm(start, end));
      parts.pop_back();
    }
  };
  for (Index n = 2; n <= len; ++n) {
    const Index s = std::max<Index>(1, n);
    if (s + n - 1 > len) break;
    search(search, s, n, Scalar(0));
  }
  return best;
}

Functional::Functional(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].first == 0) throw InvalidArgument("functional index 0");
    if (i > 0 && terms_[i - 1].first >= terms_[i].first) {
      throw InvalidArgument("functional terms must be strictly increasing");
    }
  }
}

FiniteVector Functional::coefficients() const {
  std::vector<FiniteVector::Entry> entries;
  entries.reserve(terms_.size());
  for (const auto& [i, d] : terms_) entries.emplace_back(i, dyadic(d));
  return FiniteVector(std::move(entries));
}

unsigned Functional::depth() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.second);
  return d;
}

Scalar Functional::apply(const FiniteVector& x) const {
  Scalar sum = 0;
  auto entries = x.entries();
  std::size_t j = 0;
  for (const auto& [i, d] : terms_) {
    while (j < entries.size() && entries[j].first < i) ++j;
    if (j == entries.size()) break;
    if (entries[j].first == i) {
      Scalar term = entries[j].second;
      mpq_div_2exp(term.get_mpq_t(), term.get_mpq_t(), d);
      sum += term;
    }
  }
  return sum;
}

bool Functional::dominates(const Functional& g) const {
  std::size_t j = 0;
  for (const auto& [i, d] : g.terms_) {
    while (j < terms_.size() && terms_[j].first < i) ++j;
    if (j == terms_.size() || terms_[j].first != i || terms_[j].second > d) return false;
  }
  return true;
}

Functional Functional::project(std::span<const Index> support) const {
  std::vector<Term> kept;
  for (const auto& t : terms_) {
    if (std::binary_search(support.begin(), support.end(), t.first)) kept.push_back(t);
  }
  return Functional(std::move(kept));
}

std::string format_functional(const Functional& f) {
  std::string out;
  for (const auto& [i, d] : f.terms()) {
    if (!out.empty()) out += ' ';
    out += "(" + std::to_string(i) + ":" + format_scalar(dyadic(d)) + ")";
  }
  return out;
}

Functional parse_functional(const std::string& line) {
  std::istringstream tokens(line);
  std::string token;
  std::vector<Functional::Term> terms;
  while (tokens >> token) {
    if (token.size() < 5 || token.front() != '(' || token.back() != ')') {
      throw ParseError("functional: bad term '" + token + "'");
    }
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw ParseError("functional: bad term '" + token + "'");
    unsigned long index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(token.substr(1, colon - 1), &used);
      if (used != colon - 1 || index == 0) throw std::out_of_range("");
    } catch (const std::exception&) {
      throw ParseError("functional: bad index in '" + token + "'");
    }
    const Scalar value = parse_scalar(token.substr(colon + 1, token.size() - colon - 2));
    // Only 1/2^d with d < 256 is representable.
    if (value.get_num() != 1 || mpz_popcount(value.get_den_mpz_t()) != 1) {
      throw ParseError("functional: coefficient is not a power of 1/2 in '" + token + "'");
    }
    const auto d = mpz_sizeinbase(value.get_den_mpz_t(), 2) - 1;
    if (d > 255) throw ParseError("functional: depth out of range");
    if (!terms.empty() && terms.back().first >= index) {
      throw ParseError("functional: indices must be strictly increasing");
    }
    terms.emplace_back(static_cast<Index>(index), static_cast<std::uint8_t>(d));
  }
  if (terms.empty()) throw ParseError("functional: empty line");
  return Functional(std::move(terms));
}

}  // namespace banach
