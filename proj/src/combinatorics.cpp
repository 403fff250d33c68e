#include "banach/combinatorics.hpp"

#include <algorithm>
#include <charconv>

#include "banach/errors.hpp"

namespace banach {

namespace {

void require_increasing(const std::vector<Index>& e, const char* what) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) throw InvalidArgument(std::string(what) + ": elements must be positive");
    if (i > 0 && e[i - 1] >= e[i]) {
      throw InvalidArgument(std::string(what) + ": elements must be strictly increasing");
    }
  }
}

void require_same_size(const KSubset& m, const KSubset& n) {
  if (m.size() != n.size()) {
    throw InvalidArgument("k-subsets of different sizes " + std::to_string(m.size()) + " and " +
                          std::to_string(n.size()));
  }
}

// Colex successor on positions 0..n-1; false after the last combination.
bool next_colex(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t limit = (j + 1 < k) ? c[j + 1] : n;
    if (c[j] + 1 < limit) {
      ++c[j];
      for (std::size_t i = 0; i < j; ++i) c[i] = i;
      return true;
    }
  }
  return false;
}

std::vector<Index> parse_braced(std::string_view text, const char* what) {
  auto fail = [&]() -> ParseError {
    return ParseError(std::string(what) + ": cannot parse '" + std::string(text) + "'");
  };
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') throw fail();
  text = text.substr(1, text.size() - 2);
  std::vector<Index> out;
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    auto token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) throw fail();
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_braced(const std::vector<Index>& e) {
  std::string out = "{";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(e[i]);
  }
  return out + "}";
}

}  // namespace

KSubset::KSubset(std::vector<Index> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidArgument("k-subset must have k >= 1");
  require_increasing(elements_, "k-subset");
}

GroundSet::GroundSet(std::vector<Index> elements) : elements_(std::move(elements)) {
  require_increasing(elements_, "ground set");
}

GroundSet GroundSet::range(Index lo, Index hi) {
  if (lo == 0 || hi < lo) throw InvalidArgument("ground range must satisfy 1 <= lo <= hi");
  std::vector<Index> e;
  for (Index i = lo; i <= hi; ++i) e.push_back(i);
  return GroundSet(std::move(e));
}

bool GroundSet::contains(Index m) const {
  return std::binary_search(elements_.begin(), elements_.end(), m);
}

std::size_t GroundSet::position(Index m) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), m);
  if (it == elements_.end() || *it != m) {
    throw InvalidArgument(std::to_string(m) + " is not in the ground set");
  }
  return static_cast<std::size_t>(it - elements_.begin());
}

bool GroundSet::is_range() const {
  return !elements_.empty() && elements_.back() - elements_.front() + 1 == elements_.size();
}

bool colex_less(const KSubset& a, const KSubset& b) {
  return std::lexicographical_compare(a.elements().rbegin(), a.elements().rend(),
                                      b.elements().rbegin(), b.elements().rend());
}

std::size_t hamming_distance(const KSubset& m, const KSubset& n) {
  require_same_size(m, n);
  std::size_t d = 0;
  for (std::size_t i = 0; i < m.size(); ++i) d += m[i] != n[i];
  return d;
}

std::size_t johnson_distance(const KSubset& m, const KSubset& n) {
  require_same_size(m, n);
  std::vector<Index> common;
  std::set_intersection(m.elements().begin(), m.elements().end(), n.elements().begin(),
                        n.elements().end(), std::back_inserter(common));
  return m.size() - common.size();
}

bool is_interlaced(const KSubset& m, const KSubset& n) {
  require_same_size(m, n);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] < n[i])) return false;
    if (i + 1 < m.size() && !(n[i] < m[i + 1])) return false;
  }
  return true;
}

bool is_plegma(const std::vector<std::vector<Index>>& family) {
  if (family.empty()) throw InvalidArgument("plegma: empty family");
  const std::size_t m = family.front().size();
  if (m == 0) throw InvalidArgument("plegma: empty tuples");
  for (const auto& row : family) {
    if (row.size() != m) throw InvalidArgument("plegma: ragged family");
  }
  bool first = true;
  Index previous = 0;
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& row : family) {
      if (!first && !(previous < row[j])) return false;
      previous = row[j];
      first = false;
    }
  }
  return true;
}

std::vector<KSubset> enumerate_ksubsets(const GroundSet& ground, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (k > ground.size()) {
    throw InvalidArgument("k=" + std::to_string(k) + " exceeds ground set size " +
                          std::to_string(ground.size()));
  }
  std::vector<KSubset> out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  do {
    std::vector<Index> e(k);
    for (std::size_t i = 0; i < k; ++i) e[i] = ground[c[i]];
    out.emplace_back(std::move(e));
  } while (next_colex(c, ground.size()));
  return out;
}

std::vector<KSubsetPair> enumerate_interlaced_pairs(const GroundSet& ground, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (2 * k > ground.size()) {
    throw InvalidArgument("interlaced pairs need |M| >= 2k = " + std::to_string(2 * k));
  }
  std::vector<KSubsetPair> out;
  for (const auto& merged : enumerate_ksubsets(ground, 2 * k)) {
    std::vector<Index> m, n;
    for (std::size_t i = 0; i < 2 * k; ++i) (i % 2 == 0 ? m : n).push_back(merged[i]);
    out.emplace_back(KSubset(std::move(m)), KSubset(std::move(n)));
  }
  return out;
}

std::string format_ksubset(const KSubset& s) { return format_braced(s.elements()); }

KSubset parse_ksubset(std::string_view text) {
  try {
    return KSubset(parse_braced(text, "k-subset"));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::string format_pair(const KSubsetPair& p) {
  return format_ksubset(p.first) + "|" + format_ksubset(p.second);
}

KSubsetPair parse_pair(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) throw ParseError("pair: missing '|'");
  return {parse_ksubset(text.substr(0, bar)), parse_ksubset(text.substr(bar + 1))};
}

std::string format_ground(const GroundSet& g) { return format_braced(g.elements()); }

GroundSet parse_ground(std::string_view text) {
  try {
    return GroundSet(parse_braced(text, "ground set"));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace banach
