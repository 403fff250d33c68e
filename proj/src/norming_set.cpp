#include "banach/tsirelson.hpp"

#include <algorithm>
#include <array>
#include <boost/crc.hpp>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "banach/errors.hpp"

namespace banach {

namespace {

constexpr Index kMaxGenerationDim = 32;
constexpr std::uint8_t kAbsent = 0xff;

// Dense working form used during generation: depth per coordinate of the
// window, kAbsent off the support.
struct Dense {
  std::array<std::uint8_t, kMaxGenerationDim> depth;
  std::uint32_t mask = 0;
  std::uint64_t weight = 0;  // sum 2^(31 - depth), exact ordering key

  friend bool operator==(const Dense& a, const Dense& b) { return a.depth == b.depth; }
};

struct DenseHash {
  std::size_t operator()(const Dense& d) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto b : d.depth) h = (h ^ b) * 1099511628211ULL;
    return h;
  }
};

Dense make_dense() {
  Dense d;
  d.depth.fill(kAbsent);
  return d;
}

void finish(Dense& d) {
  d.mask = 0;
  d.weight = 0;
  for (Index i = 0; i < kMaxGenerationDim; ++i) {
    if (d.depth[i] != kAbsent) {
      d.mask |= 1u << i;
      d.weight += std::uint64_t{1} << (31 - d.depth[i]);
    }
  }
}

bool dense_dominates(const Dense& f, const Dense& g) {
  if ((g.mask & ~f.mask) != 0) return false;
  for (Index i = 0; i < kMaxGenerationDim; ++i) {
    if (f.depth[i] > g.depth[i]) return false;
  }
  return true;
}

std::vector<Dense> prune_dominated(std::vector<Dense> items) {
  std::sort(items.begin(), items.end(), [](const Dense& a, const Dense& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.depth < b.depth;
  });
  std::vector<Dense> kept;
  for (auto& g : items) {
    bool dominated = false;
    for (const auto& f : kept) {
      if (f.weight >= g.weight && dense_dominates(f, g)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(g));
  }
  return kept;
}

class Generator {
 public:
  Generator(Index lo, Index hi, const NormingSetOptions& options)
      : lo_(lo), hi_(hi), options_(options), width_(hi - lo + 1) {
    sets_.resize(static_cast<std::size_t>(width_) * width_);
  }

  std::vector<Dense> run() {
    for (Index length = 1; length <= width_; ++length) {
      for (Index a = lo_; a + length - 1 <= hi_; ++a) build(a, a + length - 1);
    }
    // Sets are nested, so the full window holds every generated functional.
    return at(lo_, hi_);
  }

 private:
  std::vector<Dense>& at(Index a, Index b) {
    return sets_[static_cast<std::size_t>(a - lo_) * width_ + (b - lo_)];
  }

  void build(Index a, Index b) {
    std::unordered_set<Dense, DenseHash> candidates;
    if (a == b) {
      Dense unit = make_dense();
      unit.depth[a - lo_] = 0;
      finish(unit);
      candidates.insert(unit);
    } else {
      for (const auto& f : at(a + 1, b)) candidates.insert(f);
      for (const auto& f : at(a, b - 1)) candidates.insert(f);
      // Averages of n >= 2 functionals on a partition of [a, b] with n <= a.
      const Index length = b - a + 1;
      for (Index n = 2; n <= std::min(a, length); ++n) combine(a, b, n, candidates);
    }
    std::vector<Dense> items(candidates.begin(), candidates.end());
    candidates.clear();
    if (options_.prune) items = prune_dominated(std::move(items));
    std::sort(items.begin(), items.end(),
              [](const Dense& x, const Dense& y) { return x.depth < y.depth; });
    if (items.size() > options_.max_count) {
      throw ResourceLimitError("norming set exceeds " + std::to_string(options_.max_count) +
                               " functionals");
    }
    at(a, b) = std::move(items);
  }

  void combine(Index a, Index b, Index n, std::unordered_set<Dense, DenseHash>& out) {
    std::vector<Interval> parts;
    auto partitions = [&](auto&& self, Index start, Index remaining) -> void {
      if (remaining == 1) {
        parts.push_back({start, b});
        products(parts, out);
        parts.pop_back();
        return;
      }
      for (Index end = start; end + remaining - 1 <= b; ++end) {
        parts.push_back({start, end});
        self(self, end + 1, remaining - 1);
        parts.pop_back();
      }
    };
    partitions(partitions, a, n);
  }

  void products(const std::vector<Interval>& parts, std::unordered_set<Dense, DenseHash>& out) {
    std::vector<const std::vector<Dense>*> children;
    for (const auto& p : parts) {
      children.push_back(&at(p.lo, p.hi));
      if (children.back()->empty()) return;
    }
    std::vector<std::size_t> pick(parts.size(), 0);
    while (true) {
      Dense f = make_dense();
      bool overflow = false;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        const Dense& child = (*children[j])[pick[j]];
        for (Index i = parts[j].lo; i <= parts[j].hi; ++i) {
          const auto d = child.depth[i - lo_];
          if (d == kAbsent) continue;
          if (d + 1 >= 31) overflow = true;
          f.depth[i - lo_] = static_cast<std::uint8_t>(d + 1);
        }
      }
      if (overflow) throw ResourceLimitError("functional depth exceeds 30");
      finish(f);
      out.insert(f);
      if (out.size() > options_.max_count) {
        throw ResourceLimitError("norming set exceeds " + std::to_string(options_.max_count) +
                                 " functionals");
      }
      std::size_t j = parts.size();
      while (j > 0) {
        --j;
        if (++pick[j] < children[j]->size()) break;
        pick[j] = 0;
        if (j == 0) return;
      }
    }
  }

  Index lo_;
  Index hi_;
  NormingSetOptions options_;
  Index width_;
  std::vector<std::vector<Dense>> sets_;
};

Functional to_functional(const Dense& d, Index lo) {
  std::vector<Functional::Term> terms;
  for (Index i = 0; i < kMaxGenerationDim; ++i) {
    if (d.depth[i] != kAbsent) terms.emplace_back(lo + i, d.depth[i]);
  }
  return Functional(std::move(terms));
}

}  // namespace

Scalar NormingSet::support_value(const FiniteVector& x) const {
  const FiniteVector a = abs_vector(x);
  Scalar best = 0;
  for (const auto& f : functionals) {
    Scalar value = f.apply(a);
    if (value > best) best = std::move(value);
  }
  return best;
}

NormingSet norming_set_window(Index lo, Index N, const NormingSetOptions& options) {
  if (lo < 1 || N < lo) throw InvalidArgument("norming set window must satisfy 1 <= lo <= N");
  if (N - lo + 1 > options.generation_limit) {
    throw ResourceLimitError("norming set window [" + std::to_string(lo) + ", " +
                             std::to_string(N) + "] is wider than the generation limit " +
                             std::to_string(options.generation_limit));
  }
  if (N - lo + 1 > kMaxGenerationDim) {
    throw ResourceLimitError("norming set window wider than " +
                             std::to_string(kMaxGenerationDim));
  }
  Generator generator(lo, N, options);
  NormingSet out;
  out.lo = lo;
  out.N = N;
  out.prune = options.prune;
  for (const auto& d : generator.run()) out.functionals.push_back(to_functional(d, lo));
  std::sort(out.functionals.begin(), out.functionals.end());
  return out;
}

NormingSet norming_set(Index N, const NormingSetOptions& options) {
  if (N < 1) throw InvalidArgument("norming set needs N >= 1");
  return norming_set_window(1, N, options);
}

namespace {

std::string body_of(const NormingSet& set) {
  std::string body;
  for (const auto& f : set.functionals) body += format_functional(f) + "\n";
  return body;
}

std::string checksum_of(const std::string& body) {
  boost::crc_32_type crc;
  crc.process_bytes(body.data(), body.size());
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc.checksum()));
  return buf;
}

}  // namespace

void save_norming_set(const NormingSet& set, std::ostream& out) {
  const std::string body = body_of(set);
  out << "format-version " << kNormingSetFormatVersion << '\n'
      << "N " << set.N << '\n'
      << "lo " << set.lo << '\n'
      << "prune " << (set.prune ? "true" : "false") << '\n'
      << "count " << set.size() << '\n'
      << "checksum " << checksum_of(body) << '\n'
      << body;
}

void save_norming_set(const NormingSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write norming set file '" + path + "'");
  save_norming_set(set, out);
  if (!out) throw InvalidArgument("write failed for '" + path + "'");
}

LoadedNormingSet load_norming_set(std::istream& in, std::optional<bool> expected_prune) {
  std::map<std::string, std::string> header;
  static const char* const kKeys[] = {"format-version", "N", "lo", "prune", "count", "checksum"};
  std::string line;
  for (const char* key : kKeys) {
    if (!std::getline(in, line)) throw ParseError("norming set: truncated header");
    std::istringstream fields(line);
    std::string name, value, extra;
    if (!(fields >> name >> value) || (fields >> extra) || name != key) {
      throw ParseError(std::string("norming set: expected header field '") + key + "'");
    }
    header[name] = value;
  }
  if (header["format-version"] != std::to_string(kNormingSetFormatVersion)) {
    throw VersionError("norming set: unsupported format-version " + header["format-version"]);
  }
  LoadedNormingSet loaded;
  auto parse_count = [&](const std::string& key) -> unsigned long {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(header[key], &used);
      if (used != header[key].size()) throw std::out_of_range("");
      return v;
    } catch (const std::exception&) {
      throw ParseError("norming set: bad value for " + key);
    }
  };
  loaded.set.N = static_cast<Index>(parse_count("N"));
  loaded.set.lo = static_cast<Index>(parse_count("lo"));
  const auto count = parse_count("count");
  if (header["prune"] != "true" && header["prune"] != "false") {
    throw ParseError("norming set: prune must be true or false");
  }
  loaded.set.prune = header["prune"] == "true";

  std::string body;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    body += line + "\n";
    lines.push_back(line);
  }
  if (checksum_of(body) != header["checksum"]) {
    throw ChecksumError("norming set: checksum mismatch");
  }
  if (lines.size() != count) throw ParseError("norming set: count does not match body");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Functional f = parse_functional(lines[i]);
    if (f.min_index() < loaded.set.lo || f.max_index() > loaded.set.N) {
      throw ParseError("norming set: functional outside the window on line " +
                       std::to_string(i + 1));
    }
    if (!loaded.set.functionals.empty() && !(loaded.set.functionals.back() < f)) {
      throw ParseError("norming set: functionals not sorted");
    }
    loaded.set.functionals.push_back(std::move(f));
  }
  if (expected_prune && *expected_prune != loaded.set.prune) {
    loaded.warnings.push_back(std::string("norming set was generated with prune=") +
                              (loaded.set.prune ? "true" : "false") + " but prune=" +
                              (*expected_prune ? "true" : "false") + " was requested");
  }
  return loaded;
}

LoadedNormingSet load_norming_set(const std::string& path, std::optional<bool> expected_prune) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open norming set file '" + path + "'");
  return load_norming_set(in, expected_prune);
}

}  // namespace banach
