#include "banach/concentration.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "banach/errors.hpp"

namespace banach {

std::string mode_name(SearchMode m) { return m == SearchMode::exact ? "exact" : "greedy"; }

std::string strategy_name(GreedyStrategy s) {
  return s == GreedyStrategy::oscillation ? "oscillation" : "diameter";
}

GreedyStrategy parse_strategy(std::string_view text) {
  if (text == "oscillation") return GreedyStrategy::oscillation;
  if (text == "diameter") return GreedyStrategy::diameter;
  throw ParseError("unknown greedy strategy '" + std::string(text) + "'");
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    out = out * (n - r + i) / i;
    if (out > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(out);
}

namespace {

using Clock = std::chrono::steady_clock;
using Mask = std::uint64_t;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Point masks over ground positions plus the pair table in a lookup
/// friendly shape.
class PairTable {
 public:
  explicit PairTable(const FiniteLipschitzMap& f) : f_(f), n_(f.points().size()) {
    if (f.ground().size() > 64) throw InvalidArgument("ground sets above 64 elements unsupported");
    for (const auto& p : f.points()) {
      Mask m = 0;
      for (Index e : p.elements()) m |= Mask{1} << f.ground().position(e);
      masks_.push_back(m);
    }
  }

  std::size_t size() const { return n_; }
  Mask mask(std::size_t i) const { return masks_[i]; }

  const Scalar& distance(std::size_t i, std::size_t j) const {
    static const Scalar zero(0);
    if (i == j) return zero;
    if (i > j) std::swap(i, j);
    const auto& pairs = f_.pair_distances();
    return pairs[i * n_ - i * (i + 1) / 2 + (j - i - 1)].codomain;
  }

  /// Pair indices sorted by codomain distance, largest first.
  const std::vector<std::uint32_t>& by_distance() const {
    if (order_.empty()) {
      const auto& pairs = f_.pair_distances();
      order_.resize(pairs.size());
      std::iota(order_.begin(), order_.end(), 0u);
      std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) {
        return pairs[a].codomain > pairs[b].codomain;
      });
    }
    return order_;
  }

  /// diam f([L]^k) for the ground positions in `within`.
  Scalar diameter(Mask within) const {
    const auto& pairs = f_.pair_distances();
    for (auto p : by_distance()) {
      const Mask both = masks_[pairs[p].i] | masks_[pairs[p].j];
      if ((both & ~within) == 0) return pairs[p].codomain;
    }
    return 0;
  }

 private:
  const FiniteLipschitzMap& f_;
  std::size_t n_;
  std::vector<Mask> masks_;
  mutable std::vector<std::uint32_t> order_;
};

GroundSet positions_to_ground(const GroundSet& ground, Mask mask) {
  std::vector<Index> out;
  for (std::size_t p = 0; p < ground.size(); ++p) {
    if (mask >> p & 1) out.push_back(ground[p]);
  }
  return GroundSet(std::move(out));
}

/// Next mask with the same popcount in increasing numeric order, which is
/// colex order on the positions.
Mask next_colex(Mask v) {
  const Mask t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

void check_l(const FiniteLipschitzMap& f, std::size_t l) {
  if (l < f.k() || l > f.ground().size()) {
    throw InvalidArgument("subset size l=" + std::to_string(l) + " needs k <= l <= |M| (k=" +
                          std::to_string(f.k()) + ", |M|=" + std::to_string(f.ground().size()) +
                          ")");
  }
}

void finish(ConcentrationReport& r) {
  if (r.lipschitz > 0) r.ratio = r.min_diameter / r.lipschitz;
}

}  // namespace

Scalar diam_image(const FiniteLipschitzMap& f, const GroundSet& L) {
  if (L.size() < f.k()) throw InvalidArgument("diam_image: |L| < k");
  Mask within = 0;
  for (Index e : L.elements()) {
    if (!f.ground().contains(e)) {
      throw InvalidArgument("diam_image: L is not inside the ground set");
    }
    within |= Mask{1} << f.ground().position(e);
  }
  return PairTable(f).diameter(within);
}

ConcentrationReport exact_min_diameter(const FiniteLipschitzMap& f, std::size_t l,
                                       const SearchOptions& options) {
  check_l(f, l);
  const auto start = Clock::now();
  const std::uint64_t count = binomial(f.ground().size(), l);
  if (count > options.max_subsets) {
    throw ResourceLimitError("exact search over " + std::to_string(count) +
                             " subsets exceeds max_subsets=" +
                             std::to_string(options.max_subsets));
  }
  const unsigned jobs = std::max(1u, options.jobs);
  f.pair_distances(jobs);
  PairTable table(f);
  table.by_distance();

  std::vector<Mask> subsets;
  subsets.reserve(count);
  const Mask last = l == 64 ? ~Mask{0} : ((Mask{1} << l) - 1) << (f.ground().size() - l);
  for (Mask m = l == 64 ? ~Mask{0} : (Mask{1} << l) - 1;; m = next_colex(m)) {
    subsets.push_back(m);
    if (m == last) break;
  }

  struct Best {
    Scalar value;
    std::size_t index = std::numeric_limits<std::size_t>::max();
  };
  std::vector<Best> best(jobs);
  auto work = [&](unsigned w) {
    for (std::size_t s = w; s < subsets.size(); s += jobs) {
      Scalar d = table.diameter(subsets[s]);
      if (best[w].index == std::numeric_limits<std::size_t>::max() || d < best[w].value) {
        best[w] = {std::move(d), s};
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
  }
  const Best* winner = nullptr;
  for (const auto& b : best) {
    if (b.index == std::numeric_limits<std::size_t>::max()) continue;
    if (!winner || b.value < winner->value ||
        (b.value == winner->value && b.index < winner->index)) {
      winner = &b;
    }
  }

  ConcentrationReport r;
  r.k = f.k();
  r.ground_size = f.ground().size();
  r.l = l;
  r.mode = SearchMode::exact;
  r.lipschitz = lip_constant(f);
  r.min_diameter = winner->value;
  r.witness = positions_to_ground(f.ground(), subsets[winner->index]);
  finish(r);
  r.elapsed_ms = ms_since(start);
  return r;
}

ConcentrationReport greedy_extraction(const FiniteLipschitzMap& f, std::size_t l,
                                      GreedyStrategy strategy) {
  check_l(f, l);
  const auto start = Clock::now();
  PairTable table(f);
  const std::size_t width = f.ground().size();

  auto score = [&](Mask chosen, std::size_t c) -> Scalar {
    const Mask with = chosen | Mask{1} << c;
    if (strategy == GreedyStrategy::diameter) return table.diameter(with);
    Scalar worst = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      const Mask mi = table.mask(i);
      if (!(mi >> c & 1) || (mi & ~with)) continue;
      for (std::size_t j = 0; j < table.size(); ++j) {
        const Mask mj = table.mask(j);
        if ((mj & ~with) || f.domain_distance(f.points()[i], f.points()[j]) != 1) continue;
        if (table.distance(i, j) > worst) worst = table.distance(i, j);
      }
    }
    return worst;
  };

  Mask chosen = 0;
  for (std::size_t step = 0; step < l; ++step) {
    std::optional<std::pair<Scalar, std::size_t>> pick;
    for (std::size_t c = 0; c < width; ++c) {
      if (chosen >> c & 1) continue;
      Scalar s = score(chosen, c);
      if (!pick || s < pick->first) pick.emplace(std::move(s), c);
    }
    chosen |= Mask{1} << pick->second;
  }

  ConcentrationReport r;
  r.k = f.k();
  r.ground_size = width;
  r.l = l;
  r.mode = SearchMode::greedy;
  r.lipschitz = lip_constant(f);
  r.min_diameter = table.diameter(chosen);
  r.witness = positions_to_ground(f.ground(), chosen);
  finish(r);
  r.elapsed_ms = ms_since(start);
  return r;
}

InterlacedReport interlaced_diameter(const FiniteLipschitzMap& f) {
  const auto pairs = enumerate_interlaced_pairs(f.ground(), f.k());
  if (pairs.empty()) throw InvalidArgument("no interlaced pairs in the ground set");
  std::optional<InterlacedReport> out;
  for (const auto& p : pairs) {
    Scalar d = f.codomain().evaluate(f.image(p.first) - f.image(p.second));
    if (!out || d > out->diameter) out = InterlacedReport{std::move(d), p};
  }
  return *out;
}

void write_report_header(std::ostream& out) {
  out << "space,k,ground,l,mode,lipschitz,min_diameter,ratio,witness,elapsed_ms\n";
}

void write_report_row(std::ostream& out, const std::string& space,
                      const ConcentrationReport& r, const GroundSet& ground, int power,
                      bool timing) {
  out << space << ',' << r.k << ",\"" << format_ground(ground) << "\"," << r.l << ','
      << mode_name(r.mode) << ',' << format_norm_value(r.lipschitz, power) << ','
      << format_norm_value(r.min_diameter, power) << ','
      << (r.ratio ? format_norm_value(*r.ratio, power) : "") << ",\""
      << format_ground(r.witness) << "\",";
  if (timing) out << static_cast<long long>(r.elapsed_ms + 0.5);
  out << '\n';
}

void write_interlaced_row(std::ostream& out, const std::string& space, std::size_t k,
                          const GroundSet& ground, const Scalar& lipschitz,
                          const InterlacedReport& report, int power,
                          std::optional<double> elapsed_ms) {
  out << space << ',' << k << ",\"" << format_ground(ground) << "\"," << 2 * k << ",interlaced,"
      << format_norm_value(lipschitz, power) << ',' << format_norm_value(report.diameter, power)
      << ',';
  if (lipschitz > 0) out << format_norm_value(report.diameter / lipschitz, power);
  out << ",\"" << format_pair(report.argmax) << "\",";
  if (elapsed_ms) out << static_cast<long long>(*elapsed_ms + 0.5);
  out << '\n';
}

}  // namespace banach
