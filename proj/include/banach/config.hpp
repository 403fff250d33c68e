#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "banach/combinatorics.hpp"
#include "banach/concentration.hpp"
#include "banach/dualnorm.hpp"
#include "banach/lipmaps.hpp"
#include "banach/tsirelson.hpp"

namespace banach {

/// a*k + b, as written in configs (`2k+4`, `k`, `9`, `3*k-1`).
struct AffineK {
  long long a = 0;
  long long b = 0;

  long long at(long long k) const { return a * k + b; }
};

std::string format_affine(const AffineK& e);

enum class MapKind { summing, array, random_signs };

std::string map_kind_name(MapKind m);

/// Line-oriented `key = value` experiment description. `#` starts a
/// comment. Keys:
///   spaces          comma separated list, e.g. `l1, tstar, james:tstar`
///   k_range         `a..b` (b < a gives an empty sweep)
///   ground          `lo..hi` with affine bounds in k, or `{m1,m2,...}`
///   subset_size     affine in k (default `2k`)
///   mode            exact | greedy | both (default exact)
///   greedy_strategy oscillation | diameter
///   metric          hamming | johnson
///   map             summing | array | random_signs (default summing)
///   max_subsets     exact-search guard (default 1000000)
///   generation_limit  norming-set window guard (default 10)
///   jobs            worker threads (default 1)
///   output          CSV path; stdout when absent
///   seed            seed for random_signs (default 0)
struct ExperimentConfig {
  std::vector<std::string> spaces;
  long long k_first = 1;
  long long k_last = 0;
  std::optional<std::pair<AffineK, AffineK>> ground_range;
  std::optional<GroundSet> ground_explicit;
  AffineK subset_size{2, 0};
  bool run_exact = true;
  bool run_greedy = false;
  GreedyStrategy greedy_strategy = GreedyStrategy::oscillation;
  Metric metric = Metric::hamming;
  MapKind map = MapKind::summing;
  std::uint64_t max_subsets = 1'000'000;
  Index generation_limit = 10;
  unsigned jobs = 1;
  std::optional<std::string> output;
  std::uint64_t seed = 0;

  std::vector<std::size_t> ks() const;
  GroundSet ground(std::size_t k) const;
  std::size_t l(std::size_t k) const;
};

/// Throws ParseError with `source:line:column` on syntax errors and
/// InvalidArgument on semantic ones (l < k, |M| < l, unknown space, ...).
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig parse_config_file(const std::string& path);
void validate_config(const ExperimentConfig& config);

/// How spaces named in configs and on the command line become engines.
struct SpaceContext {
  NormingSetOptions norming;
  GaugeOptions gauge;
  /// Directory holding norming-set files `normset-<lo>-<N>-<prune|full>.txt`;
  /// BANACH_CACHE_DIR when unset by the caller.
  std::optional<std::string> cache_dir;
};

std::optional<std::string> default_cache_dir();
std::string norming_set_cache_path(const std::string& dir, Index lo, Index N, bool prune);

/// Loads the norming set from the cache when a matching file exists,
/// otherwise generates it.
NormingSet obtain_norming_set(Index lo, Index N, const SpaceContext& ctx);

/// Engine for l1, l2, linf, t, tstar or james:<base> on {1..dim}. `lo`
/// narrows the tstar norming set to vectors supported in {lo..dim}; james
/// bases always use lo = 1.
NormEnginePtr resolve_space(const std::string& name, Index dim, const SpaceContext& ctx,
                            Index lo = 1);
bool is_known_space(const std::string& name);

/// The map the config describes for one k and space.
FiniteLipschitzMap build_config_map(const ExperimentConfig& config, std::size_t k,
                                    NormEnginePtr codomain);
/// Codomain dimension the config's map needs for one k.
Index config_map_dimension(const ExperimentConfig& config, std::size_t k);

struct SweepOptions {
  bool timing = true;
  std::optional<unsigned> jobs;
};

/// One CSV row per (space, k, mode) in that nesting order.
void concentration_sweep(const ExperimentConfig& config, const SpaceContext& ctx,
                         std::ostream& out, const SweepOptions& options = {});
/// One CSV row per (space, k) with the interlaced diameter.
void interlaced_sweep(const ExperimentConfig& config, const SpaceContext& ctx, std::ostream& out,
                      const SweepOptions& options = {});

}  // namespace banach
