#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "banach/combinatorics.hpp"
#include "banach/lipmaps.hpp"

namespace banach {

enum class SearchMode { exact, greedy };
enum class GreedyStrategy { oscillation, diameter };

std::string mode_name(SearchMode m);
std::string strategy_name(GreedyStrategy s);
GreedyStrategy parse_strategy(std::string_view text);

struct SearchOptions {
  /// Exact search refuses more than this many l-subsets.
  std::uint64_t max_subsets = 1'000'000;
  unsigned jobs = 1;
};

/// Result of a finite subset search: the smallest image diameter found
/// over [L]^k with L ranging over l-subsets of the ground set.
struct ConcentrationReport {
  std::size_t k = 0;
  std::size_t ground_size = 0;
  std::size_t l = 0;
  SearchMode mode = SearchMode::exact;
  Scalar lipschitz;
  Scalar min_diameter;
  GroundSet witness;
  /// min_diameter / lipschitz; empty when lipschitz = 0.
  std::optional<Scalar> ratio;
  double elapsed_ms = 0;
};

/// diam f([L]^k), exact. Values carry the codomain's power.
Scalar diam_image(const FiniteLipschitzMap& f, const GroundSet& L);

/// C(n, r), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

/// Exhaustive minimum of diam_image over all l-subsets of the ground set.
/// The witness is the colex-first minimizer regardless of `jobs`.
ConcentrationReport exact_min_diameter(const FiniteLipschitzMap& f, std::size_t l,
                                       const SearchOptions& options = {});

/// Grows L one element at a time, taking the candidate with the smallest
/// score (smallest element on ties). `diameter` scores diam f([L+c]^k);
/// `oscillation` scores the largest distance between a new point
/// containing c and a point one Hamming step away from it in [L+c]^k.
ConcentrationReport greedy_extraction(const FiniteLipschitzMap& f, std::size_t l,
                                      GreedyStrategy strategy = GreedyStrategy::oscillation);

struct InterlacedReport {
  Scalar diameter;
  KSubsetPair argmax;
};

/// max over interlaced pairs (m, n) in the ground set of ||f(m) - f(n)||.
/// The argmax is the first maximizer in enumeration order.
InterlacedReport interlaced_diameter(const FiniteLipschitzMap& f);

/// Sweep CSV header:
/// space,k,ground,l,mode,lipschitz,min_diameter,ratio,witness,elapsed_ms
void write_report_header(std::ostream& out);
/// One CSV row. elapsed_ms is left empty when `timing` is false.
void write_report_row(std::ostream& out, const std::string& space,
                      const ConcentrationReport& report, const GroundSet& ground, int power,
                      bool timing);

/// Interlaced rows reuse the sweep schema: mode `interlaced`, l = 2k,
/// min_diameter holds the interlaced diameter and witness the argmax pair.
void write_interlaced_row(std::ostream& out, const std::string& space, std::size_t k,
                          const GroundSet& ground, const Scalar& lipschitz,
                          const InterlacedReport& report, int power,
                          std::optional<double> elapsed_ms);

}  // namespace banach
