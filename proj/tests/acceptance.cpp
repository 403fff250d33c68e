// Acceptance suite: one PASS/FAIL line per criterion.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "banach/combinatorics.hpp"
#include "banach/concentration.hpp"
#include "banach/config.hpp"
#include "banach/dualnorm.hpp"
#include "banach/errors.hpp"
#include "banach/james.hpp"
#include "banach/lipmaps.hpp"
#include "banach/tsirelson.hpp"
#include "oracles.hpp"

using namespace banach;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string str(const Scalar& s) { return format_scalar(s); }

NormEnginePtr l1(Index n) { return std::make_shared<LpEngine>(LpExponent::one, n); }

std::shared_ptr<TStarEngine> tstar(Index lo, Index n) {
  SpaceContext ctx;
  return std::make_shared<TStarEngine>(std::make_shared<PolyhedralNormDescription>(
      PolyhedralNormDescription::from_norming_set(obtain_norming_set(lo, n, ctx))));
}

// Maps built by criteria 5 and 6, reused for the sandwich check.
std::vector<std::shared_ptr<FiniteLipschitzMap>> g_maps;

FiniteVector from_digits(const std::vector<std::size_t>& digits, const std::vector<Scalar>& values) {
  FiniteVector v;
  for (std::size_t i = 0; i < digits.size(); ++i) v.set(static_cast<Index>(i + 1), values[digits[i]]);
  return v;
}

Outcome oracle_equivalence() {
  const std::vector<Scalar> values{-1, 0, make_scalar(1, 2), 1};
  std::vector<std::size_t> digit(6, 0);
  std::size_t count = 0;
  std::size_t mismatches = 0;
  std::string first;
  for (;;) {
    const FiniteVector v = from_digits(digit, values);
    const Scalar dp = t_norm(v);
    const Scalar brute = oracle::brute_t_norm(v, 6);
    if (dp != brute) {
      if (mismatches++ == 0) first = format_inline(v) + ": " + str(dp) + " vs " + str(brute);
    }
    ++count;
    std::size_t i = 0;
    while (i < 6 && ++digit[i] == values.size()) digit[i++] = 0;
    if (i == 6) break;
  }
  return {mismatches == 0,
          std::to_string(count) + " vectors, " + std::to_string(mismatches) + " mismatches" +
              (first.empty() ? "" : " (first " + first + ")")};
}

Outcome normalization() {
  Outcome out;
  for (Index i = 1; i <= 12; ++i) {
    if (t_norm(FiniteVector::unit(i)) != 1) {
      out.pass = false;
      out.detail += "t_norm(e_" + std::to_string(i) + ") != 1; ";
    }
  }
  std::mt19937_64 rng(20240601);
  std::size_t bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const FiniteVector v = oracle::random_vector(rng, 1, 10);
    FiniteVector flipped;
    for (const auto& [i, c] : v.entries()) flipped.set(i, (rng() & 1) ? Scalar(-c) : c);
    if (t_norm(flipped) != t_norm(v)) ++bad;
  }
  out.pass = out.pass && bad == 0;
  out.detail += "e_1..e_12 have norm 1; 200 sign patterns, " + std::to_string(bad) + " changed the norm";
  return out;
}

Outcome block_estimate() {
  const Index N = 10;
  const auto engine = tstar(1, N);
  std::vector<Scalar> norm(1u << N);
  auto vec = [](std::uint32_t mask) {
    FiniteVector v;
    for (Index i = 0; i < 32; ++i) {
      if (mask >> i & 1) v.set(i + 1, 1);
    }
    return v;
  };
  for (std::uint32_t m = 1; m < (1u << N); ++m) norm[m] = engine->evaluate(vec(m));
  std::size_t decompositions = 0;
  std::size_t violations = 0;
  Scalar worst_ratio = 0;
  for (std::uint32_t m = 1; m < (1u << N); ++m) {
    std::vector<Index> support;
    for (Index i = 0; i < N; ++i) {
      if (m >> i & 1) support.push_back(i);
    }
    const std::size_t s = support.size();
    for (std::uint32_t cuts = 0; cuts < (1u << (s - 1)); ++cuts) {
      const std::size_t n = static_cast<std::size_t>(std::popcount(cuts)) + 1;
      if (n > support.front() + 1) continue;
      Scalar largest = 0;
      std::uint32_t block = 0;
      for (std::size_t j = 0; j < s; ++j) {
        block |= 1u << support[j];
        if (j + 1 == s || (cuts >> j & 1)) {
          if (norm[block] > largest) largest = norm[block];
          block = 0;
        }
      }
      if (norm[m] > 2 * largest) ++violations;
      if (norm[m] / largest > worst_ratio) worst_ratio = norm[m] / largest;
      ++decompositions;
    }
  }
  return {violations == 0, std::to_string(decompositions) + " block decompositions, " +
                               std::to_string(violations) + " violations, largest ratio " +
                               str(worst_ratio)};
}

Outcome duality() {
  std::mt19937_64 rng(77);
  std::map<Index, PolyhedralNormDescription> descriptions;
  for (Index n = 1; n <= 8; ++n) {
    descriptions.emplace(n, PolyhedralNormDescription::from_norming_set(norming_set(n)));
  }
  GaugeOptions opts;
  opts.verify = true;
  std::size_t violations = 0;
  std::size_t gaps = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = static_cast<Index>(rng() % 8) + 1;
    const FiniteVector x = oracle::random_vector(rng, 1, n);
    const FiniteVector y = oracle::random_vector(rng, 1, n);
    GaugeResult r;
    try {
      r = gauge_norm(y, descriptions.at(n), opts);
      check_certificate(y, descriptions.at(n), r.certificate);
    } catch (const VerificationError&) {
      ++gaps;
      continue;
    }
    if (!r.packing_value || *r.packing_value != r.value) ++gaps;
    if (inner_product(x, y) > t_norm(x) * r.value) ++violations;
  }
  return {violations == 0 && gaps == 0,
          "200 pairs, " + std::to_string(violations) + " pairing violations, " +
              std::to_string(gaps) + " primal/dual gaps"};
}

Outcome concentration_contrast() {
  Outcome out;
  std::ostringstream d;
  for (std::size_t k = 2; k <= 4; ++k) {
    const GroundSet ground = GroundSet::range(1, static_cast<Index>(2 * k + 4));
    auto f = std::make_shared<FiniteLipschitzMap>(
        summing_map(ground, unit_images(ground), k, l1(ground.elements().back())));
    const auto r = exact_min_diameter(*f, 2 * k);
    const Scalar kk(static_cast<long>(k));
    const bool ok = r.min_diameter == kk && r.ratio && *r.ratio == kk;
    out.pass = out.pass && ok;
    d << "l1 k=" << k << " diam " << str(r.min_diameter) << " ratio "
      << (r.ratio ? str(*r.ratio) : "-") << "; ";
    g_maps.push_back(f);
  }
  const Scalar bound = 2 * (2 + 2);
  for (std::size_t k = 2; k <= 4; ++k) {
    const Index lo = static_cast<Index>(k);
    const GroundSet ground = GroundSet::range(lo, lo + 9);
    auto f = std::make_shared<FiniteLipschitzMap>(
        summing_map(ground, unit_images(ground), k, tstar(lo, lo + 9)));
    const auto r = exact_min_diameter(*f, 2 * k);
    const bool ok = r.min_diameter <= 2 && 2 <= bound * r.lipschitz;
    out.pass = out.pass && ok;
    d << "tstar k=" << k << " diam " << str(r.min_diameter) << " Lip " << str(r.lipschitz)
      << " witness " << format_ground(r.witness) << "; ";
    g_maps.push_back(f);
  }
  out.detail = d.str();
  return out;
}

Outcome interlaced_bound() {
  Outcome out;
  std::ostringstream d;
  std::map<std::size_t, Scalar> james_ratio;
  for (std::size_t k = 2; k <= 3; ++k) {
    const Index n = static_cast<Index>(2 * k + 2);
    const GroundSet ground = GroundSet::range(1, n);
    auto j = std::make_shared<JamesEngine>(tstar(1, n));
    auto fj = std::make_shared<FiniteLipschitzMap>(summing_map(ground, unit_images(ground), k, j));
    const Scalar lip_j = lip_constant(*fj);
    const auto rj = interlaced_diameter(*fj);
    james_ratio[k] = rj.diameter / lip_j;
    d << "J k=" << k << " interlaced " << str(rj.diameter) << " Lip " << str(lip_j) << " ratio "
      << str(james_ratio[k]) << " at " << format_pair(rj.argmax) << "; ";

    auto f1 = std::make_shared<FiniteLipschitzMap>(summing_map(ground, unit_images(ground), k, l1(n)));
    const Scalar ratio1 = interlaced_diameter(*f1).diameter / lip_constant(*f1);
    out.pass = out.pass && ratio1 == Scalar(static_cast<long>(k));
    d << "l1 k=" << k << " ratio " << str(ratio1) << "; ";
    g_maps.push_back(fj);
    g_maps.push_back(f1);
  }
  const bool no_growth = james_ratio[3] <= james_ratio[2];
  out.pass = out.pass && no_growth;
  d << (no_growth ? "J ratio does not grow" : "J ratio grows from k=2 to k=3");
  out.detail = d.str();
  return out;
}

Outcome metric_axioms_and_sandwich() {
  std::size_t triples = 0;
  std::size_t failures = 0;
  for (Index size = 1; size <= 8; ++size) {
    const GroundSet ground = GroundSet::range(1, size);
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, size); ++k) {
      const auto pts = enumerate_ksubsets(ground, k);
      for (const auto& a : pts) {
        for (const auto& b : pts) {
          const auto h = hamming_distance(a, b);
          const auto j = johnson_distance(a, b);
          if ((h == 0) != (a == b) || (j == 0) != (a == b)) ++failures;
          if (h != hamming_distance(b, a) || j != johnson_distance(b, a)) ++failures;
          for (const auto& c : pts) {
            if (h > hamming_distance(a, c) + hamming_distance(c, b)) ++failures;
            if (j > johnson_distance(a, c) + johnson_distance(c, b)) ++failures;
            ++triples;
          }
        }
      }
    }
  }
  // extra maps: array map with disjoint rows, a constant map, a Johnson-metric map
  for (std::size_t k = 1; k <= 3; ++k) {
    const GroundSet ground = GroundSet::range(1, 6);
    g_maps.push_back(std::make_shared<FiniteLipschitzMap>(
        array_map(ground, disjoint_block_rows(ground, k), k, l1(static_cast<Index>(6 * k)))));
  }
  g_maps.push_back(std::make_shared<FiniteLipschitzMap>(
      constant_map(GroundSet::range(1, 6), 2, FiniteVector::unit(3), l1(6))));
  g_maps.push_back(std::make_shared<FiniteLipschitzMap>(summing_map(
      GroundSet::range(2, 8), unit_images(GroundSet::range(2, 8)), 3, tstar(2, 8), Metric::johnson)));

  std::size_t pairs = 0;
  for (const auto& f : g_maps) {
    std::map<std::uint32_t, std::pair<Extended, Scalar>> moduli;
    for (const auto& p : f->pair_distances()) {
      auto it = moduli.find(p.domain);
      if (it == moduli.end()) {
        const Scalar t(p.domain);
        it = moduli.emplace(p.domain, std::make_pair(compression_modulus(*f, t),
                                                     expansion_modulus(*f, t))).first;
      }
      const auto& [rho, omega] = it->second;
      if (rho.infinite || rho.value > p.codomain || p.codomain > omega) ++failures;
      ++pairs;
    }
  }
  return {failures == 0, std::to_string(triples) + " metric triples, " + std::to_string(pairs) +
                             " map pairs over " + std::to_string(g_maps.size()) + " maps, " +
                             std::to_string(failures) + " failures"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("banach-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ofstream(dir / "v.vec") << "2 1\n3 -1/2\n5 1\n";
  std::ofstream(dir / "sweep.cfg") << "spaces = l1, tstar, james:l1\nk_range = 2..3\n"
                                      "ground = k..k+5\nmode = both\n";
  const std::vector<std::string> commands = {
      "norm --space t --input v.vec",
      "norm --space tstar --input v.vec --verify",
      "norm --space l2 --input v.vec",
      "norm --space james:tstar --input v.vec",
      "concentrate --config sweep.cfg",
      "interlaced --config sweep.cfg",
      "cache build --dim 7 --file ns7.txt",
      "cache inspect --dim 7 --file ns7.txt",
      "cache verify --dim 7 --file ns7.txt",
      "map --space tstar --ground 2..7 --k 2 --output m.txt",
      "moduli --map m.txt --pairs-csv pairs.csv",
  };
  std::size_t differing = 0;
  std::string which;
  for (const auto& c : commands) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const std::string cmd = "cd '" + dir.string() + "' && '" BANACH_CLI "' --no-timing " + c +
                              " > out.txt 2>&1";
      const int status = std::system(cmd.c_str());
      outputs[run] = std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "\n" +
                     slurp(dir / "out.txt");
      for (const char* f : {"ns7.txt", "m.txt", "pairs.csv"}) {
        if (fs::exists(dir / f)) outputs[run] += slurp(dir / f);
      }
    }
    if (outputs[0] != outputs[1] || outputs[0].rfind("0\n", 0) != 0) {
      ++differing;
      which += " [" + c + "]";
    }
  }
  fs::remove_all(dir);
  return {differing == 0, std::to_string(commands.size()) + " commands run twice, " +
                              std::to_string(differing) + " differed or failed" + which};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "T norm equals the subset oracle on {-1,0,1/2,1}^6", 60, oracle_equivalence},
      {2, "unit vectors have norm 1 and the norm ignores signs", 30, normalization},
      {3, "T* block estimate with constant 2 on {1..10}", 600, block_estimate},
      {4, "pairing bounded by T x T* and LP primal = dual", 300, duality},
      {5, "l1 summing map does not concentrate, T* basis map does", 900, concentration_contrast},
      {6, "interlaced diameter over Lip bounded in k for J[(T* basis)]", 1200, interlaced_bound},
      {7, "Hamming/Johnson metric axioms and moduli sandwich", 120, metric_axioms_and_sandwich},
      {8, "CLI output is byte-identical across runs", 600, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] %d. %s: %s (%.1f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.title, o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
