// banach: command-line front end for the norm engines and experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "banach/concentration.hpp"
#include "banach/config.hpp"
#include "banach/dualnorm.hpp"
#include "banach/errors.hpp"
#include "banach/james.hpp"
#include "banach/lipmaps.hpp"
#include "banach/tsirelson.hpp"

namespace {

using namespace banach;

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitVerification = 4;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

GroundSet parse_ground_arg(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return parse_ground(text);
  try {
    return GroundSet::range(static_cast<Index>(std::stoul(text.substr(0, dots))),
                            static_cast<Index>(std::stoul(text.substr(dots + 2))));
  } catch (const std::logic_error&) {
    throw ParseError("bad ground range '" + text + "'");
  }
}

struct CacheArgs {
  std::string action;
  Index dim = 0;
  Index lo = 1;
  bool no_prune = false;
  std::string file;
  Index generation_limit = 10;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
};

std::string cache_file(const CacheArgs& a) {
  if (!a.file.empty()) return a.file;
  const std::string dir = default_cache_dir().value_or(".");
  return norming_set_cache_path(dir, a.lo, a.dim, !a.no_prune);
}

int run_cache(const CacheArgs& a) {
  const std::string path = cache_file(a);
  if (a.action == "build") {
    NormingSetOptions opts;
    opts.prune = !a.no_prune;
    opts.generation_limit = a.generation_limit;
    const NormingSet set = norming_set_window(a.lo, a.dim, opts);
    if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
      std::filesystem::create_directories(parent);
    }
    save_norming_set(set, path);
    std::cout << "wrote " << set.size() << " functionals to " << path << '\n';
    return 0;
  }
  const auto loaded = load_norming_set(path, !a.no_prune);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  const NormingSet& set = loaded.set;
  if (set.lo != a.lo || set.N != a.dim) {
    throw VerificationError("file covers [" + std::to_string(set.lo) + ", " +
                            std::to_string(set.N) + "], expected [" + std::to_string(a.lo) +
                            ", " + std::to_string(a.dim) + "]");
  }
  if (a.action == "inspect") {
    std::map<unsigned, std::size_t> histogram;
    for (const auto& f : set.functionals) ++histogram[f.depth()];
    std::cout << "window " << set.lo << ".." << set.N << '\n'
              << "prune " << (set.prune ? "true" : "false") << '\n'
              << "count " << set.size() << '\n';
    for (const auto& [depth, count] : histogram) {
      std::cout << "depth " << depth << ' ' << count << '\n';
    }
    return 0;
  }
  // verify
  std::mt19937_64 rng(a.seed);
  const Scalar values[] = {Scalar(-1), Scalar(0), Scalar(1, 2), Scalar(1), Scalar(3, 4)};
  for (std::size_t s = 0; s < a.samples; ++s) {
    FiniteVector x;
    for (Index i = set.lo; i <= set.N; ++i) x.set(i, values[rng() % 5]);
    const Scalar lhs = set.support_value(x);
    const Scalar rhs = t_norm(x);
    if (lhs != rhs) {
      throw VerificationError("support value " + format_scalar(lhs) + " != t_norm " +
                              format_scalar(rhs) + " at " + format_inline(x));
    }
  }
  for (Index i = set.lo; i <= set.N; ++i) {
    if (set.support_value(FiniteVector::unit(i)) != 1) {
      throw VerificationError("support value of e_" + std::to_string(i) + " is not 1");
    }
  }
  std::cout << "ok " << set.size() << " functionals, " << a.samples << " samples\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact norms in combinatorial Banach spaces and Hamming-graph experiments"};
  app.require_subcommand(1);
  bool no_timing = false;
  app.add_flag("--no-timing", no_timing, "Leave elapsed_ms empty so output is reproducible");
  std::optional<unsigned> jobs;
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  Index generation_limit = 10;
  app.add_option("--generation-limit", generation_limit,
                 "Widest norming-set window generated on demand");

  // norm
  auto* norm = app.add_subcommand("norm", "Evaluate a norm exactly");
  std::string space;
  Index dim = 0;
  std::string input;
  bool verify = false;
  norm->add_option("--space", space, "t, tstar, james:<base>, l1, l2 or linf")->required();
  norm->add_option("--dim", dim, "Coordinates {1..dim} (default: max index of the input)");
  norm->add_option("--input", input, "Vector file")->required();
  norm->add_flag("--verify", verify, "tstar: solve both LPs and print the certificate");

  // concentrate / interlaced
  std::string config_path;
  std::string output;
  auto* concentrate = app.add_subcommand("concentrate", "Subset search for small image diameter");
  concentrate->add_option("--config", config_path, "Experiment config")->required();
  concentrate->add_option("--output", output, "CSV path (overrides the config)");
  auto* interlaced = app.add_subcommand("interlaced", "Interlaced-pair diameters");
  interlaced->add_option("--config", config_path, "Experiment config")->required();
  interlaced->add_option("--output", output, "CSV path (overrides the config)");

  // cache
  CacheArgs cache_args;
  auto* cache = app.add_subcommand("cache", "Build, inspect or verify norming-set files");
  cache->add_option("action", cache_args.action, "build | inspect | verify")
      ->required()
      ->check(CLI::IsMember({"build", "inspect", "verify"}));
  cache->add_option("--dim", cache_args.dim, "Largest coordinate N")->required();
  cache->add_option("--lo", cache_args.lo, "Smallest coordinate of the window");
  cache->add_flag("--no-prune", cache_args.no_prune, "Keep dominated functionals");
  cache->add_option("--file", cache_args.file, "Norming-set file (default: cache directory)");
  cache->add_option("--samples", cache_args.samples, "verify: number of sampled vectors");
  cache->add_option("--seed", cache_args.seed, "verify: sampling seed");

  // map
  auto* map = app.add_subcommand("map", "Write a map file");
  std::string ground_text;
  std::size_t k = 0;
  std::string kind = "summing";
  std::string metric = "hamming";
  std::uint64_t seed = 0;
  map->add_option("--space", space, "Codomain")->required();
  map->add_option("--ground", ground_text, "lo..hi or {m1,...}")->required();
  map->add_option("--k", k, "Subset size")->required();
  map->add_option("--kind", kind, "summing | array | random_signs")
      ->check(CLI::IsMember({"summing", "array", "random_signs"}));
  map->add_option("--metric", metric, "hamming | johnson")
      ->check(CLI::IsMember({"hamming", "johnson"}));
  map->add_option("--seed", seed, "random_signs seed");
  map->add_option("--output", output, "Map file path (default: stdout)");

  // moduli
  auto* moduli = app.add_subcommand("moduli", "Lipschitz constant, moduli and coarse fit");
  std::string map_path;
  std::string theta_text = "1";
  std::vector<std::string> threshold_texts;
  std::string pairs_csv;
  moduli->add_option("--map", map_path, "Map file")->required();
  moduli->add_option("--theta", theta_text, "Coarse-fit threshold");
  moduli->add_option("--thresholds", threshold_texts, "Moduli thresholds (default 0..k)")
      ->delimiter(',');
  moduli->add_option("--pairs-csv", pairs_csv, "Also write every pair distance here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  SpaceContext ctx;
  ctx.norming.generation_limit = generation_limit;
  ctx.cache_dir = default_cache_dir().value_or(".");

  try {
    if (*norm) {
      const FiniteVector v = read_vector_file(input);
      const Index n = dim ? dim : std::max<Index>(1, v.max_index());
      if (space == "tstar") {
        auto description = std::make_shared<PolyhedralNormDescription>(
            PolyhedralNormDescription::from_norming_set(obtain_norming_set(1, n, ctx)));
        GaugeOptions opts;
        opts.verify = verify;
        if (v.max_index() > n) throw DimensionError("input exceeds --dim");
        const GaugeResult r = gauge_norm(v, *description, opts);
        std::cout << format_scalar(r.value) << '\n';
        if (verify) {
          check_certificate(v, *description, r.certificate);
          std::cout << "packing " << format_scalar(*r.packing_value) << '\n'
                    << format_certificate(r.certificate);
        }
        return 0;
      }
      if (verify) throw InvalidArgument("--verify applies to --space tstar only");
      const NormEnginePtr engine = resolve_space(space, n, ctx);
      const Scalar value = engine->evaluate(v);
      std::cout << format_norm_value(value, engine->power()) << '\n';
      if (engine->power() == 2) {
        const SqrtEnclosure e = enclose_sqrt(value, make_scalar(1, 1000000));
        if (e.lo == e.hi) {
          std::cout << "= " << format_scalar(e.lo) << '\n';
        } else {
          std::cout << "in [" << format_scalar(e.lo) << ", " << format_scalar(e.hi) << "]\n";
        }
      }
      return 0;
    }
    if (*concentrate || *interlaced) {
      const ExperimentConfig config = parse_config_file(config_path);
      SweepOptions opts;
      opts.timing = !no_timing;
      opts.jobs = jobs;
      std::ostringstream csv;
      if (*concentrate) {
        concentration_sweep(config, ctx, csv, opts);
      } else {
        interlaced_sweep(config, ctx, csv, opts);
      }
      emit(csv.str(), output.empty() ? config.output.value_or("") : output);
      return 0;
    }
    if (*cache) {
      cache_args.generation_limit = generation_limit;
      return run_cache(cache_args);
    }
    if (*map) {
      ExperimentConfig config;
      config.ground_explicit = parse_ground_arg(ground_text);
      config.metric = parse_metric(metric);
      config.map = kind == "array" ? MapKind::array
                   : kind == "random_signs" ? MapKind::random_signs
                                            : MapKind::summing;
      config.seed = seed;
      if (k < 1 || k > config.ground_explicit->size()) {
        throw InvalidArgument("--k must satisfy 1 <= k <= |M|");
      }
      const Index lo =
          config.map == MapKind::array ? 1 : config.ground_explicit->elements().front();
      const auto codomain = resolve_space(space, config_map_dimension(config, k), ctx, lo);
      std::ostringstream text;
      write_map(text, build_config_map(config, k, codomain));
      emit(text.str(), output);
      return 0;
    }
    if (*moduli) {
      std::ifstream in(map_path);
      if (!in) throw ParseError("cannot open map '" + map_path + "'");
      const FiniteLipschitzMap f = read_map(in, [&](const std::string& name, Index n) {
        if (!is_known_space(name)) throw ParseError("unknown codomain '" + name + "'");
        return resolve_space(name, n, ctx);
      });
      if (jobs) f.pair_distances(*jobs);
      const int p = f.power();
      std::vector<Scalar> thresholds;
      if (threshold_texts.empty()) {
        for (std::size_t t = 0; t <= f.k(); ++t) thresholds.emplace_back(static_cast<long>(t));
      } else {
        for (const auto& t : threshold_texts) thresholds.push_back(parse_scalar(t));
      }
      std::cout << "lipschitz " << format_norm_value(lip_constant(f), p) << '\n';
      const ModuliProfile profile = moduli_profile(f, thresholds);
      for (std::size_t i = 0; i < profile.thresholds.size(); ++i) {
        std::cout << "t " << format_scalar(profile.thresholds[i]) << " rho "
                  << format_extended(profile.rho[i], p) << " omega "
                  << format_norm_value(profile.omega[i], p) << '\n';
      }
      const CoarseFit fit = coarse_lipschitz_fit(f, parse_scalar(theta_text));
      std::cout << "coarse theta " << theta_text << " c1 " << format_norm_value(fit.c1, p)
                << " c2 " << format_norm_value(fit.c2, p) << '\n';
      if (!pairs_csv.empty()) {
        std::ostringstream csv;
        write_pair_csv(csv, f);
        emit(csv.str(), pairs_csv);
      }
      return 0;
    }
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const VerificationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const ChecksumError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
