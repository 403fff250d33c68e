#include "banach/config.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "banach/errors.hpp"
#include "banach/james.hpp"

namespace banach {

std::string format_affine(const AffineK& e) {
  std::string out;
  if (e.a != 0) out = (e.a == 1 ? "" : e.a == -1 ? "-" : std::to_string(e.a)) + "k";
  if (e.b != 0 || out.empty()) {
    if (!out.empty() && e.b > 0) out += '+';
    out += std::to_string(e.b);
  }
  return out;
}

std::string map_kind_name(MapKind m) {
  switch (m) {
    case MapKind::summing: return "summing";
    case MapKind::array: return "array";
    case MapKind::random_signs: return "random_signs";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Cursor over one value with error positions relative to the file.
class Cursor {
 public:
  Cursor(std::string_view text, std::string where, std::size_t line, std::size_t column)
      : text_(text), where_(std::move(where)), line_(line), column_(column) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(where_ + ":" + std::to_string(line_) + ":" +
                     std::to_string(column_ + pos_) + ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  void expect_end() {
    if (!done()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
  }

  std::optional<long long> integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) return std::nullopt;
    if (pos_ - start > 15) fail("number too large");
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }
  long long require_integer() {
    auto v = integer();
    if (!v) fail("expected a number");
    return *v;
  }

  AffineK affine() {
    AffineK out;
    bool first = true;
    for (;;) {
      long long sign = 1;
      if (accept("+")) {
        if (first) fail("expected a term");
      } else if (accept("-")) {
        sign = -1;
      } else if (!first) {
        break;
      }
      auto coefficient = integer();
      accept("*");
      if (accept("k")) {
        out.a += sign * coefficient.value_or(1);
      } else if (coefficient) {
        out.b += sign * *coefficient;
      } else {
        fail("expected a number or k");
      }
      first = false;
      const char c = peek();
      if (c != '+' && c != '-') break;
    }
    return out;
  }

  std::string rest() {
    skip_space();
    return trim(text_.substr(pos_));
  }

 private:
  std::string_view text_;
  std::string where_;
  std::size_t line_;
  std::size_t column_;
  std::size_t pos_ = 0;
};

const std::set<std::string> kKeys = {
    "spaces",  "k_range", "ground", "subset_size", "mode",   "greedy_strategy", "metric",
    "map",     "max_subsets", "generation_limit", "jobs", "output", "seed"};

}  // namespace

std::vector<std::size_t> ExperimentConfig::ks() const {
  std::vector<std::size_t> out;
  for (long long k = k_first; k <= k_last; ++k) out.push_back(static_cast<std::size_t>(k));
  return out;
}

GroundSet ExperimentConfig::ground(std::size_t k) const {
  if (ground_explicit) return *ground_explicit;
  const auto kk = static_cast<long long>(k);
  const long long lo = ground_range->first.at(kk);
  const long long hi = ground_range->second.at(kk);
  if (lo < 1) throw InvalidArgument("ground set at k=" + std::to_string(k) + " starts below 1");
  if (hi < lo) throw InvalidArgument("ground set at k=" + std::to_string(k) + " is empty");
  if (hi - lo >= 64) throw InvalidArgument("ground sets above 64 elements unsupported");
  return GroundSet::range(static_cast<Index>(lo), static_cast<Index>(hi));
}

std::size_t ExperimentConfig::l(std::size_t k) const {
  const long long v = subset_size.at(static_cast<long long>(k));
  if (v < 1) throw InvalidArgument("subset size at k=" + std::to_string(k) + " is not positive");
  return static_cast<std::size_t>(v);
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig config;
  std::map<std::string, std::size_t> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      Cursor(line, source, line_no, 1).fail("expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::size_t key_col = line.find_first_not_of(" \t") + 1;
    if (!kKeys.count(key)) {
      Cursor(line, source, line_no, key_col).fail("unknown key '" + key + "'");
    }
    if (seen.count(key)) {
      Cursor(line, source, line_no, key_col)
          .fail("duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    Cursor c(std::string_view(line).substr(eq + 1), source, line_no, eq + 2);
    if (c.done()) c.fail("missing value for '" + key + "'");

    if (key == "spaces") {
      config.spaces.clear();
      do {
        const std::string rest = c.rest();
        const std::string name = trim(rest.substr(0, rest.find(',')));
        if (name.empty()) c.fail("empty space name");
        if (!is_known_space(name)) c.fail("unknown space '" + name + "'");
        config.spaces.push_back(name);
        c.accept(name);
      } while (c.accept(","));
      c.expect_end();
    } else if (key == "k_range") {
      config.k_first = c.require_integer();
      c.expect("..");
      config.k_last = c.require_integer();
      c.expect_end();
    } else if (key == "ground") {
      if (c.peek() == '{') {
        try {
          config.ground_explicit = parse_ground(c.rest());
        } catch (const Error& e) {
          c.fail(e.what());
        }
        config.ground_range.reset();
      } else {
        const AffineK lo = c.affine();
        c.expect("..");
        const AffineK hi = c.affine();
        c.expect_end();
        config.ground_range.emplace(lo, hi);
        config.ground_explicit.reset();
      }
    } else if (key == "subset_size") {
      config.subset_size = c.affine();
      c.expect_end();
    } else if (key == "mode") {
      if (c.accept("exact")) {
        config.run_exact = true;
        config.run_greedy = false;
      } else if (c.accept("greedy")) {
        config.run_exact = false;
        config.run_greedy = true;
      } else if (c.accept("both")) {
        config.run_exact = config.run_greedy = true;
      } else {
        c.fail("mode must be exact, greedy or both");
      }
      c.expect_end();
    } else if (key == "greedy_strategy") {
      try {
        config.greedy_strategy = parse_strategy(c.rest());
      } catch (const Error& e) {
        c.fail(e.what());
      }
    } else if (key == "metric") {
      try {
        config.metric = parse_metric(c.rest());
      } catch (const Error& e) {
        c.fail(e.what());
      }
    } else if (key == "map") {
      if (c.accept("summing")) {
        config.map = MapKind::summing;
      } else if (c.accept("array")) {
        config.map = MapKind::array;
      } else if (c.accept("random_signs")) {
        config.map = MapKind::random_signs;
      } else {
        c.fail("map must be summing, array or random_signs");
      }
      c.expect_end();
    } else if (key == "max_subsets") {
      config.max_subsets = static_cast<std::uint64_t>(c.require_integer());
      c.expect_end();
    } else if (key == "generation_limit") {
      config.generation_limit = static_cast<Index>(c.require_integer());
      c.expect_end();
    } else if (key == "jobs") {
      config.jobs = static_cast<unsigned>(c.require_integer());
      if (config.jobs == 0) c.fail("jobs must be positive");
      c.expect_end();
    } else if (key == "output") {
      config.output = c.rest();
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(c.require_integer());
      c.expect_end();
    }
  }
  for (const char* required : {"spaces", "k_range", "ground"}) {
    if (!seen.count(required)) {
      throw ParseError(source + ": missing required key '" + required + "'");
    }
  }
  validate_config(config);
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  return parse_config(in, path);
}

void validate_config(const ExperimentConfig& config) {
  if (config.spaces.empty()) throw InvalidArgument("config lists no spaces");
  for (const auto& s : config.spaces) {
    if (!is_known_space(s)) throw InvalidArgument("unknown space '" + s + "'");
  }
  if (config.k_first < 1 && config.k_first <= config.k_last) {
    throw InvalidArgument("k_range must start at 1 or above");
  }
  for (std::size_t k : config.ks()) {
    const GroundSet ground = config.ground(k);
    const std::size_t l = config.l(k);
    const std::string at = " at k=" + std::to_string(k);
    if (l < k) {
      throw InvalidArgument("subset size l=" + std::to_string(l) + " is below k" + at);
    }
    if (ground.size() < l) {
      throw InvalidArgument("ground set has " + std::to_string(ground.size()) +
                            " elements, fewer than l=" + std::to_string(l) + at);
    }
  }
}

std::optional<std::string> default_cache_dir() {
  if (const char* dir = std::getenv("BANACH_CACHE_DIR"); dir && *dir) return std::string(dir);
  return std::nullopt;
}

std::string norming_set_cache_path(const std::string& dir, Index lo, Index N, bool prune) {
  return (std::filesystem::path(dir) / ("normset-" + std::to_string(lo) + "-" +
                                        std::to_string(N) + "-" + (prune ? "prune" : "full") +
                                        ".txt"))
      .string();
}

NormingSet obtain_norming_set(Index lo, Index N, const SpaceContext& ctx) {
  const auto dir = ctx.cache_dir ? ctx.cache_dir : default_cache_dir();
  if (dir) {
    const std::string path = norming_set_cache_path(*dir, lo, N, ctx.norming.prune);
    if (std::filesystem::exists(path)) {
      auto loaded = load_norming_set(path, ctx.norming.prune);
      if (loaded.set.lo == lo && loaded.set.N == N) return std::move(loaded.set);
    }
  }
  return norming_set_window(lo, N, ctx.norming);
}

bool is_known_space(const std::string& name) {
  if (name.rfind("james:", 0) == 0) {
    const std::string base = name.substr(6);
    return base.rfind("james:", 0) != 0 && is_known_space(base);
  }
  return name == "l1" || name == "l2" || name == "linf" || name == "t" || name == "tstar";
}

NormEnginePtr resolve_space(const std::string& name, Index dim, const SpaceContext& ctx,
                            Index lo) {
  if (dim < 1) throw InvalidArgument("dimension must be at least 1");
  if (name.rfind("james:", 0) == 0) {
    if (!is_known_space(name)) throw InvalidArgument("unknown space '" + name + "'");
    return std::make_shared<JamesEngine>(resolve_space(name.substr(6), dim, ctx, 1));
  }
  if (name == "l1") return std::make_shared<LpEngine>(LpExponent::one, dim);
  if (name == "l2") return std::make_shared<LpEngine>(LpExponent::two, dim);
  if (name == "linf") return std::make_shared<LpEngine>(LpExponent::infinity, dim);
  if (name == "t") return std::make_shared<TsirelsonEngine>(dim);
  if (name == "tstar") {
    auto description = std::make_shared<PolyhedralNormDescription>(
        PolyhedralNormDescription::from_norming_set(obtain_norming_set(lo, dim, ctx)));
    return std::make_shared<TStarEngine>(std::move(description), ctx.gauge);
  }
  throw InvalidArgument("unknown space '" + name + "'");
}

Index config_map_dimension(const ExperimentConfig& config, std::size_t k) {
  const GroundSet ground = config.ground(k);
  if (config.map == MapKind::array) return static_cast<Index>(k * ground.size());
  return ground.elements().back();
}

FiniteLipschitzMap build_config_map(const ExperimentConfig& config, std::size_t k,
                                    NormEnginePtr codomain) {
  const GroundSet ground = config.ground(k);
  switch (config.map) {
    case MapKind::summing:
      return summing_map(ground, unit_images(ground), k, std::move(codomain), config.metric);
    case MapKind::array:
      return array_map(ground, disjoint_block_rows(ground, k), k, std::move(codomain),
                       config.metric);
    case MapKind::random_signs: {
      std::mt19937_64 rng(config.seed + k);
      auto images = unit_images(ground);
      for (auto& x : images) {
        if (rng() & 1) x = -x;
      }
      return summing_map(ground, images, k, std::move(codomain), config.metric);
    }
  }
  throw InvalidArgument("unknown map kind");
}

namespace {

SpaceContext with_limits(const ExperimentConfig& config, SpaceContext ctx) {
  ctx.norming.generation_limit = config.generation_limit;
  return ctx;
}

NormEnginePtr codomain_for(const ExperimentConfig& config, const std::string& space,
                           std::size_t k, const SpaceContext& ctx) {
  const Index dim = config_map_dimension(config, k);
  const Index lo = config.map == MapKind::array ? 1 : config.ground(k).elements().front();
  return resolve_space(space, dim, ctx, lo);
}

}  // namespace

void concentration_sweep(const ExperimentConfig& config, const SpaceContext& base_ctx,
                         std::ostream& out, const SweepOptions& options) {
  const SpaceContext ctx = with_limits(config, base_ctx);
  SearchOptions search;
  search.max_subsets = config.max_subsets;
  search.jobs = options.jobs.value_or(config.jobs);
  write_report_header(out);
  for (const auto& space : config.spaces) {
    for (std::size_t k : config.ks()) {
      const auto start = std::chrono::steady_clock::now();
      const FiniteLipschitzMap f = build_config_map(config, k, codomain_for(config, space, k, ctx));
      f.pair_distances(search.jobs);
      const double setup_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
      const std::size_t l = config.l(k);
      if (config.run_exact) {
        auto r = exact_min_diameter(f, l, search);
        r.elapsed_ms += setup_ms;
        write_report_row(out, space, r, f.ground(), f.power(), options.timing);
      }
      if (config.run_greedy) {
        auto r = greedy_extraction(f, l, config.greedy_strategy);
        r.elapsed_ms += setup_ms;
        write_report_row(out, space, r, f.ground(), f.power(), options.timing);
      }
    }
  }
}

void interlaced_sweep(const ExperimentConfig& config, const SpaceContext& base_ctx,
                      std::ostream& out, const SweepOptions& options) {
  const SpaceContext ctx = with_limits(config, base_ctx);
  const unsigned jobs = options.jobs.value_or(config.jobs);
  write_report_header(out);
  for (const auto& space : config.spaces) {
    for (std::size_t k : config.ks()) {
      const auto start = std::chrono::steady_clock::now();
      const FiniteLipschitzMap f = build_config_map(config, k, codomain_for(config, space, k, ctx));
      if (f.ground().size() < 2 * k) {
        throw InvalidArgument("interlaced pairs need |M| >= 2k at k=" + std::to_string(k));
      }
      f.pair_distances(jobs);
      const Scalar lip = lip_constant(f);
      const InterlacedReport r = interlaced_diameter(f);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
      write_interlaced_row(out, space, k, f.ground(), lip, r, f.power(),
                           options.timing ? std::optional<double>(ms) : std::nullopt);
    }
  }
}

}  // namespace banach
