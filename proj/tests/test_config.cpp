#include <doctest.h>

#include <sstream>

#include "banach/config.hpp"
#include "banach/errors.hpp"

using namespace banach;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("full config") {
    const auto c = parse(
        "# contrast\n"
        "spaces = l1, tstar ,james:tstar\n"
        "k_range = 2..4\n"
        "ground = k..k+9   # window\n"
        "subset_size = 2k\n"
        "mode = both\n"
        "greedy_strategy = diameter\n"
        "metric = johnson\n"
        "map = array\n"
        "max_subsets = 500\n"
        "generation_limit = 12\n"
        "jobs = 3\n"
        "output = out.csv\n"
        "seed = 42\n");
    CHECK(c.spaces == std::vector<std::string>{"l1", "tstar", "james:tstar"});
    CHECK(c.ks() == std::vector<std::size_t>{2, 3, 4});
    CHECK(c.ground(3) == GroundSet::range(3, 12));
    CHECK(c.l(4) == 8);
    CHECK(c.run_exact);
    CHECK(c.run_greedy);
    CHECK(c.greedy_strategy == GreedyStrategy::diameter);
    CHECK(c.metric == Metric::johnson);
    CHECK(c.map == MapKind::array);
    CHECK(c.max_subsets == 500);
    CHECK(c.generation_limit == 12);
    CHECK(c.jobs == 3);
    CHECK(*c.output == "out.csv");
    CHECK(c.seed == 42);
    CHECK(config_map_dimension(c, 2) == 20);
  }

  TEST_CASE("affine ground bounds") {
    const auto c = parse("spaces = l1\nk_range = 1..3\nground = 1..2k+4\n");
    CHECK(c.ground(3) == GroundSet::range(1, 10));
    CHECK(parse("spaces=l1\nk_range=2..2\nground=2*k-1..3k\n").ground(2) == GroundSet::range(3, 6));
    CHECK(parse("spaces=l1\nk_range=2..2\nground={1,4,6,9}\n").ground(2) == GroundSet{1, 4, 6, 9});
    CHECK(format_affine({2, 4}) == "2k+4");
    CHECK(format_affine({1, -1}) == "k-1");
    CHECK(format_affine({0, 0}) == "0");
  }

  TEST_CASE("empty k range is allowed") {
    const auto c = parse("spaces = l1\nk_range = 3..2\nground = 1..4\n");
    CHECK(c.ks().empty());
    std::ostringstream out;
    concentration_sweep(c, {}, out);
    CHECK(out.str() == "space,k,ground,l,mode,lipschitz,min_diameter,ratio,witness,elapsed_ms\n");
  }

  TEST_CASE("errors carry positions") {
    CHECK(parse_error("spaces = l1\nk_range = 2..3\nground = 1..2k+4\nfoo = 1\n") ==
          "test.cfg:4:1: unknown key 'foo'");
    CHECK(parse_error("spaces = l1, l7\n") == "test.cfg:1:14: unknown space 'l7'");
    CHECK(parse_error("spaces = l1\nk_range = 2-3\n") == "test.cfg:2:12: expected '..'");
    CHECK(parse_error("spaces = l1\nk_range = 2..3\nground = 1..2q\n") ==
          "test.cfg:3:14: unexpected 'q'");
    CHECK(parse_error("spaces = l1\nspaces = t\n") ==
          "test.cfg:2:1: duplicate key 'spaces' (first on line 1)");
    CHECK(parse_error("spaces l1\n") == "test.cfg:1:1: expected 'key = value'");
    CHECK(parse_error("spaces =\n") == "test.cfg:1:9: missing value for 'spaces'");
    CHECK(parse_error("spaces = l1\nk_range = 1..2\n") ==
          "test.cfg: missing required key 'ground'");
    CHECK(parse_error("spaces = l1\nk_range = 2..3\nground = 1..8\nmode = fast\n") ==
          "test.cfg:4:8: mode must be exact, greedy or both");
  }

  TEST_CASE("validation") {
    CHECK_THROWS_WITH_AS(parse("spaces = l1\nk_range = 2..3\nground = 1..8\nsubset_size = k-1\n"),
                         "subset size l=1 is below k at k=2", InvalidArgument);
    CHECK_THROWS_AS(parse("spaces = l1\nk_range = 2..4\nground = 1..7\n"), InvalidArgument);
    CHECK_THROWS_AS(parse("spaces = l1\nk_range = 1..2\nground = k-1..8\n"), InvalidArgument);
    CHECK_THROWS_AS(parse("spaces = l1\nk_range = 0..2\nground = 1..8\n"), InvalidArgument);
  }

  TEST_CASE("space resolution") {
    SpaceContext ctx;
    CHECK(resolve_space("l2", 3, ctx)->power() == 2);
    CHECK(resolve_space("james:l1", 3, ctx)->name() == "james:l1");
    CHECK(resolve_space("tstar", 6, ctx)->evaluate(FiniteVector{{1, 1}, {2, 1}}) == 2);
    CHECK(resolve_space("tstar", 13, ctx, 4)->dimension() == 13);
    CHECK_THROWS_AS(resolve_space("tstar", 11, ctx), ResourceLimitError);
    CHECK_THROWS_AS(resolve_space("james:james:l1", 3, ctx), InvalidArgument);
    CHECK_FALSE(is_known_space("l3"));
    CHECK(norming_set_cache_path("/c", 2, 9, true) == "/c/normset-2-9-prune.txt");
  }

  TEST_CASE("sweeps are deterministic") {
    const auto c = parse(
        "spaces = l1, tstar\nk_range = 2..3\nground = k..k+6\nmode = both\n");
    SweepOptions opts;
    opts.timing = false;
    std::ostringstream a;
    std::ostringstream b;
    concentration_sweep(c, {}, a, opts);
    concentration_sweep(c, {}, b, opts);
    CHECK(a.str() == b.str());
    std::istringstream lines(a.str());
    std::string line;
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 1 + 2 * 2 * 2);
  }

  TEST_CASE("random sign map is seeded") {
    auto c = parse("spaces = l1\nk_range = 2..2\nground = 1..6\nmap = random_signs\nseed = 5\n");
    SpaceContext ctx;
    const auto f = build_config_map(c, 2, resolve_space("l1", 6, ctx));
    const auto g = build_config_map(c, 2, resolve_space("l1", 6, ctx));
    CHECK(f.images() == g.images());
    CHECK(lip_constant(f) == 1);
  }
}
