#include <doctest.h>

#include <random>
#include <set>

#include "banach/dualnorm.hpp"
#include "banach/errors.hpp"
#include "banach/james.hpp"
#include "oracles.hpp"

using namespace banach;

TEST_SUITE("james") {
  TEST_CASE("interval system counts follow the recurrence") {
    const auto a = oracle::interval_system_counts(12);
    for (Index n = 1; n <= 12; ++n) {
      std::size_t count = 0;
      for_each_interval_system({1, n}, [&](const std::vector<Interval>&) { ++count; });
      CHECK(count == a[n] - 1);
      if (n <= 8) CHECK(enumerate_interval_systems({1, n}).size() == a[n] - 1);
    }
    CHECK(a[3] - 1 == 12);
  }

  TEST_CASE("canonical enumeration order") {
    const auto systems = enumerate_interval_systems({1, 2});
    REQUIRE(systems.size() == 4);
    CHECK(systems[0].intervals == std::vector<Interval>{{1, 1}});
    CHECK(systems[1].intervals == std::vector<Interval>{{2, 2}});
    CHECK(systems[2].intervals == std::vector<Interval>{{1, 2}});
    CHECK(systems[3].intervals == std::vector<Interval>{{1, 1}, {2, 2}});
    CHECK(systems[3].anchors() == std::vector<Index>{1, 2});
    std::set<std::vector<Interval>> seen;
    oracle::interval_systems(1, 5, [&](const std::vector<Interval>& s) { seen.insert(s); });
    std::set<std::vector<Interval>> ours;
    for (const auto& s : enumerate_interval_systems({1, 5})) ours.insert(s.intervals);
    CHECK(seen == ours);
  }

  TEST_CASE("base l1 sums blocks") {
    auto l1 = std::make_shared<LpEngine>(LpExponent::one, 6);
    // single intervals {i} recover the l1 norm; any coarser system can only cancel.
    const FiniteVector a{{1, 1}, {2, -1}, {4, 2}};
    CHECK(james_norm(a, *l1) == 4);
    auto linf = std::make_shared<LpEngine>(LpExponent::infinity, 6);
    // the interval {1..2} sums to 0, {2} alone gives 1, {4} gives 2, {1..4} gives 2.
    CHECK(james_norm(a, *linf) == 2);
    CHECK(james_norm(FiniteVector{{1, 1}, {2, 1}}, *linf) == 2);
  }

  TEST_CASE("matches the unrestricted interval-system oracle") {
    std::vector<NormEnginePtr> bases{
        std::make_shared<LpEngine>(LpExponent::one, 5),
        std::make_shared<LpEngine>(LpExponent::infinity, 5),
        std::make_shared<LpEngine>(LpExponent::two, 5),
        std::make_shared<TsirelsonEngine>(5),
        std::make_shared<TStarEngine>(std::make_shared<PolyhedralNormDescription>(
            PolyhedralNormDescription::from_norming_set(norming_set(5))))};
    std::mt19937_64 rng(13);
    for (const auto& base : bases) {
      for (int trial = 0; trial < 25; ++trial) {
        const auto a = oracle::random_vector(rng, 1, 5);
        CHECK(james_norm(a, *base) == oracle::brute_james(a, *base, 5));
      }
    }
  }

  TEST_CASE("engine wrapper") {
    auto base = std::make_shared<LpEngine>(LpExponent::two, 4);
    JamesEngine j(base);
    CHECK(j.name() == "james:l2");
    CHECK(j.power() == 2);
    CHECK_FALSE(j.unconditional());
    CHECK(j(FiniteVector{{1, 1}, {2, -1}}) == 2);
    CHECK_THROWS_AS(j(FiniteVector::unit(5)), DimensionError);
  }

  TEST_CASE("norm axioms with a T* base") {
    auto base = std::make_shared<TStarEngine>(std::make_shared<PolyhedralNormDescription>(
        PolyhedralNormDescription::from_norming_set(norming_set(6))));
    JamesEngine j(base);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = oracle::random_vector(rng, 1, 6);
      const auto y = oracle::random_vector(rng, 1, 6);
      CHECK(j(x + y) <= j(x) + j(y));
      CHECK(j(x * make_scalar(-1, 2)) == j(x) / 2);
      for (const auto& [i, c] : x.entries()) CHECK(abs_scalar(c) <= j(x));
    }
  }
}

TEST_SUITE("james") {
  TEST_CASE("interlaced differences over a T* base against oracles") {
    GaugeOptions full;
    full.restrict_columns = false;
    for (Index n : {6u, 8u}) {
      auto base = std::make_shared<TStarEngine>(
          std::make_shared<PolyhedralNormDescription>(
              PolyhedralNormDescription::from_norming_set(norming_set(n))),
          full);
      const std::size_t k = (n - 2) / 2;
      for (const auto& [m, p] : enumerate_interlaced_pairs(GroundSet::range(1, n), k)) {
        FiniteVector diff;
        for (std::size_t i = 0; i < k; ++i) {
          diff.set(m[i], make_scalar(1, 2));
          diff.set(p[i], make_scalar(-1, 2));
        }
        CHECK(james_norm(diff, *base) == oracle::brute_james(diff, *base, n));
      }
    }
    // Singletons {1},...,{6} already give (1/2)||1_{1..6}||_{T*} >= 7/3:
    // x pairs to 14/3 with the indicator and has T norm 1.
    const FiniteVector x{{1, 1}, {2, 1}, {3, make_scalar(2, 3)}, {4, make_scalar(2, 3)},
                         {5, make_scalar(2, 3)}, {6, make_scalar(2, 3)}};
    CHECK(oracle::brute_t_norm(x, 6) == 1);
    CHECK(inner_product(x, FiniteVector{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}}) ==
          make_scalar(14, 3));
  }
}
