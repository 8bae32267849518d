#include <doctest.h>

#include <cmath>

#include "mmdim/error.hpp"
#include "mmdim/randomwalk.hpp"
#include "mmdim/zoo.hpp"
#include "oracles.hpp"

using namespace mmdim;

TEST_CASE("word sampling") {
  const auto walk = RandomWalkSpec::uniform(2, 7);
  CHECK(sample_word(walk, 0).empty());
  CHECK(sample_word(RandomWalkSpec({1.0, 0.0}, 3), 5).to_string() == "00000");
  CHECK(sample_word(walk, 12, 4) == sample_word(walk, 12, 4));
  CHECK(sample_word(walk, 12, 4) != sample_word(walk, 12, 5));

  std::size_t ones = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) ones += sample_word(walk, 1, s).symbols[0];
  CHECK(std::fabs(ones / 10000.0 - 0.5) <= 0.02);

  const RandomWalkSpec skewed({0.2, 0.8}, 1);
  std::size_t hits = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) hits += sample_symbol(skewed, s, 0);
  CHECK(std::fabs(hits / 10000.0 - 0.8) <= 0.02);
  CHECK(skewed.word_probability(Word::parse("101")) == doctest::Approx(0.8 * 0.2 * 0.8));
  CHECK_THROWS_AS(RandomWalkSpec({0.5, 0.6}, 0), Error);
}

TEST_CASE("counter hash is a pure function of its key") {
  CHECK(counter_hash(1, 2, 3) == counter_hash(1, 2, 3));
  CHECK(counter_hash(1, 2, 3) != counter_hash(1, 2, 4));
  CHECK(counter_hash(1, 2, 3) != counter_hash(1, 3, 3));
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const double u = counter_uniform(9, 0, k);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("expected counts against per-word oracles") {
  PresetParams p;
  p.grid = 64;
  const auto sys = instantiate("circle-expanding", p).sys;
  const auto Z = oracle::random_subset(5, 0, 12, 64);
  const SampledTarget target(sys, Z, CountMode::Exact);

  SUBCASE("two-term average") {
    const auto walk = RandomWalkSpec::uniform(2, 0);
    const double a = static_cast<double>(oracle::max_separated(*sys, Word::parse("0"), 0.1, Z));
    const double b = static_cast<double>(oracle::max_separated(*sys, Word::parse("1"), 0.1, Z));
    const auto e = expected_count(target, walk, 1, 0.1, CountKind::Separated);
    CHECK(e.enumerated);
    CHECK(e.mean == doctest::Approx((a + b) / 2));
  }
  SUBCASE("weighted enumeration") {
    const RandomWalkSpec walk({0.3, 0.7}, 0);
    for (std::size_t n = 0; n <= 3; ++n)
      for (double eps : {0.05, 0.12, 0.3}) {
        double sep = 0.0, span = 0.0;
        for (const auto& w : all_words(2, n)) {
          sep += walk.word_probability(w) * static_cast<double>(oracle::max_separated(*sys, w, eps, Z));
          span += walk.word_probability(w) * static_cast<double>(oracle::min_cover(*sys, w, eps, Z, false));
        }
        CAPTURE(n);
        CAPTURE(eps);
        CHECK(expected_count(target, walk, n, eps, CountKind::Separated).mean == doctest::Approx(sep));
        CHECK(expected_count(target, walk, n, eps, CountKind::Spanning).mean == doctest::Approx(span));
        // Wordwise sandwich carries over to the averages.
        const double half = expected_count(target, walk, n, eps / 2, CountKind::Spanning).mean;
        CHECK(span <= sep + 1e-12);
        CHECK(sep <= half + 1e-12);
      }
  }
  SUBCASE("one generator") {
    PresetParams q;
    q.grid = 64;
    const auto id = instantiate("identity", q).sys;
    const SampledTarget t(id, Z, CountMode::Exact);
    CHECK(expected_count(t, RandomWalkSpec({1.0, 0.0}, 0), 4, 0.1, CountKind::Separated).mean ==
          static_cast<double>(oracle::max_separated(*id, Word::parse("0000"), 0.1, Z)));
  }
}

TEST_CASE("Monte Carlo agrees with enumeration") {
  PresetParams p;
  p.grid = 256;
  const auto z = instantiate("circle-expanding", p);
  const auto walk = RandomWalkSpec::uniform(2, 11);
  const auto exact = expected_count(*z.whole, walk, 3, 1.0 / 16, CountKind::Separated);
  REQUIRE(exact.enumerated);
  AverageBudget mc;
  mc.exact_words = 1;
  mc.mc_samples = 200;
  const auto sampled = expected_count(*z.whole, walk, 3, 1.0 / 16, CountKind::Separated, mc);
  CHECK_FALSE(sampled.enumerated);
  CHECK(sampled.evaluations == 200);
  // All eight words give the same count only if the stderr vanishes; allow that.
  CHECK(std::fabs(sampled.mean - exact.mean) <= 3.0 * sampled.stderr_ + 1e-9);

  AverageBudget tight = mc;
  tight.max_evaluations = 10;
  const auto part = expected_count(*z.whole, walk, 3, 1.0 / 16, CountKind::Separated, tight);
  CHECK(part.partial);
  CHECK(part.evaluations == 10);
}
