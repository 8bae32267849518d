#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mmdim/error.hpp"
#include "mmdim/mdim.hpp"
#include "mmdim/zoo.hpp"
#include "oracles.hpp"

using namespace mmdim;

namespace {

ZooSystem preset(const std::string& name, std::size_t depth, std::size_t levels = 16, std::size_t grid = 256) {
  PresetParams p;
  p.depth = depth;
  p.levels = levels;
  p.grid = grid;
  return instantiate(name, p);
}

std::shared_ptr<const SemigroupSystem> identity_on(std::vector<double> xs) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back({x});
  auto X = std::make_shared<SampledSpace>(pts, named_metric("euclidean"));
  return std::make_shared<SemigroupSystem>(X, symbol_space(1), [](std::size_t, const Point& x) { return x; }, false);
}

}  // namespace

TEST_CASE("time ladders") {
  CHECK_NOTHROW(validate_time_ladder({1, 2, 4}, "n"));
  CHECK_THROWS_AS(validate_time_ladder({2, 2}, "n"), Error);
  CHECK_THROWS_AS(validate_time_ladder({0, 1}, "n"), Error);
}

TEST_CASE("scale entropy") {
  const auto walk = RandomWalkSpec::uniform(1, 0);
  SUBCASE("binary full shift") {
    const auto z = preset("binary-shift", 10);
    for (double eps : {0.2, 1.0 / 8, 1.0 / 16}) {
      const auto rec = scale_entropy(*z.whole, walk, eps, {1, 2, 3, 4}, CountKind::Separated, true);
      CAPTURE(eps);
      CHECK(std::fabs(rec.value - std::log(2.0)) <= 0.05);
      CHECK(rec.lower <= rec.upper);
    }
  }
  SUBCASE("identity") {
    const auto z = preset("identity", 0, 16, 128);
    for (double eps : {0.25, 0.05})
      CHECK(scale_entropy(*z.whole, RandomWalkSpec::uniform(2, 0), eps, {1, 2, 3}, CountKind::Separated, true).value == 0.0);
  }
  SUBCASE("interval shift at 1/16") {
    const auto z = preset("interval-shift", 8, 16);
    const auto rec = scale_entropy(*z.whole, walk, 1.0 / 16, {1, 2, 3}, CountKind::Separated, false);
    CHECK(std::fabs(rec.value - std::log(16.0)) <= 0.1);
  }
}

TEST_CASE("whole-space dimensions") {
  const auto walk = RandomWalkSpec::uniform(1, 0);
  const std::vector<double> ladder{0.25, 0.125, 0.0625};
  SUBCASE("finite alphabet shift") {
    const auto z = preset("binary-shift", 10);
    const auto up = mdim_whole(*z.whole, walk, ladder, {1, 2, 3, 4}, Variant::Upper);
    CHECK(std::fabs(up.slope) <= 0.05);
    const auto sub = umdim_subset(*z.whole, walk, ladder, {1, 2, 3, 4});
    CHECK(std::fabs(sub.slope - up.slope) <= 0.1);
  }
  SUBCASE("interval shift") {
    const auto z = preset("interval-shift", 6, 16);
    CHECK(std::fabs(mdim_whole(*z.whole, walk, ladder, {1, 2}, Variant::Upper).slope - 1.0) <= 0.1);
  }
  SUBCASE("identity") {
    const auto z = preset("identity", 0, 16, 128);
    CHECK(mdim_whole(*z.whole, RandomWalkSpec::uniform(2, 0), ladder, {1, 2}, Variant::Lower).slope == doctest::Approx(0.0));
  }
}

TEST_CASE("spanning averages") {
  const auto sys = identity_on({0.0, 0.3, 0.6});
  const SampledTarget three(sys, {0, 1, 2}, CountMode::Exact);
  const SampledTarget one(sys, {1}, CountMode::Exact);
  const auto walk = RandomWalkSpec::uniform(1, 0);
  for (std::size_t N : {1, 2, 5}) {
    CHECK(lambda_B(three, walk, N, 0.35).mean == 1.0);
    CHECK(lambda_B(one, walk, N, 0.01).mean == 1.0);
  }
  const auto single = umdim_subset(one, walk, {0.25, 0.125}, {1, 2, 3});
  CHECK(single.slope == 0.0);

  const auto circle = preset("circle-expanding", 0, 16, 256);
  const auto two = RandomWalkSpec::uniform(2, 0);
  CHECK(lambda_B(*circle.whole, two, 3, 1.0 / 16).mean ==
        expected_count(*circle.whole, two, 3, 1.0 / 16, CountKind::Spanning).mean);
}

TEST_CASE("Bowen cover outer measure") {
  const auto sys = identity_on({0.0, 0.3, 0.6});
  const SampledTarget three(sys, {0, 1, 2}, CountMode::Exact);
  const SampledTarget one(sys, {2}, CountMode::Exact);
  // A singleton is best covered by one ball with the longest allowed word.
  CPOptions shortest;
  shortest.slack = 0;
  for (double lambda : {0.3, 1.0})
    for (std::size_t N : {1, 2, 3}) {
      const Word w(std::vector<std::uint32_t>(N, 0));
      CHECK(cp_outer_measure(one, w, lambda, 0.1, shortest).value == doctest::Approx(std::exp(-lambda * (N + 1))));
      CHECK(cp_outer_measure(one, w, lambda, 0.1).value == doctest::Approx(std::exp(-lambda * (N + 4))));
    }
  const auto v = cp_outer_measure(three, Word::parse("0"), 0.0, 0.35);
  CHECK(v.exact);
  CHECK(v.value == 1.0);
  CHECK(cp_outer_measure(three, Word::parse("0"), 0.0, 0.1).value == 3.0);
}

TEST_CASE("outer measure monotonicity on small instances") {
  const auto z = preset("circle-expanding", 0, 16, 32);
  for (std::uint64_t k = 0; k < 12; ++k) {
    const SampledTarget t(z.sys, oracle::random_subset(51, k, 8, 32), CountMode::Exact);
    const Word w = oracle::random_word(52, k, 1 + oracle::draw(52, 100 + k, 0, 2), 2);
    const double eps = 0.05 + 0.2 * counter_uniform(53, k, 0);
    CAPTURE(k);
    double prev = INFINITY;
    for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
      const double m = cp_outer_measure(t, w, lambda, eps).value;
      CHECK(m <= prev + 1e-12);
      prev = m;
      CHECK(cp_outer_measure(t, w, lambda, 2 * eps).value <= m + 1e-12);
    }
  }
}

TEST_CASE("critical exponent") {
  const auto walk = RandomWalkSpec::uniform(1, 0);
  const auto sys = identity_on({0.0, 0.3, 0.6});
  CHECK(cp_critical_exponent(SampledTarget(sys, {1}, CountMode::Exact), walk, {1, 2, 3}, 0.1).lambda <= 1e-3);
  CHECK(cp_critical_exponent(SampledTarget(sys, {0, 1, 2}, CountMode::Exact), walk, {1, 2, 3}, 0.1).lambda <= 1e-3);

  const auto binary = preset("binary-shift", 12);
  const auto crit = cp_critical_exponent(*binary.whole, walk, {1, 2, 3, 4}, 1.0 / 8);
  CHECK(std::fabs(crit.lambda - std::log(2.0)) <= 0.1);
  // Classification is monotone along the scan.
  auto trace = crit.trace;
  std::sort(trace.begin(), trace.end());
  bool seen_above = false;
  for (const auto& [lambda, above] : trace) {
    if (seen_above) CHECK(above);
    seen_above = seen_above || above;
  }
}

TEST_CASE("string covers against Bowen covers") {
  const auto z = preset("circle-expanding", 0, 16, 16);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto Z = oracle::random_subset(61, k, 5, 16);
    const SampledTarget t(z.sys, Z, CountMode::Exact);
    const Word w = oracle::random_word(62, k, 1 + oracle::draw(62, 100 + k, 0, 2), 2);
    const double eps = 0.1 + 0.2 * counter_uniform(63, k, 0);
    for (double lambda : {0.0, 0.5, 1.0}) {
      CAPTURE(k);
      CAPTURE(lambda);
      const double strings = open_cover_oracle(*z.sys, Z, w, lambda, eps);
      CHECK(strings >= cp_outer_measure(t, w, lambda, 2 * eps).value - 1e-12);
      CHECK(cp_outer_measure(t, w, lambda, eps / 4).value >= strings - 1e-12);
    }
  }
  std::vector<std::size_t> big(9);
  for (std::size_t i = 0; i < 9; ++i) big[i] = i;
  CHECK_THROWS_AS(open_cover_oracle(*z.sys, big, Word::parse("0"), 0.5, 0.1), Error);
}

TEST_CASE("averaged spanning counts are submultiplicative on invariant sets") {
  // Pairs of eps/2-spanning centers for the two halves give eps-spanning
  // centers for the joined word, and the walk factorizes over the halves.
  for (const auto& z : {preset("binary-shift", 8), preset("identity", 0, 16, 64), preset("circle-expanding", 0, 16, 64)}) {
    const auto walk = RandomWalkSpec::uniform(z.whole->alphabet(), 0);
    for (double eps : {0.25, 0.125}) {
      for (std::size_t p = 1; p <= 2; ++p)
        for (std::size_t q = 1; q <= 2; ++q) {
          const double lhs = std::log(lambda_B(*z.whole, walk, p + q + 1, eps).mean);
          const double rhs =
              std::log(lambda_B(*z.whole, walk, p, eps / 2).mean) + std::log(lambda_B(*z.whole, walk, q, eps / 2).mean);
          CAPTURE(z.name);
          CAPTURE(eps);
          CHECK(lhs <= rhs + 1e-9);
        }
    }
  }
}
