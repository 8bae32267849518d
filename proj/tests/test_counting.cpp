#include <doctest.h>

#include "mmdim/counting.hpp"
#include "mmdim/error.hpp"
#include "mmdim/zoo.hpp"
#include "oracles.hpp"

using namespace mmdim;

namespace {

std::shared_ptr<const SemigroupSystem> identity_on(std::vector<double> xs) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back({x});
  auto X = std::make_shared<SampledSpace>(pts, named_metric("euclidean"));
  return std::make_shared<SemigroupSystem>(X, symbol_space(1), [](std::size_t, const Point& x) { return x; }, false);
}

std::vector<ZooSystem> small_presets() {
  std::vector<ZooSystem> out;
  PresetParams p;
  p.grid = 48;
  out.push_back(instantiate("circle-expanding", p));
  out.push_back(instantiate("rotation-pair", p));
  p.depth = 5;
  p.alphabet = 2;
  out.push_back(instantiate("binary-shift", p));
  p.depth = 3;
  p.levels = 5;
  out.push_back(instantiate("interval-shift", p));
  return out;
}

}  // namespace

TEST_CASE("counts on three points") {
  const auto sys = identity_on({0.0, 0.3, 0.6});
  const std::vector<std::size_t> Z{0, 1, 2};
  CHECK(max_separated(*sys, Word{}, 0.25, Z, CountMode::Exact).count == 3);
  CHECK(max_separated(*sys, Word{}, 0.35, Z, CountMode::Exact).count == 2);
  const auto span = min_spanning(*sys, Word{}, 0.35, Z, CountMode::Exact);
  CHECK(span.count == 1);
  CHECK(span.witness == std::vector<std::size_t>{1});
  CHECK(min_spanning(*sys, Word{}, 0.175, Z, CountMode::Exact).count == 3);
  const auto sw = sandwich_check(*sys, Word{}, 0.35, Z);
  CHECK(sw.r == 1);
  CHECK(sw.s == 2);
  CHECK(sw.r_half == 3);
  CHECK(sw.holds);
  CHECK(max_separated(*sys, Word{}, 0.01, {2}, CountMode::Exact).count == 1);
  CHECK(min_spanning(*sys, Word{}, 0.01, {2}, CountMode::Exact).count == 1);
  CHECK_THROWS_AS(max_separated(*sys, Word{}, 0.0, Z, CountMode::Exact), Error);
}

TEST_CASE("exact counts match subset enumeration") {
  const auto presets = small_presets();
  for (std::uint64_t k = 0; k < 80; ++k) {
    const auto& sys = *presets[k % presets.size()].sys;
    const auto Z = oracle::random_subset(11, k, 10, sys.phase().size());
    const Word w = oracle::random_word(12, k, oracle::draw(12, 500 + k, 0, 5), sys.alphabet());
    const double eps = 0.03 + 0.4 * counter_uniform(13, k, 0);
    CAPTURE(k);
    const auto s = max_separated(sys, w, eps, Z, CountMode::Exact);
    const auto r = min_spanning(sys, w, eps, Z, CountMode::Exact);
    const auto c = min_open_cover(sys, w, eps, Z, CountMode::Exact);
    CHECK(s.count == oracle::max_separated(sys, w, eps, Z));
    CHECK(r.count == oracle::min_cover(sys, w, eps, Z, false));
    CHECK(c.count == oracle::min_cover(sys, w, eps, Z, true));
    CHECK(r.count <= c.count);

    // Witnesses satisfy their definitions.
    for (std::size_t a = 0; a < s.witness.size(); ++a)
      for (std::size_t b = a + 1; b < s.witness.size(); ++b) CHECK(oracle::bowen(sys, w, s.witness[a], s.witness[b]) > eps);
    for (auto z : Z) {
      bool covered = false;
      for (auto centre : r.witness) covered = covered || oracle::bowen(sys, w, centre, z) <= eps;
      CHECK(covered);
    }

    // Greedy bounds sit on the right side of the optimum.
    CHECK(max_separated(sys, w, eps, Z, CountMode::Greedy).count <= s.count);
    CHECK(min_spanning(sys, w, eps, Z, CountMode::Greedy).count >= r.count);
  }
}

TEST_CASE("sandwich on random instances") {
  PresetParams p;
  p.grid = 64;
  const auto sys = instantiate("circle-expanding", p).sys;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto Z = oracle::random_subset(21, k, 10, 64);
    const Word w = oracle::random_word(22, k, oracle::draw(22, 900 + k, 0, 5), 2);
    const double eps = 0.01 + 0.5 * counter_uniform(23, k, 0);
    CHECK(sandwich_check(*sys, w, eps, Z).holds);
  }
  // eps above the Bowen diameter of Z.
  const auto big = sandwich_check(*sys, Word::parse("01"), 0.6, {0, 5, 9});
  CHECK(big.r == 1);
  CHECK(big.s == 1);
}

TEST_CASE("disjoint subfamily") {
  PresetParams p;
  p.grid = 256;
  const auto sys = instantiate("identity", p).sys;
  auto at = [&](double x) { return *sys->phase().find({x}); };
  SUBCASE("one ball") {
    const std::vector<BowenBall> balls{{Word{}, at(0.5), 0.1}};
    CHECK(disjoint_subfamily(*sys, balls) == std::vector<std::size_t>{0});
  }
  SUBCASE("two disjoint balls") {
    const std::vector<BowenBall> balls{{Word{}, at(0.125), 0.05}, {Word{}, at(0.5), 0.05}};
    CHECK(disjoint_subfamily(*sys, balls).size() == 2);
  }
  SUBCASE("three balls, two kept") {
    const std::vector<BowenBall> balls{{Word{}, at(0.0), 0.15}, {Word{}, at(0.1015625), 0.15}, {Word{}, at(0.5), 0.15}};
    const auto chosen = disjoint_subfamily(*sys, balls);
    CHECK(chosen.size() == 2);
    const auto chk = verify_subfamily(*sys, balls, chosen);
    CHECK(chk.disjoint);
    CHECK(chk.covers);
  }
  SUBCASE("random families") {
    PresetParams q;
    q.grid = 64;
    const auto ce = instantiate("circle-expanding", q).sys;
    for (std::uint64_t k = 0; k < 50; ++k) {
      std::vector<BowenBall> balls;
      const Word omega = oracle::random_word(31, k, 4, 2);
      const double eps = 0.05 + 0.3 * counter_uniform(34, k, 0);
      for (std::size_t b = 0; b < 2 + oracle::draw(31, 100 + k, 0, 8); ++b)
        balls.push_back({slice(omega, 1, oracle::draw(32, k, b, 5)), oracle::draw(33, k, b, 64), eps});
      const auto chosen = disjoint_subfamily(*ce, balls);
      // Independent check: no sampled point lies in two chosen balls.
      for (std::size_t a = 0; a < chosen.size(); ++a)
        for (std::size_t b = a + 1; b < chosen.size(); ++b) {
          const auto& A = balls[chosen[a]];
          const auto& B = balls[chosen[b]];
          for (std::size_t x = 0; x < 64; ++x)
            CHECK_FALSE((oracle::bowen(*ce, A.w, A.center, x) < A.eps && oracle::bowen(*ce, B.w, B.center, x) < B.eps));
        }
      CHECK(verify_subfamily(*ce, balls, chosen).covers);
    }
  }
}

TEST_CASE("sampled target caches and reports exactness") {
  PresetParams p;
  p.grid = 32;
  const auto z = instantiate("circle-expanding", p);
  const SampledTarget t(z.sys, {0, 3, 7, 11, 19}, CountMode::Exact);
  const auto v = t.count(Word::parse("10"), 0.1, CountKind::Separated);
  CHECK(v.exact);
  CHECK(v.count == static_cast<double>(oracle::max_separated(*z.sys, Word::parse("10"), 0.1, {0, 3, 7, 11, 19})));
  CHECK(t.count(Word::parse("10"), 0.1, CountKind::Separated).count == v.count);
  CHECK_FALSE(t.word_independent());
  CHECK(t.size() == 5.0);
  CHECK(t.sample_size() == 32.0);
}
