#include <doctest.h>

#include "mmdim/error.hpp"
#include "mmdim/semigroup.hpp"
#include "mmdim/zoo.hpp"
#include "oracles.hpp"

using namespace mmdim;

namespace {

std::shared_ptr<const SemigroupSystem> expanding(std::size_t grid) {
  PresetParams p;
  p.grid = grid;
  return instantiate("circle-expanding", p).sys;
}

}  // namespace

TEST_CASE("word algebra") {
  const Word w = Word::parse("01120");
  CHECK(w.to_string() == "01120");
  CHECK(reverse(reverse(w)) == w);
  CHECK(reverse(w).to_string() == "02110");
  CHECK(slice(w, 2, 4).to_string() == "112");
  CHECK(slice(w, 3, 2).empty());
  const Word left = Word::parse("21"), right = Word::parse("003");
  const Word lr = concat(left, right);
  CHECK(lr.to_string() == "21003");
  CHECK(is_right_factor(right, lr));
  CHECK(is_prefix(left, lr));
  CHECK_FALSE(is_right_factor(left, lr));
  CHECK(all_words(3, 2).size() == 9);
  CHECK(all_words(2, 3).front().to_string() == "000");
  CHECK(all_words(2, 3).back().to_string() == "111");
  CHECK(word_count(2, 70) == static_cast<std::size_t>(-1));
  CHECK(Word::parse("").empty());
  CHECK(Word::parse("az").symbols == std::vector<std::uint32_t>{10, 35});
}

TEST_CASE("word action composes right to left") {
  const auto sys = expanding(24);
  CHECK(apply_word(*sys, Word::parse("01"), {1.0 / 12})[0] == doctest::Approx(0.5));
  CHECK(apply_word(*sys, Word{}, {5.0 / 24})[0] == doctest::Approx(5.0 / 24));
  const auto doubling = expanding(8);
  CHECK(apply_word(*doubling, Word::parse("0"), {3.0 / 8})[0] == doctest::Approx(0.75));
  CHECK_THROWS_AS(apply_word(*sys, Word::parse("2"), {0.0}), Error);
}

TEST_CASE("composition invariant on every preset") {
  PresetParams p;
  p.grid = 64;
  p.depth = 6;
  p.levels = 4;
  p.alphabet = 2;
  for (const auto& name : preset_names()) {
    if (name == "interval-shift") p.depth = 3;
    const auto z = instantiate(name, p);
    REQUIRE(z.sys);
    const auto& sys = *z.sys;
    for (std::uint64_t k = 0; k < 30; ++k) {
      const Word w = oracle::random_word(1, k, oracle::draw(1, 100 + k, 0, 5), sys.alphabet());
      const Word v = oracle::random_word(2, k, oracle::draw(2, 100 + k, 0, 5), sys.alphabet());
      const std::size_t i = oracle::draw(3, k, 0, sys.phase().size());
      CHECK(apply_word_index(sys, concat(w, v), i) == apply_word_index(sys, w, apply_word_index(sys, v, i)));
    }
    CHECK(metric_audit(sys.phase(), 20000).clean());
  }
}

TEST_CASE("Bowen distance") {
  const auto doubling = expanding(8);
  CHECK(bowen_distance(*doubling, Word::parse("0"), Point{0.0}, Point{1.0 / 8}) == doctest::Approx(0.25));
  CHECK(bowen_distance(*doubling, Word{}, Point{0.0}, Point{1.0 / 8}) == doctest::Approx(0.125));
  CHECK(bowen_distance(*doubling, Word::parse("01"), Point{0.25}, Point{0.25}) == 0.0);
  CHECK_FALSE(bowen_ball_contains(*doubling, Word::parse("0"), {0.0}, 0.25, {1.0 / 8}));
  CHECK(bowen_ball_contains(*doubling, Word::parse("0"), {0.0}, 0.26, {1.0 / 8}));
  CHECK(bowen_ball_contains(*doubling, Word::parse("1"), {0.5}, 1e-9, {0.5}));

  // The orbit runs i_1 first; compare with the table-driven oracle.
  const auto sys = expanding(96);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Word w = oracle::random_word(7, k, oracle::draw(7, 1000 + k, 0, 6), 2);
    const std::size_t a = oracle::draw(8, k, 0, 96), b = oracle::draw(8, k, 1, 96);
    CHECK(bowen_distance(*sys, w, a, b) == doctest::Approx(oracle::bowen(*sys, w, a, b)));
    CHECK(bowen_distance(*sys, w, sys->phase().point(a), sys->phase().point(b)) ==
          doctest::Approx(oracle::bowen(*sys, w, a, b)));
  }
}

TEST_CASE("word-uniform balls sit inside Bowen balls") {
  const auto sys = expanding(64);
  for (std::uint64_t k = 0; k < 60; ++k) {
    const std::size_t n = oracle::draw(9, k, 0, 4);
    const Point c = sys->phase().point(oracle::draw(9, k, 1, 64));
    const Point x = sys->phase().point(oracle::draw(9, k, 2, 64));
    const double eps = 0.02 + 0.3 * counter_uniform(9, k, 3);
    CHECK(glw_ball_contains(*sys, 0, c, eps, x) == (sys->phase().dist(c, x) < eps));
    if (!glw_ball_contains(*sys, n, c, eps, x)) continue;
    for (const auto& w : all_words(2, n)) CHECK(bowen_ball_contains(*sys, w, c, eps, x));
  }
  PresetParams p;
  p.grid = 32;
  const auto id = instantiate("identity", p).sys;
  for (std::size_t i = 0; i < 32; ++i)
    CHECK(glw_ball_contains(*id, 3, {0.0}, 0.1, id->phase().point(i)) == (id->phase().dist({0.0}, id->phase().point(i)) < 0.1));
  CHECK_THROWS_AS(glw_ball_contains(*sys, 30, {0.0}, 0.1, {0.0}, 1000), Error);
}

TEST_CASE("snapping records its displacement") {
  auto X = std::make_shared<SampledSpace>(circle_grid(10), named_metric("circle"));
  const SemigroupSystem snapped(X, symbol_space(1), [](std::size_t, const Point& x) { return Point{x[0] + 0.03}; }, true);
  CHECK(snapped.snap_error() == doctest::Approx(0.03));
  CHECK_FALSE(snapped.closed());
  CHECK_THROWS_AS(
      SemigroupSystem(X, symbol_space(1), [](std::size_t, const Point& x) { return Point{x[0] + 0.03}; }, false), Error);
}
