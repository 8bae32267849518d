#include <doctest.h>

#include <cmath>

#include "mmdim/error.hpp"
#include "mmdim/mdim.hpp"
#include "mmdim/zoo.hpp"

using namespace mmdim;

TEST_CASE("grids and helpers") {
  CHECK(interval_levels(3) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(interval_levels(1), Error);
  const auto c = circle_grid(4);
  REQUIRE(c.size() == 4);
  CHECK(c[3] == Point{0.75});
  const auto s = sequence_grid({0.0, 1.0}, 3);
  REQUIRE(s.size() == 8);
  CHECK(s.front() == Point{0, 0, 0});
  CHECK(s[1] == Point{0, 0, 1});
  CHECK(shift_point({1, 0, 1}) == Point{0, 1, 0});
  CHECK(symbol_space(1)->size() == 1);
  const auto y3 = symbol_space(3);
  CHECK(y3->point(1) == Point{0.5});
  CHECK(y3->dist(0, 2) == 1.0);
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) {
    PresetParams p;
    p.depth = 6;
    p.levels = 4;
    p.grid = 32;
    const auto z = instantiate(name, p);
    CAPTURE(name);
    CHECK(z.name == name);
    REQUIRE(z.whole);
    REQUIRE(z.mass);
    CHECK(z.whole->alphabet() == z.family.alphabet);
    if (z.sys) CHECK(z.sys->alphabet() == z.family.alphabet);
  }
  CHECK_THROWS_AS(instantiate("torus"), Error);
  PresetParams deep;
  deep.depth = 14;
  CHECK_THROWS_AS(instantiate("binary-shift", deep), Error);

  PresetParams p;
  p.grid = 16;
  const auto ce = instantiate("circle-expanding", p);
  CHECK(ce.family.apply(0, {0.375})[0] == doctest::Approx(0.75));
  CHECK(ce.family.apply(1, {0.375})[0] == doctest::Approx(0.125));
  const auto rot = instantiate("rotation-pair", p);
  CHECK(rot.family.apply(0, {0.0})[0] == doctest::Approx(1.0 / 16));
  CHECK(rot.family.apply(1, {0.0})[0] == doctest::Approx(5.0 / 16));
}

TEST_CASE("preset dimension values") {
  SUBCASE("identity") {
    PresetParams p;
    p.grid = 64;
    const auto z = instantiate("identity", p);
    CHECK(mdim_whole(*z.whole, RandomWalkSpec::uniform(z.family.alphabet, 0), {0.25, 0.125, 0.0625}, {1, 2},
                     Variant::Upper)
              .slope == 0.0);
  }
  SUBCASE("binary shift at depth 12") {
    PresetParams p;
    p.depth = 12;
    const auto z = instantiate("binary-shift", p);
    const auto walk = RandomWalkSpec::uniform(1, 0);
    for (double eps : {0.2, 0.1, 1.0 / 16, 1.0 / 32, 0.02}) {
      CAPTURE(eps);
      CHECK(std::fabs(scale_entropy(*z.whole, walk, eps, {1, 2, 3, 4}, CountKind::Separated, true).value - std::log(2.0)) <=
            0.05);
    }
  }
}
