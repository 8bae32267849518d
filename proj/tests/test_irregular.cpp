#include <doctest.h>

#include <cmath>

#include "mmdim/error.hpp"
#include "mmdim/irregular.hpp"

using namespace mmdim;

namespace {

ZooSystem preset(const std::string& name, std::size_t depth, std::size_t alphabet = 1) {
  PresetParams p;
  p.depth = depth;
  p.alphabet = alphabet;
  p.grid = 64;
  return instantiate(name, p);
}

Observable constant(double c) {
  return [c](const Point&) { return std::vector<double>{c}; };
}

Point alternating(std::size_t len) {
  Point x(len);
  for (std::size_t i = 0; i < len; ++i) x[i] = static_cast<double>(i % 2);
  return x;
}

}  // namespace

TEST_CASE("Birkhoff traces") {
  const auto b = preset("binary-shift", 10);
  const Word zeros(std::vector<std::uint32_t>(200, 0));
  SUBCASE("constant observable") {
    const auto tr = birkhoff_trace(b.family, constant(0.7), alternating(200), zeros, 100);
    REQUIRE(tr.partials.size() == 100);
    for (const auto& v : tr.partials) CHECK(v[0] == doctest::Approx(0.7));
    CHECK(tr.oscillation == doctest::Approx(0.0));
  }
  SUBCASE("alternating point") {
    const auto tr = birkhoff_trace(b.family, coordinate_observable(0), alternating(200), zeros, 100);
    CHECK(tr.partials[0][0] == 0.0);
    CHECK(tr.partials[1][0] == 0.5);
    CHECK(tr.partials[98][0] == doctest::Approx(49.0 / 99));
    CHECK(tr.partials[99][0] == 0.5);
    // Recompute the partials directly from the orbit.
    Point x = alternating(200);
    double sum = 0.0;
    for (std::size_t n = 1; n <= 100; ++n) {
      sum += x[0];
      CHECK(tr.partials[n - 1][0] == doctest::Approx(sum / n));
      x = b.family.apply(0, x);
    }
  }
  SUBCASE("identity generators") {
    const auto id = preset("identity", 0, 2);
    const auto tr = birkhoff_trace(id.family, coordinate_observable(0), {0.3}, Word::parse("0110"), 5);
    for (const auto& v : tr.partials) CHECK(v[0] == doctest::Approx(0.3));
  }
  CHECK_THROWS_AS(birkhoff_trace(b.family, coordinate_observable(0), alternating(20), Word::parse("00"), 10), Error);
}

TEST_CASE("irregularity scores") {
  const auto b = preset("binary-shift", 10);
  const Point blocks = block_sequence(0.0, 1.0, 4096);
  CHECK(irregularity_score(b.family, constant(1.0), blocks, 1024, OmegaStrategy::Adversarial).oscillation == 0.0);
  CHECK(irregularity_score(b.family, constant(1.0), blocks, 1024, OmegaStrategy::Fixed, Word(std::vector<std::uint32_t>(1024, 0)))
            .oscillation == 0.0);
  const auto s = irregularity_score(b.family, coordinate_observable(0), blocks, 1024, OmegaStrategy::Adversarial);
  CHECK(s.oscillation >= 0.25);

  // One generator: only one omega, so the adversarial score is the plain one.
  const Word zeros(std::vector<std::uint32_t>(64, 0));
  CHECK(irregularity_score(b.family, coordinate_observable(0), blocks, 64, OmegaStrategy::Adversarial).oscillation ==
        doctest::Approx(irregularity_score(b.family, coordinate_observable(0), blocks, 64, OmegaStrategy::Fixed, zeros).oscillation));

  // Checkpoints keep the best value, so the score never drops with N.
  double prev = 0.0;
  for (std::size_t N : {64, 256, 1024, 4000}) {
    const double v = irregularity_score(b.family, coordinate_observable(0), blocks, N, OmegaStrategy::Adversarial).oscillation;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(irregularity_score(b.family, coordinate_observable(0), blocks, 1024, OmegaStrategy::Adversarial).witness ==
        s.witness);
}

TEST_CASE("irregular point construction") {
  SUBCASE("binary shift") {
    const auto b = preset("binary-shift", 10);
    const auto pt = construct_irregular(b, coordinate_observable(0), 4096);
    CHECK(pt.trace.oscillation >= 0.3);
    CHECK(irregularity_score(b.family, coordinate_observable(0), pt.x, 4096, OmegaStrategy::Fixed, pt.omega).oscillation >= 0.25);
    CHECK(pt.x[0] == 0.0);
    CHECK(pt.x[1] == 1.0);
    CHECK(pt.x[3] == 0.0);
  }
  SUBCASE("interval shift uses the extreme levels") {
    const auto z = preset("interval-shift", 6);
    const auto pt = construct_irregular(z, coordinate_observable(0), 4096);
    for (double v : pt.x) CHECK((v == 0.0 || v == 1.0));
  }
  SUBCASE("refusals") {
    CHECK_THROWS_AS(construct_irregular(preset("binary-shift", 10), constant(2.0), 4096), Error);
    CHECK_THROWS_AS(construct_irregular(preset("circle-expanding", 0, 2), coordinate_observable(0), 4096), Error);
  }
}

TEST_CASE("irregular-set harness") {
  const std::vector<double> eps{0.25, 0.125, 0.0625};
  SUBCASE("binary shift") {
    const auto b = preset("binary-shift", 10);
    const auto rep = theorem5_harness(b, RandomWalkSpec::uniform(1, 0), coordinate_observable(0), eps, {1, 2});
    REQUIRE_FALSE(rep.empty);
    CHECK(std::fabs(rep.umdim_irr) <= 0.1);
    CHECK(std::fabs(rep.mdim_whole) <= 0.1);
    CHECK(rep.inclusion_counterexamples == 0);
    CHECK(rep.holds);
  }
  SUBCASE("constant observable has no irregular points") {
    const auto b = preset("binary-shift", 10);
    const auto rep = theorem5_harness(b, RandomWalkSpec::uniform(1, 0), constant(0.5), eps, {1, 2});
    CHECK(rep.empty);
  }
}
