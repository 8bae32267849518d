#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mmdim/error.hpp"
#include "mmdim/metric.hpp"
#include "oracles.hpp"

using namespace mmdim;

namespace {

SampledSpace line(std::vector<double> xs, const std::string& metric = "euclidean") {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back({x});
  return SampledSpace(pts, named_metric(metric));
}

std::size_t brute_separated(const SampledSpace& s, double eps) {
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << s.size()); ++mask) {
    bool ok = true;
    for (std::size_t a = 0; a < s.size() && ok; ++a)
      for (std::size_t b = a + 1; b < s.size() && ok; ++b)
        if ((mask >> a & 1u) && (mask >> b & 1u)) ok = s.dist(a, b) > eps;
    if (ok) best = std::max<std::size_t>(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace

TEST_CASE("named metrics") {
  const Point a{0.1, 0.9}, b{0.8, 0.2};
  CHECK(named_metric("euclidean")(a, b) == doctest::Approx(std::sqrt(0.49 + 0.49)));
  CHECK(named_metric("sup")(a, b) == doctest::Approx(0.7));
  CHECK(named_metric("circle")(a, b) == doctest::Approx(0.3));
  CHECK(named_metric("seq-weighted")(Point{1, 0, 1}, Point{0, 0, 0}) == doctest::Approx(0.5 + 0.125));
  CHECK(named_metric("seq-sup")(Point{0, 0, 1}, Point{0, 0.5, 0}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(named_metric("taxicab"), Error);
}

TEST_CASE("metric audit") {
  SUBCASE("absolute value on three points") {
    const auto rep = metric_audit(line({0.0, 0.3, 0.6}), 1000);
    CHECK(rep.clean());
    CHECK(rep.exhaustive);
  }
  SUBCASE("circle distance on quarter points") {
    CHECK(metric_audit(line({0.0, 0.25, 0.5, 0.75}, "circle"), 1000).clean());
  }
  SUBCASE("asymmetric distance is reported") {
    Metric m{"lopsided", [](const Point& p, const Point& q) {
               if (p == q) return 0.0;
               return p[0] < q[0] ? 1.0 : 2.0;
             }};
    const auto rep = metric_audit(SampledSpace({{0.0}, {1.0}}, m), 1000);
    REQUIRE_FALSE(rep.clean());
    CHECK(rep.violations.front().kind == "symmetry");
  }
  SUBCASE("triangle violation is reported") {
    Metric m{"squared", [](const Point& p, const Point& q) { return (p[0] - q[0]) * (p[0] - q[0]); }};
    const auto rep = metric_audit(SampledSpace({{0.0}, {0.5}, {1.0}}, m), 1000);
    bool triangle = false;
    for (const auto& v : rep.violations) triangle = triangle || v.kind == "triangle";
    CHECK(triangle);
  }
}

TEST_CASE("separated counts") {
  CHECK(eps_separated_count(line({0.0, 0.3, 0.6}), 0.25).count == 3);
  CHECK(eps_separated_count(line({0.0, 0.3, 0.6}), 0.35).count == 2);
  CHECK(eps_separated_count(line({0.42}), 0.01).count == 1);

  // Exact counts agree with subset enumeration on random samples.
  for (std::uint64_t k = 0; k < 40; ++k) {
    std::vector<Point> pts;
    const std::size_t n = 2 + oracle::draw(3, k, 0, 10);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({counter_uniform(3, k, i + 1), counter_uniform(4, k, i + 1)});
    const SampledSpace s(pts, named_metric(k % 2 ? "sup" : "euclidean"));
    const double eps = 0.05 + 0.4 * counter_uniform(5, k, 0);
    const auto c = eps_separated_count(s, eps);
    REQUIRE(c.exact);
    CHECK(c.count == brute_separated(s, eps));
    for (std::size_t a = 0; a < c.witness.size(); ++a)
      for (std::size_t b = a + 1; b < c.witness.size(); ++b) CHECK(s.dist(c.witness[a], c.witness[b]) > eps);
  }
}

TEST_CASE("upper box dimension") {
  SUBCASE("two points") {
    CHECK(upper_box_dimension(line({0.0, 1.0}), {0.25, 0.125, 0.0625}).slope == 0.0);
  }
  SUBCASE("unit interval grid") {
    std::vector<double> xs;
    for (int k = 0; k < 1024; ++k) xs.push_back(k / 1023.0);
    const auto rep = upper_box_dimension(line(xs), {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128});
    CHECK(rep.slope == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("unit square grid, sup metric") {
    std::vector<Point> pts;
    for (int a = 0; a < 64; ++a)
      for (int b = 0; b < 64; ++b) pts.push_back({a / 63.0, b / 63.0});
    const auto rep = upper_box_dimension(SampledSpace(pts, named_metric("sup")), {1.0 / 8, 1.0 / 16, 1.0 / 32});
    CHECK(std::fabs(rep.slope - 2.0) <= 0.1);
  }
  SUBCASE("ladder must decrease") {
    CHECK_THROWS_AS(upper_box_dimension(line({0.0, 1.0}), {0.1, 0.2, 0.05}), Error);
  }
}

TEST_CASE("homogeneity constant") {
  auto two = std::make_shared<SampledSpace>(line({0.0, 1.0}));
  SUBCASE("uniform on two points") {
    CHECK(homogeneity_constant(MeasureOnSpace::uniform(two), {0.5, 0.25}, 100).L == doctest::Approx(1.0));
  }
  SUBCASE("lopsided weights") {
    const auto res = homogeneity_constant(MeasureOnSpace(two, {0.99, 0.01}), {0.6}, 100);
    CHECK(res.L == doctest::Approx(99.0));
  }
  SUBCASE("uniform grid") {
    std::vector<double> xs;
    for (int k = 0; k < 1024; ++k) xs.push_back(k / 1023.0);
    auto grid = std::make_shared<SampledSpace>(line(xs));
    const auto res = homogeneity_constant(MeasureOnSpace::uniform(grid), {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}, 10000);
    CHECK(res.L <= 5.0);
    CHECK(res.L >= 1.0);
  }
}

TEST_CASE("points from csv") {
  const std::string path = "test_metric_points.csv";
  {
    std::ofstream f(path);
    f << "# x, y\n0, 0\n\n1, 0.5\n";
  }
  const auto s = load_space_csv(path, "sup");
  std::remove(path.c_str());
  REQUIRE(s.size() == 2);
  CHECK(s.dist(0, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(load_space_csv("missing-file.csv", "sup"), Error);
}
