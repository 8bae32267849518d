#include "mmdim/zoo.hpp"

#include <cmath>

#include "mmdim/error.hpp"

namespace mmdim {

namespace {

constexpr std::size_t kMaterializeLimit = 4096;

double frac(double v) { return v - std::floor(v); }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"identity", "binary-shift", "interval-shift", "circle-expanding",
                                              "rotation-pair"};
  return names;
}

std::vector<double> interval_levels(std::size_t g) {
  require(g >= 2, "interval grid needs at least two levels");
  std::vector<double> v(g);
  for (std::size_t k = 0; k < g; ++k) v[k] = static_cast<double>(k) / static_cast<double>(g - 1);
  return v;
}

std::vector<Point> circle_grid(std::size_t n) {
  require(n >= 1, "grid needs at least one point");
  std::vector<Point> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = {static_cast<double>(k) / static_cast<double>(n)};
  return pts;
}

std::vector<Point> sequence_grid(const std::vector<double>& values, std::size_t depth) {
  const std::size_t total = word_count(values.size(), depth);
  require(total <= (std::size_t{1} << 22), "sequence grid too large to materialize");
  std::vector<Point> pts;
  pts.reserve(total);
  std::vector<std::size_t> digit(depth, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Point p(depth);
    for (std::size_t j = 0; j < depth; ++j) p[j] = values[digit[j]];
    pts.push_back(std::move(p));
    for (std::size_t j = depth; j-- > 0;) {
      if (++digit[j] < values.size()) break;
      digit[j] = 0;
    }
  }
  return pts;
}

Point shift_point(const Point& x) {
  if (x.empty()) return x;
  Point y(x.begin() + 1, x.end());
  y.push_back(0.0);
  return y;
}

std::shared_ptr<const SampledSpace> symbol_space(std::size_t k) {
  require(k >= 1, "alphabet must be nonempty");
  std::vector<Point> ys(k);
  for (std::size_t i = 0; i < k; ++i) ys[i] = {k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1)};
  return std::make_shared<SampledSpace>(std::move(ys), named_metric("euclidean"));
}

ZooSystem instantiate(const std::string& name, const PresetParams& params) {
  ZooSystem z;
  z.name = name;
  z.params = params;
  auto uniform_measure = [&]() {
    z.mu = MeasureOnSpace::uniform(z.sys->phase_ptr());
    z.mass = std::make_shared<SampledMass>(z.sys, *z.mu);
    z.whole = SampledTarget::whole(z.sys);
  };

  if (name == "identity") {
    require(params.grid >= 1, "identity: grid must be >= 1");
    const std::size_t a = std::max<std::size_t>(params.alphabet, 2);
    z.family = {a, [](std::size_t, const Point& x) { return x; }, named_metric("circle")};
    auto X = std::make_shared<SampledSpace>(circle_grid(params.grid), z.family.metric);
    z.sys = std::make_shared<SemigroupSystem>(X, symbol_space(a), z.family.gen, false);
    uniform_measure();
    return z;
  }
  if (name == "circle-expanding" || name == "rotation-pair") {
    require(params.grid >= 2, name + ": grid must be >= 2");
    Generator gen;
    if (name == "circle-expanding") {
      gen = [](std::size_t y, const Point& x) { return Point{frac((y == 0 ? 2.0 : 3.0) * x[0])}; };
    } else {
      const double a = static_cast<double>(params.rotation_a) / static_cast<double>(params.grid);
      const double b = static_cast<double>(params.rotation_b) / static_cast<double>(params.grid);
      gen = [a, b](std::size_t y, const Point& x) { return Point{frac(x[0] + (y == 0 ? a : b))}; };
    }
    z.family = {2, gen, named_metric("circle")};
    auto X = std::make_shared<SampledSpace>(circle_grid(params.grid), z.family.metric);
    z.sys = std::make_shared<SemigroupSystem>(X, symbol_space(2), gen, true);
    uniform_measure();
    return z;
  }
  if (name == "binary-shift" || name == "interval-shift") {
    const bool binary = name == "binary-shift";
    require(params.depth >= 1, name + ": depth must be >= 1");
    require(params.alphabet >= 1, name + ": alphabet must be >= 1");
    const std::vector<double> values = binary ? std::vector<double>{0.0, 1.0} : interval_levels(params.levels);
    z.symbolic = true;
    z.coords.assign(params.depth, values);
    z.family = {params.alphabet, [](std::size_t, const Point& x) { return shift_point(x); },
                named_metric(binary ? "seq-weighted" : "seq-sup")};
    const std::size_t total = word_count(values.size(), params.depth);
    if (total <= kMaterializeLimit) {
      auto X = std::make_shared<SampledSpace>(sequence_grid(values, params.depth), z.family.metric);
      z.sys = std::make_shared<SemigroupSystem>(X, symbol_space(params.alphabet), z.family.gen, false);
    } else if (binary) {
      fail(ErrorKind::Parameter, "binary-shift: depth " + std::to_string(params.depth) + " exceeds the sample limit");
    }
    if (binary) {
      uniform_measure();
    } else {
      z.whole = std::make_shared<ProductShiftTarget>(z.coords, params.alphabet);
      z.mass = std::make_shared<ProductMass>(z.coords, params.alphabet);
      if (z.sys) z.mu = MeasureOnSpace::uniform(z.sys->phase_ptr());
    }
    return z;
  }
  fail(ErrorKind::NotFound, "unknown preset '" + name + "'");
}

}  // namespace mmdim
