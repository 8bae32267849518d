#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmdim/local.hpp"
#include "mmdim/product.hpp"

namespace mmdim {

struct PresetParams {
  std::size_t depth = 10;      // binary-shift, interval-shift
  std::size_t levels = 16;     // interval-shift coordinate grid
  std::size_t grid = 256;      // circle-expanding, rotation-pair, identity
  std::size_t alphabet = 1;    // shifts: number of identical generators
  std::size_t rotation_a = 1;  // rotation-pair: steps of 1/grid
  std::size_t rotation_b = 5;
};

/// Generators acting on arbitrary points (not just the sample): used for long
/// symbolic points and refined grids.
struct MapFamily {
  std::size_t alphabet = 1;
  Generator gen;
  Metric metric;
  Point apply(std::size_t y, const Point& x) const { return gen(y, x); }
};

struct ZooSystem {
  std::string name;
  PresetParams params;
  MapFamily family;
  /// Materialized system; null when the sample would be too large.
  std::shared_ptr<const SemigroupSystem> sys;
  /// Counts on the whole phase (materialized or analytic).
  std::shared_ptr<const CountTarget> whole;
  /// Natural measure (uniform grid / Bernoulli(1/2) cylinders).
  std::shared_ptr<const MassModel> mass;
  std::optional<MeasureOnSpace> mu;
  /// Coordinate sets for the shift presets (empty otherwise).
  std::vector<std::vector<double>> coords;
  bool symbolic = false;
};

const std::vector<std::string>& preset_names();

/// "identity", "binary-shift", "interval-shift", "circle-expanding",
/// "rotation-pair".
ZooSystem instantiate(const std::string& name, const PresetParams& params = {});

/// Evenly spaced levels k/(g-1), k = 0..g-1.
std::vector<double> interval_levels(std::size_t g);
/// Grid points k/n on [0, 1) as one-coordinate points.
std::vector<Point> circle_grid(std::size_t n);
/// All sequences over `values` of length `depth`, lexicographic.
std::vector<Point> sequence_grid(const std::vector<double>& values, std::size_t depth);
/// Shift with filler 0 on sequences of any length.
Point shift_point(const Point& x);
/// Parameter sample {0, 1/(k-1), ..., 1} (or {0} when k = 1).
std::shared_ptr<const SampledSpace> symbol_space(std::size_t k);

}  // namespace mmdim
