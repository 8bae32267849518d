#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmdim/report.hpp"

namespace mmdim {

using Point = std::vector<double>;
using DistFn = std::function<double(const Point&, const Point&)>;

struct Metric {
  std::string name;
  DistFn fn;
  double operator()(const Point& a, const Point& b) const { return fn(a, b); }
};

/// "euclidean", "sup", "circle" (sup of per-coordinate circle distances on
/// R/Z), "seq-weighted" (sum_j 2^-(j+1) |a_j - b_j|, coordinates 0-based) and
/// "seq-sup" (max_j 2^-j |a_j - b_j|).
Metric named_metric(const std::string& name);
const std::vector<std::string>& metric_names();

/// Finite point set with a metric. Distances between sampled points can be
/// cached in a dense matrix for small spaces.
class SampledSpace {
 public:
  SampledSpace() = default;
  SampledSpace(std::vector<Point> points, Metric metric,
               std::optional<double> diameter = std::nullopt);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  const Metric& metric() const { return metric_; }
  double diameter() const { return diameter_; }

  double dist(std::size_t i, std::size_t j) const;
  double dist(const Point& a, const Point& b) const { return metric_(a, b); }

  /// Smallest positive pairwise distance (the sample resolution).
  double resolution() const;
  /// Index of a sampled point equal to p, if any.
  std::optional<std::size_t> find(const Point& p) const;
  /// Index of the nearest sampled point (lowest index on ties).
  std::size_t nearest(const Point& p) const;

 private:
  std::vector<Point> points_;
  Metric metric_;
  double diameter_ = 0.0;
  std::shared_ptr<std::vector<double>> cache_;
  mutable std::optional<double> resolution_;
};

/// Weights on the points of a sampled space.
struct MeasureOnSpace {
  std::shared_ptr<const SampledSpace> space;
  std::vector<double> weights;

  MeasureOnSpace() = default;
  MeasureOnSpace(std::shared_ptr<const SampledSpace> s, std::vector<double> w);
  static MeasureOnSpace uniform(std::shared_ptr<const SampledSpace> s);
  double mass_of(const std::vector<std::size_t>& idx) const;
};

struct MetricViolation {
  std::string kind;  // "identity", "symmetry", "triangle"
  std::size_t i = 0, j = 0, k = 0;
  double amount = 0.0;
};

struct AuditReport {
  std::vector<MetricViolation> violations;
  std::size_t triples_checked = 0;
  bool exhaustive = false;
  bool clean() const { return violations.empty(); }
};

/// Checks identity and symmetry on all points/pairs and the triangle
/// inequality on up to `triple_budget` triples (all of them when they fit,
/// otherwise a seeded sample).
AuditReport metric_audit(const SampledSpace& space, std::size_t triple_budget,
                         std::uint64_t seed = 0);

struct SeparatedCount {
  std::size_t count = 0;
  std::vector<std::size_t> witness;
  bool exact = false;
  std::size_t upper_bound = 0;
};

/// Maximum cardinality of a subset with pairwise distance > eps.
SeparatedCount eps_separated_count(const SampledSpace& space, double eps);

DimensionReport upper_box_dimension(const SampledSpace& space, const std::vector<double>& eps_ladder);

struct HomogeneityResult {
  double L = 0.0;
  std::size_t y1 = 0, y2 = 0;
  double eps = 0.0;
  /// Pairs whose small ball has zero mass (ratio undefined).
  std::vector<std::pair<std::size_t, std::size_t>> failures;
};

/// Empirical homogeneity constant: the max of mu(B(y1, e)) / mu(B(y2, e/2))
/// over ladder scales e and support pairs (open balls).
HomogeneityResult homogeneity_constant(const MeasureOnSpace& mu, const std::vector<double>& eps_ladder,
                                       std::size_t pair_budget, std::uint64_t seed = 0);

/// Reads one point per row, coordinates as comma-separated columns. Blank
/// lines and lines starting with '#' are skipped.
SampledSpace load_space_csv(const std::string& path, const std::string& metric_name);

void validate_ladder(const std::vector<double>& eps_ladder, std::size_t min_size, const std::string& field);

}  // namespace mmdim
