#include "mmdim/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "mmdim/cover.hpp"
#include "mmdim/error.hpp"

namespace mmdim {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "slope needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, "slope needs two distinct abscissae");
  return sxy / sxx;
}

namespace {
std::size_t tail_start(std::size_t n) { return n / 2; }
}  // namespace

double tail_max(const std::vector<double>& v) {
  require(!v.empty(), "empty ladder");
  return *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(tail_start(v.size())), v.end());
}

double tail_min(const std::vector<double>& v) {
  require(!v.empty(), "empty ladder");
  return *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(tail_start(v.size())), v.end());
}

void finish_slope(DimensionReport& report) {
  std::vector<double> x, y, xa, ya;
  for (const auto& s : report.scales) {
    xa.push_back(std::log(1.0 / s.eps));
    ya.push_back(s.value);
    if (!s.resolution_limited) {
      x.push_back(xa.back());
      y.push_back(ya.back());
    }
  }
  if (x.size() >= 2) {
    report.slope = ls_slope(x, y);
  } else if (xa.size() >= 2) {
    report.slope = ls_slope(xa, ya);
  } else {
    report.slope = 0.0;
  }
}

void validate_ladder(const std::vector<double>& eps_ladder, std::size_t min_size, const std::string& field) {
  if (eps_ladder.size() < min_size)
    fail(ErrorKind::Parameter, field + ": needs at least " + std::to_string(min_size) + " scales");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0)) fail(ErrorKind::Parameter, field + ": scales must be positive");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
      fail(ErrorKind::Parameter, field + ": scales must be strictly decreasing");
  }
}

namespace {

double circle_gap(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

}  // namespace

Metric named_metric(const std::string& name) {
  if (name == "euclidean") {
    return {name, [](const Point& a, const Point& b) {
              double s = 0.0;
              for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
              return std::sqrt(s);
            }};
  }
  if (name == "sup") {
    return {name, [](const Point& a, const Point& b) {
              double s = 0.0;
              for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
              return s;
            }};
  }
  if (name == "circle") {
    return {name, [](const Point& a, const Point& b) {
              double s = 0.0;
              for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, circle_gap(a[i], b[i]));
              return s;
            }};
  }
  if (name == "seq-weighted") {
    return {name, [](const Point& a, const Point& b) {
              double s = 0.0, w = 0.5;
              for (std::size_t i = 0; i < a.size(); ++i, w *= 0.5) s += w * std::fabs(a[i] - b[i]);
              return s;
            }};
  }
  if (name == "seq-sup") {
    return {name, [](const Point& a, const Point& b) {
              double s = 0.0, w = 1.0;
              for (std::size_t i = 0; i < a.size() && w > s; ++i, w *= 0.5) s = std::max(s, w * std::fabs(a[i] - b[i]));
              return s;
            }};
  }
  fail(ErrorKind::Parameter, "unknown metric '" + name + "'");
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"euclidean", "sup", "circle", "seq-weighted", "seq-sup"};
  return names;
}

SampledSpace::SampledSpace(std::vector<Point> points, Metric metric, std::optional<double> diameter)
    : points_(std::move(points)), metric_(std::move(metric)) {
  const std::size_t n = points_.size();
  if (n > 0 && n <= 2048) {
    cache_ = std::make_shared<std::vector<double>>(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (*cache_)[i * n + j] = metric_(points_[i], points_[j]);
  }
  if (diameter) {
    diameter_ = *diameter;
  } else {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d = std::max(d, dist(i, j));
    diameter_ = d;
  }
}

double SampledSpace::dist(std::size_t i, std::size_t j) const {
  if (cache_) return (*cache_)[i * points_.size() + j];
  return metric_(points_[i], points_[j]);
}

double SampledSpace::resolution() const {
  if (!resolution_) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) {
        const double d = dist(i, j);
        if (d > 0.0) r = std::min(r, d);
      }
    resolution_ = r;
  }
  return *resolution_;
}

std::optional<std::size_t> SampledSpace::find(const Point& p) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (points_[i] == p) return i;
  return std::nullopt;
}

std::size_t SampledSpace::nearest(const Point& p) const {
  require(!empty(), "nearest point in an empty space");
  std::size_t best = 0;
  double bd = metric_(p, points_[0]);
  for (std::size_t i = 1; i < size(); ++i) {
    const double d = metric_(p, points_[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

MeasureOnSpace::MeasureOnSpace(std::shared_ptr<const SampledSpace> s, std::vector<double> w)
    : space(std::move(s)), weights(std::move(w)) {
  require(space != nullptr, "measure without a space");
  require(weights.size() == space->size(), "one weight per point required");
  double sum = 0.0;
  for (double x : weights) {
    require(x >= 0.0, "weights must be nonnegative");
    sum += x;
  }
  require(std::fabs(sum - 1.0) <= 1e-12, "weights must sum to 1");
}

MeasureOnSpace MeasureOnSpace::uniform(std::shared_ptr<const SampledSpace> s) {
  const std::size_t n = s->size();
  require(n > 0, "empty space");
  return MeasureOnSpace(std::move(s), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double MeasureOnSpace::mass_of(const std::vector<std::size_t>& idx) const {
  double m = 0.0;
  for (auto i : idx) m += weights[i];
  return m;
}

AuditReport metric_audit(const SampledSpace& space, std::size_t triple_budget, std::uint64_t seed) {
  if (space.empty()) fail(ErrorKind::Parameter, "empty space");
  AuditReport rep;
  const std::size_t n = space.size();
  const double tol = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = space.dist(i, i);
    if (d != 0.0) rep.violations.push_back({"identity", i, i, i, d});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = space.dist(i, j), b = space.dist(j, i);
      if (std::fabs(a - b) > tol) rep.violations.push_back({"symmetry", i, j, j, std::fabs(a - b)});
      if (a < 0.0) rep.violations.push_back({"identity", i, j, j, a});
    }
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    const double lhs = space.dist(i, k), rhs = space.dist(i, j) + space.dist(j, k);
    if (lhs > rhs + tol * std::max(1.0, rhs)) rep.violations.push_back({"triangle", i, j, k, lhs - rhs});
    ++rep.triples_checked;
  };
  const double total = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
  if (total <= static_cast<double>(triple_budget)) {
    rep.exhaustive = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) check(i, j, k);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < triple_budget; ++t) check(pick(rng), pick(rng), pick(rng));
  }
  return rep;
}

namespace {
constexpr std::size_t kExhaustiveLimit = 4096;
constexpr std::size_t kNodeBudget = 200000;
}  // namespace

SeparatedCount eps_separated_count(const SampledSpace& space, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  SeparatedCount out;
  if (space.empty()) {
    out.exact = true;
    return out;
  }
  const BitMatrix close = build_relation(space.size(), [&](std::size_t i, std::size_t j) { return space.dist(i, j) <= eps; });
  const auto sel = max_independent(close, space.size() <= kExhaustiveLimit ? kNodeBudget : 0);
  out.count = sel.chosen.size();
  out.witness = sel.chosen;
  out.exact = sel.exact;
  out.upper_bound = sel.exact ? out.count : sel.bound;
  return out;
}

DimensionReport upper_box_dimension(const SampledSpace& space, const std::vector<double>& eps_ladder) {
  validate_ladder(eps_ladder, 3, "eps_ladder");
  require(!space.empty(), "empty space");
  DimensionReport rep;
  const double res = space.size() > 1 ? space.resolution() : 0.0;
  for (double eps : eps_ladder) {
    const auto c = eps_separated_count(space, eps);
    ScaleRecord s;
    s.eps = eps;
    s.value = std::log(static_cast<double>(c.count));
    s.ratio = s.value / std::log(1.0 / eps);
    s.upper = s.lower = s.value;
    s.resolution_limited = space.size() > 1 && eps < res;
    if (s.resolution_limited) rep.flag("resolution-limited");
    if (!c.exact) rep.flag("greedy-used");
    rep.scales.push_back(s);
  }
  finish_slope(rep);
  return rep;
}

HomogeneityResult homogeneity_constant(const MeasureOnSpace& mu, const std::vector<double>& eps_ladder,
                                       std::size_t pair_budget, std::uint64_t seed) {
  require(mu.space != nullptr, "measure without a space");
  for (double e : eps_ladder) require(e > 0.0, "ladder scales must be positive");
  const SampledSpace& sp = *mu.space;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < sp.size(); ++i)
    if (mu.weights[i] > 0.0) support.push_back(i);
  auto ball = [&](std::size_t c, double r) {
    double m = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i)
      if (sp.dist(c, i) < r) m += mu.weights[i];
    return m;
  };
  HomogeneityResult res;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const double total = static_cast<double>(support.size()) * static_cast<double>(support.size());
  if (total <= static_cast<double>(pair_budget)) {
    for (auto a : support)
      for (auto b : support) pairs.emplace_back(a, b);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
    for (std::size_t t = 0; t < pair_budget; ++t) pairs.emplace_back(support[pick(rng)], support[pick(rng)]);
  }
  for (double e : eps_ladder) {
    std::vector<double> big(sp.size(), -1.0), small(sp.size(), -1.0);
    for (auto [a, b] : pairs) {
      if (big[a] < 0.0) big[a] = ball(a, e);
      if (small[b] < 0.0) small[b] = ball(b, e / 2.0);
      if (small[b] <= 0.0) {
        res.failures.emplace_back(a, b);
        continue;
      }
      const double r = big[a] / small[b];
      if (r > res.L) {
        res.L = r;
        res.y1 = a;
        res.y2 = b;
        res.eps = e;
      }
    }
  }
  return res;
}

SampledSpace load_space_csv(const std::string& path, const std::string& metric_name) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open point file '" + path + "'");
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0, dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    Point p;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        p.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        fail(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": not a number '" + cell + "'");
      }
    }
    if (dim == 0) dim = p.size();
    if (p.size() != dim) fail(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": column count differs");
    pts.push_back(std::move(p));
  }
  if (pts.empty()) fail(ErrorKind::Config, path + ": no points");
  return SampledSpace(std::move(pts), named_metric(metric_name));
}

}  // namespace mmdim
