#include "mmdim/product.hpp"

#include <algorithm>
#include <cmath>

#include "mmdim/error.hpp"

namespace mmdim {

std::size_t line_separated(const std::vector<double>& s, double tau) {
  if (s.empty()) return 0;
  std::size_t c = 1;
  double last = s[0];
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] - last > tau) {
      ++c;
      last = s[i];
    }
  return c;
}

std::size_t line_spanning(const std::vector<double>& s, double tau, bool strict) {
  auto within = [&](double a, double b) { return strict ? std::fabs(a - b) < tau : std::fabs(a - b) <= tau; };
  std::size_t c = 0, i = 0;
  while (i < s.size()) {
    // Rightmost center that still reaches the leftmost uncovered value.
    std::size_t j = i;
    while (j + 1 < s.size() && within(s[j + 1], s[i])) ++j;
    ++c;
    std::size_t k = j;
    while (k < s.size() && within(s[k], s[j])) ++k;
    i = k;
  }
  return c;
}

double shift_weight(std::size_t i, std::size_t n) { return std::ldexp(1.0, -static_cast<int>(i > n ? i - n : 0)); }

ProductShiftTarget::ProductShiftTarget(std::vector<std::vector<double>> coords, std::size_t alphabet)
    : coords_(std::move(coords)), alphabet_(alphabet) {
  require(!coords_.empty(), "product target needs at least one coordinate");
  require(alphabet_ >= 1, "alphabet must be nonempty");
  for (auto& c : coords_) {
    require(!c.empty(), "empty coordinate set");
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
}

double ProductShiftTarget::size() const {
  double s = 1.0;
  for (const auto& c : coords_) s *= static_cast<double>(c.size());
  return s;
}

CountValue ProductShiftTarget::count(const Word& w, double eps, CountKind kind) const {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  for (auto s : w.symbols)
    if (s >= alphabet_) fail(ErrorKind::Parameter, "symbol " + std::to_string(s) + " out of range");
  const std::size_t n = w.size();
  double c = 1.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const double tau = eps / shift_weight(i, n);
    switch (kind) {
      case CountKind::Separated: c *= static_cast<double>(line_separated(coords_[i], tau)); break;
      case CountKind::Spanning: c *= static_cast<double>(line_spanning(coords_[i], tau, false)); break;
      case CountKind::Cover: c *= static_cast<double>(line_spanning(coords_[i], tau, true)); break;
    }
  }
  return {c, true, true};
}

double product_ball_mass(const std::vector<std::vector<double>>& coords, const Point& x, std::size_t n, double eps) {
  require(x.size() == coords.size(), "point depth differs from the product depth");
  double m = 1.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double tau = eps / shift_weight(i, n);
    std::size_t in = 0;
    for (double v : coords[i])
      if (std::fabs(v - x[i]) < tau) ++in;
    m *= static_cast<double>(in) / static_cast<double>(coords[i].size());
  }
  return m;
}

}  // namespace mmdim
