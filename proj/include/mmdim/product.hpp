#pragma once

#include <cstddef>
#include <vector>

#include "mmdim/counting.hpp"

namespace mmdim {

/// Largest subset of the sorted values `s` with consecutive gaps > tau.
std::size_t line_separated(const std::vector<double>& s, double tau);
/// Fewest centers from `s` whose tau-balls cover `s` (closed, or open when
/// `strict`).
std::size_t line_spanning(const std::vector<double>& s, double tau, bool strict);

/// Weight of coordinate i in the Bowen metric of n shifts under the seq-sup
/// metric: max over t <= min(n, i) of 2^-(i - t).
double shift_weight(std::size_t i, std::size_t n);

/// Shift on a product of finite coordinate sets S_0 x ... x S_{D-1} with the
/// seq-sup metric and filler 0. Closeness under d_n factors coordinatewise
/// (|a_i - b_i| <= eps / C_i(n)), so the close graph is a strong product of
/// interval graphs; separated, spanning and open-cover counts are then
/// products of one-dimensional counts and exact.
class ProductShiftTarget : public CountTarget {
 public:
  explicit ProductShiftTarget(std::vector<std::vector<double>> coords, std::size_t alphabet = 1);

  std::size_t alphabet() const override { return alphabet_; }
  bool word_independent() const override { return true; }
  CountValue count(const Word& w, double eps, CountKind kind) const override;
  double size() const override;

  std::size_t depth() const { return coords_.size(); }
  const std::vector<std::vector<double>>& coords() const { return coords_; }

 private:
  std::vector<std::vector<double>> coords_;
  std::size_t alphabet_;
};

/// Mass of the open ball B_n(x, eps) under the uniform product measure on
/// `coords`.
double product_ball_mass(const std::vector<std::vector<double>>& coords, const Point& x, std::size_t n, double eps);

}  // namespace mmdim
