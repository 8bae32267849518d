#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mmdim/metric.hpp"

namespace mmdim {

/// Finite word over the generator alphabet. symbols[0] is i_1.
struct Word {
  std::vector<std::uint32_t> symbols;

  Word() = default;
  explicit Word(std::vector<std::uint32_t> s) : symbols(std::move(s)) {}
  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  std::uint32_t operator[](std::size_t i) const { return symbols[i]; }
  bool operator==(const Word& o) const = default;
  auto operator<=>(const Word& o) const = default;

  /// Digits '0'-'9' then 'a'-'z'; the empty word is "".
  std::string to_string() const;
  static Word parse(const std::string& s);
};

Word reverse(const Word& w);
/// Symbols a..b, 1-indexed and inclusive. slice(w, a, a-1) is the empty word.
Word slice(const Word& w, std::size_t a, std::size_t b);
/// left·right; right is the right factor of the result.
Word concat(const Word& left, const Word& right);
bool is_right_factor(const Word& factor, const Word& w);
bool is_prefix(const Word& prefix, const Word& w);
/// All words of length n in lexicographic order (budget-checked by callers).
std::vector<Word> all_words(std::size_t alphabet, std::size_t n);
/// alphabet^n, saturating at SIZE_MAX.
std::size_t word_count(std::size_t alphabet, std::size_t n);

using Generator = std::function<Point(std::size_t, const Point&)>;

/// Phase sample X, parameter sample Y and the generators f_y. The image of
/// every sampled point is tabulated once; when `snap` is set, images that
/// leave the sample move to the nearest sampled point and the largest such
/// displacement is kept as snap_error().
class SemigroupSystem {
 public:
  SemigroupSystem(std::shared_ptr<const SampledSpace> phase, std::shared_ptr<const SampledSpace> params,
                  Generator gen, bool snap);

  const SampledSpace& phase() const { return *phase_; }
  const SampledSpace& params() const { return *params_; }
  std::shared_ptr<const SampledSpace> phase_ptr() const { return phase_; }
  std::shared_ptr<const SampledSpace> params_ptr() const { return params_; }
  std::size_t alphabet() const { return params_->size(); }
  bool snap() const { return snap_; }
  double snap_error() const { return snap_error_; }
  /// True when every tabulated image was already a sampled point.
  bool closed() const { return snap_error_ == 0.0; }

  /// f_y(x) for an arbitrary point (snapped to the sample when enabled).
  Point step(std::size_t y, const Point& x) const;
  /// Index of f_y(x_i).
  std::size_t step_index(std::size_t y, std::size_t i) const { return table_[y * phase_->size() + i]; }
  const Generator& generator() const { return gen_; }

 private:
  std::shared_ptr<const SampledSpace> phase_;
  std::shared_ptr<const SampledSpace> params_;
  Generator gen_;
  bool snap_ = false;
  double snap_error_ = 0.0;
  std::vector<std::size_t> table_;
};

void check_word(const SemigroupSystem& sys, const Word& w);

/// f_w(x) = f_{i_1}(f_{i_2}(...f_{i_k}(x))): the rightmost symbol acts first.
Point apply_word(const SemigroupSystem& sys, const Word& w, const Point& x);
std::size_t apply_word_index(const SemigroupSystem& sys, const Word& w, std::size_t i);

/// Forward orbit x, f_{i_1}x, f_{i_2}f_{i_1}x, ... (|w|+1 points), i_1 first.
std::vector<std::size_t> orbit_indices(const SemigroupSystem& sys, const Word& w, std::size_t i);
std::vector<Point> orbit(const SemigroupSystem& sys, const Word& w, const Point& x);

/// d_w: max of d over the |w|+1 orbit times.
double bowen_distance(const SemigroupSystem& sys, const Word& w, const Point& x1, const Point& x2);
double bowen_distance(const SemigroupSystem& sys, const Word& w, std::size_t i, std::size_t j);

/// d_w(center, x) < delta.
bool bowen_ball_contains(const SemigroupSystem& sys, const Word& w, const Point& center, double delta,
                         const Point& x);

/// d(f_u(center), f_u(x)) < eps for every word u with |u| <= n. Throws a
/// budget error naming the required word count when it exceeds `budget`.
bool glw_ball_contains(const SemigroupSystem& sys, std::size_t n, const Point& center, double eps,
                       const Point& x, std::size_t budget = 1000000);

}  // namespace mmdim
