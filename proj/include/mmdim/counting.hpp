#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "mmdim/semigroup.hpp"

namespace mmdim {

/// Separated: pairwise d_w > eps. Spanning: closed cover, d_w <= eps.
/// Cover: open Bowen balls, d_w < eps, centers in the target.
enum class CountKind { Separated, Spanning, Cover };
/// Exact throws a budget error when exactness cannot be certified; Greedy
/// never searches; Auto certifies when it can and flags otherwise.
enum class CountMode { Exact, Greedy, Auto };

const char* kind_name(CountKind k);

struct CountResult {
  std::size_t count = 0;
  std::vector<std::size_t> witness;  // indices into the phase sample
  bool exact = false;
  std::size_t bound = 0;  // certified upper (separated) or lower (spanning) bound
  bool certified = false;  // see SelectResult::certified
};

inline constexpr std::size_t kSeparatedExactLimit = 4096;
inline constexpr std::size_t kSpanningExactLimit = 24;
inline constexpr std::size_t kSeparatedNodeBudget = 200000;

CountResult max_separated(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                          CountMode mode);
CountResult min_spanning(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                         CountMode mode);
/// Fewest open balls B_w(z, eps), z in Z, covering Z.
CountResult min_open_cover(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                           CountMode mode);

struct SandwichReport {
  std::size_t r = 0, s = 0, r_half = 0;
  bool holds = false;
};
/// r(w, eps) <= s(w, eps) <= r(w, eps/2) with exact counts.
SandwichReport sandwich_check(const SemigroupSystem& sys, const Word& w, double eps,
                              const std::vector<std::size_t>& Z);

struct BowenBall {
  Word w;
  std::size_t center = 0;
  double eps = 0.0;
};

/// Sampled members of B_w(center, radius).
std::vector<std::size_t> ball_members(const SemigroupSystem& sys, const Word& w, std::size_t center, double radius);

/// Pairwise-disjoint subfamily, chosen greedily with shorter words (larger
/// balls) first and input order among equal lengths.
std::vector<std::size_t> disjoint_subfamily(const SemigroupSystem& sys, const std::vector<BowenBall>& balls);

struct SubfamilyCheck {
  bool disjoint = false;
  bool covers = false;
  std::vector<std::size_t> uncovered;  // sampled points of the union missed by the 3eps dilations
};
SubfamilyCheck verify_subfamily(const SemigroupSystem& sys, const std::vector<BowenBall>& balls,
                                const std::vector<std::size_t>& chosen);

struct CountValue {
  double count = 0.0;
  bool exact = false;
  bool certified = false;
};

/// Something whose separated/spanning/cover counts can be queried per word.
/// Materialized samples, analytic product shifts and factored skew products
/// all implement it, so the estimators never care which one they hold.
class CountTarget {
 public:
  virtual ~CountTarget() = default;
  virtual std::size_t alphabet() const = 0;
  /// True when every word of a given length yields the same counts.
  virtual bool word_independent() const = 0;
  virtual CountValue count(const Word& w, double eps, CountKind kind) const = 0;
  /// Number of target points.
  virtual double size() const = 0;
  /// Number of points in the ambient sample (bounds every critical exponent).
  virtual double sample_size() const { return size(); }
};

/// Target Z given as indices into the phase sample of a system.
class SampledTarget : public CountTarget {
 public:
  SampledTarget(std::shared_ptr<const SemigroupSystem> sys, std::vector<std::size_t> Z,
                CountMode mode = CountMode::Auto);
  static std::shared_ptr<SampledTarget> whole(std::shared_ptr<const SemigroupSystem> sys,
                                              CountMode mode = CountMode::Auto);

  std::size_t alphabet() const override { return sys_->alphabet(); }
  bool word_independent() const override { return word_independent_; }
  CountValue count(const Word& w, double eps, CountKind kind) const override;
  double size() const override { return static_cast<double>(Z_.size()); }
  double sample_size() const override { return static_cast<double>(sys_->phase().size()); }

  const SemigroupSystem& system() const { return *sys_; }
  std::shared_ptr<const SemigroupSystem> system_ptr() const { return sys_; }
  const std::vector<std::size_t>& points() const { return Z_; }

 private:
  std::shared_ptr<const SemigroupSystem> sys_;
  std::vector<std::size_t> Z_;
  CountMode mode_;
  bool word_independent_ = false;
  mutable std::mutex mu_;
  mutable std::map<std::tuple<Word, double, int>, CountValue> cache_;
};

}  // namespace mmdim
