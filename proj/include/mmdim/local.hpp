#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mmdim/mdim.hpp"
#include "mmdim/product.hpp"

namespace mmdim {

/// Weight of the sampled points inside B_w(x, eps).
double ball_mass(const MeasureOnSpace& mu, const SemigroupSystem& sys, const Word& w, const Point& x, double eps);

/// Anything that can report mu(B_w(x, eps)).
class MassModel {
 public:
  virtual ~MassModel() = default;
  virtual std::size_t alphabet() const = 0;
  virtual bool word_independent() const = 0;
  virtual double mass(const Word& w, const Point& x, double eps) const = 0;
};

class SampledMass : public MassModel {
 public:
  SampledMass(std::shared_ptr<const SemigroupSystem> sys, MeasureOnSpace mu);
  std::size_t alphabet() const override { return sys_->alphabet(); }
  bool word_independent() const override { return word_independent_; }
  double mass(const Word& w, const Point& x, double eps) const override;
  const MeasureOnSpace& measure() const { return mu_; }

 private:
  std::shared_ptr<const SemigroupSystem> sys_;
  MeasureOnSpace mu_;
  std::map<Point, std::size_t> index_;
  bool word_independent_ = false;
};

/// Uniform product measure on the coordinate sets of a product shift.
class ProductMass : public MassModel {
 public:
  explicit ProductMass(std::vector<std::vector<double>> coords, std::size_t alphabet = 1);
  std::size_t alphabet() const override { return alphabet_; }
  bool word_independent() const override { return true; }
  double mass(const Word& w, const Point& x, double eps) const override;

 private:
  std::vector<std::vector<double>> coords_;
  std::size_t alphabet_;
};

enum class LocalKind { Plus, Minus };  // inf over words / sup over words
enum class WordMode { Exhaustive, Adversarial };

struct LocalEntropyEstimate {
  Point x;
  double eps = 0.0;
  std::vector<std::size_t> ladder;
  std::vector<double> masses;  // extremal mass per n
  std::vector<Word> witnesses;
  std::vector<double> values;  // -(1/n) log(mass_n / mass_0)
  double base_mass = 0.0;
  double estimate = 0.0;       // tail-min (liminf)
  double upper = 0.0;          // tail-max
  LocalKind kind = LocalKind::Plus;
  bool exhaustive = true;
};

/// Extremal ball masses over words of each ladder length. Exhaustive when
/// alphabet^n fits the budget, otherwise a width-8 beam search that extends
/// the best words one symbol at a time (flagged by exhaustive = false).
LocalEntropyEstimate local_entropy(const MassModel& model, const Point& x, double eps,
                                   const std::vector<std::size_t>& n_ladder, LocalKind kind, WordMode mode,
                                   std::uint64_t seed = 0, std::size_t word_budget = 4096);

/// Upper: L+ entropies; lower: L- entropies; both as liminf estimates per
/// eps, sloped against log(1/eps).
DimensionReport local_mdim(const MassModel& model, const Point& x, const std::vector<double>& eps_ladder,
                           const std::vector<std::size_t>& n_ladder, Variant variant, WordMode mode = WordMode::Exhaustive,
                           std::uint64_t seed = 0);

struct Theorem1Report {
  double s_minus = 0.0;  // min lower local dimension over Z
  double s_plus = 0.0;   // max upper local dimension over Z
  double cp = 0.0;       // critical-exponent dimension of Z
  double mass_of_Z = 0.0;
  bool lower_checked = false;
  bool holds = false;
  double tol = 0.2;
  std::vector<std::string> flags;
};

/// Local dimensions at the sampled points of Z against the CP dimension of Z.
Theorem1Report theorem1_harness(const MassModel& model, const std::vector<Point>& Z_points, double mass_of_Z,
                                const CountTarget& target, const RandomWalkSpec& walk,
                                const std::vector<double>& eps_ladder, const std::vector<std::size_t>& n_ladder,
                                const std::vector<std::size_t>& N_ladder, double tol = 0.2, const CPOptions& opts = {});

}  // namespace mmdim
