#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mmdim/zoo.hpp"

namespace mmdim {

/// Vector-valued observable on phase points.
using Observable = std::function<std::vector<double>(const Point&)>;

/// Observable reading coordinate `k` of a point.
Observable coordinate_observable(std::size_t k = 0);

struct ObservableTrace {
  Point x;
  Word omega;
  /// partials[n-1] = (1/n) sum_{j<n} phi(f_{omega|[1,j]} x), one vector per n.
  std::vector<std::vector<double>> partials;
  /// Largest per-component (max - min) over the trailing half of partials.
  double oscillation = 0.0;
};

/// Partial Birkhoff averages for n = 1..N along omega (the j = 0 term is
/// phi(x)). Needs |omega| >= N - 1.
ObservableTrace birkhoff_trace(const MapFamily& family, const Observable& phi, const Point& x, const Word& omega,
                               std::size_t N);

/// Tail oscillation of a trace's partials.
double trace_oscillation(const std::vector<std::vector<double>>& partials);

enum class OmegaStrategy { Fixed, Adversarial };

struct IrregularityScore {
  double oscillation = 0.0;
  Word witness;
  /// (n, best oscillation of the first n partials) at each checkpoint.
  std::vector<std::pair<std::size_t, double>> checkpoints;
};

/// Fixed: the oscillation of the trace along `omega`. Adversarial: tries the
/// constant words and a word that alternately pushes the first component of
/// phi up and down in doubling phases; keeps the largest oscillation seen at
/// any checkpoint 2^k with 64 <= 2^k <= N (or N alone when N < 64), so the
/// score never drops as N grows. A lower bound on the sup over omega.
IrregularityScore irregularity_score(const MapFamily& family, const Observable& phi, const Point& x, std::size_t N,
                                     OmegaStrategy strategy, const Word& omega = {});

struct IrregularPoint {
  Point x;
  Word omega;
  ObservableTrace trace;
};

/// Doubling-block point for a symbolic zoo system: coordinate i takes the
/// lowest level when floor(log2(i + 1)) is even and the highest otherwise.
/// Running averages of the first coordinate swing between about 1/3 and 2/3
/// of the range. Throws Unsupported for non-symbolic systems and when phi
/// does not oscillate along the constructed orbit.
IrregularPoint construct_irregular(const ZooSystem& zoo, const Observable& phi, std::size_t N = 4096);

/// The doubling-block sequence itself, `length` coordinates, blocks offset by
/// `phase` positions.
Point block_sequence(double low, double high, std::size_t length, std::size_t phase = 0);

struct Theorem5Options {
  std::size_t horizon = 4096;      // N for the irregularity scores
  double threshold = 0.0;          // <= 0 selects 0.1 * range(phi)
  double tol = 0.2;
  std::size_t random_tails = 4;    // seeded iid tails (typically regular)
  std::size_t head_length = 0;     // 0 selects the default for the system
  std::uint64_t seed = 0;
  AverageBudget budget;
};

struct Theorem5Report {
  bool empty = false;       // no irregular point at this resolution; nothing asserted
  bool holds = false;
  double umdim_irr = 0.0;
  double mdim_whole = 0.0;
  double gap = 0.0;
  double threshold = 0.0;
  double margin = 0.0;      // head perturbation bound on the oscillation
  std::size_t head_length = 0;
  std::size_t tails_tested = 0;
  std::size_t tails_irregular = 0;
  std::size_t z_irr_size = 0;
  std::string reduction;    // "materialized" or "head-only"
  std::size_t inclusion_pairs = 0;
  std::size_t inclusion_counterexamples = 0;
  std::vector<double> tail_scores;
  DimensionReport irr_report;
  DimensionReport whole_report;
  std::vector<std::string> flags;
};

/// Builds Z_irr from head-grid points followed by tails whose adversarial
/// score exceeds threshold + margin, compares its upper spanning dimension
/// with the whole-space mdim, and replays each tested (omega, x) through the
/// skew map with psi(omega, x) = phi(x) to check that skew-irregular pairs
/// have phi-irregular base points.
Theorem5Report theorem5_harness(const ZooSystem& zoo, const RandomWalkSpec& walk, const Observable& phi,
                                const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                                const Theorem5Options& opts = {});

}  // namespace mmdim
