#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mmdim/randomwalk.hpp"
#include "mmdim/report.hpp"

namespace mmdim {

enum class Variant { Upper, Lower };

/// Strictly increasing, all >= 1.
void validate_time_ladder(const std::vector<std::size_t>& ladder, const std::string& field);

/// Per-n values (1/n) log(E c_n / E c_0) of the averaged count, with the
/// tail-max in `upper` and the tail-min in `lower`. `value` is the upper one
/// when `sup_mode`, else the lower one.
ScaleRecord scale_entropy(const CountTarget& target, const RandomWalkSpec& walk, double eps,
                          const std::vector<std::size_t>& n_ladder, CountKind kind, bool sup_mode,
                          const AverageBudget& budget = {}, DimensionReport* diag = nullptr);

/// Slope of the separated scale entropy against log(1/eps).
DimensionReport mdim_whole(const CountTarget& target, const RandomWalkSpec& walk, const std::vector<double>& eps_ladder,
                           const std::vector<std::size_t>& n_ladder, Variant variant, const AverageBudget& budget = {});

/// Averaged spanning count at word length N.
ExpectedCount lambda_B(const CountTarget& target, const RandomWalkSpec& walk, std::size_t N, double eps,
                       const AverageBudget& budget = {});

/// Spanning-count dimensions of the target: tail-max (umdim) or tail-min
/// (lmdim) of (1/N) log(Lambda(N) / Lambda(0)) per eps, sloped across eps.
DimensionReport umdim_subset(const CountTarget& target, const RandomWalkSpec& walk,
                             const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                             const AverageBudget& budget = {});
DimensionReport lmdim_subset(const CountTarget& target, const RandomWalkSpec& walk,
                             const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                             const AverageBudget& budget = {});

struct CPOptions {
  std::size_t slack = 3;        // extra word length allowed beyond N
  std::size_t exact_limit = 16; // exact weighted cover up to this |Z|
  AverageBudget budget;
  double tolerance = 1e-3;
  std::size_t grid = 17;
};

struct CPValue {
  double value = 0.0;
  bool exact = false;
  std::string method;  // "exact", "greedy" or "uniform-length"
};

/// Cheapest cover of the target by Bowen balls B_{w u}(z, eps), z in Z,
/// |u| <= slack, for one prefix w; built once, evaluated for many lambda.
class BowenCoverFamily {
 public:
  BowenCoverFamily(const CountTarget& target, const Word& w, double eps, const CPOptions& opts);
  CPValue evaluate(double lambda) const;

 private:
  struct Ball {
    std::vector<std::uint32_t> members;
    std::uint64_t mask = 0;
    std::size_t length = 0;  // |w u|
  };
  std::string method_;
  std::size_t universe_ = 0;
  std::vector<Ball> balls_;
  std::vector<std::pair<std::size_t, double>> uniform_;  // (|w u|, cover count)
  bool counts_exact_ = true;
};

/// M^B_w(Z, lambda, N, eps) for a single prefix w.
CPValue cp_outer_measure(const CountTarget& target, const Word& w, double lambda, double eps,
                         const CPOptions& opts = {});
/// Walk average over prefixes w in Y^N.
CPValue cp_outer_measure(const CountTarget& target, const RandomWalkSpec& walk, std::size_t N, double lambda,
                         double eps, const CPOptions& opts = {});

struct CPCritical {
  double lambda = 0.0;
  std::vector<std::pair<double, bool>> trace;  // (lambda, classified above critical)
  std::vector<std::string> flags;
};

/// Critical lambda: above it the averaged M^B decays from the smallest to the
/// largest N of the ladder. Scanned on a grid over [0, log |sample|], checked
/// for monotonicity, then bisected to the tolerance.
CPCritical cp_critical_exponent(const CountTarget& target, const RandomWalkSpec& walk,
                                 const std::vector<std::size_t>& N_ladder, double eps, const CPOptions& opts = {});

/// Critical exponents per eps, sloped across eps.
DimensionReport cp_dimension(const CountTarget& target, const RandomWalkSpec& walk,
                             const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                             const CPOptions& opts = {});

/// String-based M_w with the cover by open eps/2-balls around every sampled
/// point and strings of length N+1 .. N+1+slack. Tiny instances only.
double open_cover_oracle(const SemigroupSystem& sys, const std::vector<std::size_t>& Z, const Word& w, double lambda,
                         double eps, std::size_t slack = 3);

}  // namespace mmdim
