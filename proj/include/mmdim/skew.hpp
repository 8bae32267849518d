#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mmdim/mdim.hpp"
#include "mmdim/zoo.hpp"

namespace mmdim {

/// (omega, x) with omega truncated to a fixed depth; symbols past the depth
/// are the filler symbol.
struct SkewPoint {
  Word omega;
  Point x;
};

/// Truncated skew space: generators, the Y sample and the truncation depth.
struct SkewSpace {
  MapFamily family;
  std::shared_ptr<const SampledSpace> Y;
  std::size_t depth = 0;
  std::uint32_t filler = 0;
};

/// ceil(log2(2 diam_Y / eps)): frozen tails then contribute at most eps/2 to d'.
std::size_t truncation_depth(double diam_Y, double eps);

/// (sigma omega, f_{i_1} x), appending the filler at the truncation depth.
SkewPoint skew_apply(const SkewSpace& space, const SkewPoint& p);

/// d'(omega, omega') = sum_{j<=m} 2^-j d_Y(i_j, i'_j) over the truncation.
double sequence_distance(const SkewSpace& space, const Word& a, const Word& b);
/// D = max(d', d).
double product_distance(const SkewSpace& space, const SkewPoint& p, const SkewPoint& q);

struct GlueSegment {
  Point x;
  Word w;  // n_j = |w|
};

struct GlueInstance {
  std::vector<GlueSegment> segments;
  double eps = 0.0;
  std::size_t p_max = 0;
};

struct GlueOptions {
  /// Gap words are exhausted when |Y|^(sum p) fits; otherwise this many
  /// seeded gap-word tuples are drawn and the result is flagged.
  std::size_t exhaust_limit = 100000;
  std::size_t sampled_gap_words = 2000;
  std::uint64_t seed = 0;
  bool closed = false;  // <= eps instead of the strict Bowen ball
};

struct GlueResult {
  bool found = false;
  std::vector<std::size_t> gaps;
  /// Witness for the all-zero gap words (index into the candidate list).
  std::size_t y = 0;
  /// One witness index per checked gap-word tuple, in enumeration order.
  std::vector<std::size_t> witnesses;
  /// A witness that also works for every other checked gap-word tuple, if any.
  bool uniform = false;
  std::size_t uniform_y = 0;
  bool exhaustive = true;
  std::size_t gap_words_checked = 0;
};

/// Searches gap tuples 0 <= p_j <= p_max in lexicographic order. A tuple is
/// accepted when every gap-word tuple admits some candidate y whose orbit
/// enters each B_{w_j}(x_j, eps) at the start of segment j; segment j starts
/// after n_1 + p_1 + ... + n_{j-1} + p_{j-1} symbols. Candidates equal to x_1
/// are tried first, then the rest in list order.
GlueResult gluing_search(const MapFamily& family, const std::vector<Point>& candidates, const GlueInstance& inst,
                         const GlueOptions& opts = {});

/// Same check with caller-fixed gaps (all >= m_eps).
GlueResult specification_search(const MapFamily& family, const std::vector<Point>& candidates,
                                const GlueInstance& inst, const std::vector<std::size_t>& gaps, std::size_t m_eps,
                                const GlueOptions& opts = {});

/// Replays one witness: true when y satisfies every segment for the given
/// gaps and gap words.
bool glue_witness_valid(const MapFamily& family, const Point& y, const GlueInstance& inst,
                        const std::vector<std::size_t>& gaps, const std::vector<Word>& gap_words, bool closed = false);

struct SkewSegment {
  SkewPoint start;
  std::size_t n = 0;
};

struct Lemma1Result {
  bool found = false;
  double delta = 0.0;
  std::size_t extension = 0;  // ceil(-log2 delta)
  std::vector<std::size_t> gaps_G;
  std::vector<std::size_t> gaps_F;
  SkewPoint witness;
  double max_distance = 0.0;  // largest D along all segments
  bool verified = false;
  GlueResult base;
};

/// Builds a skew glue witness from a base glue at delta = eps / (2 diam Y)
/// with words extended by ceil(-log2 delta) symbols, then checks every
/// F-orbit segment against the witness in D (closed, <= eps).
Lemma1Result lemma1_glue(const SkewSpace& space, const std::vector<Point>& candidates,
                         const std::vector<SkewSegment>& segments, double eps, std::size_t p_max_G,
                         const GlueOptions& opts = {});

/// Counts of F = sigma x f on (omega-sample) x Z when the generators coincide:
/// the close graph is the strong product of the two factor graphs.
/// Separated counts multiply exactly when one factor has a clique-cover
/// certificate; spanning and cover counts when both have 2-packing ones.
class SkewFactoredTarget : public CountTarget {
 public:
  SkewFactoredTarget(std::shared_ptr<const CountTarget> omega, std::shared_ptr<const CountTarget> fiber);
  std::size_t alphabet() const override { return 1; }
  bool word_independent() const override { return true; }
  CountValue count(const Word& w, double eps, CountKind kind) const override;
  double size() const override { return omega_->size() * fiber_->size(); }
  double sample_size() const override { return omega_->sample_size() * fiber_->sample_size(); }

 private:
  std::shared_ptr<const CountTarget> omega_;
  std::shared_ptr<const CountTarget> fiber_;
};

/// Full shift on Y^depth with d' as a one-generator system (the omega factor).
std::shared_ptr<const SemigroupSystem> omega_shift(const SampledSpace& Y, const std::vector<std::size_t>& symbols,
                                                   std::size_t depth);

/// Materialized truncated skew space over the phase sample of `sys`, with F
/// as its single generator. Points are (omega values..., x...).
std::shared_ptr<const SemigroupSystem> materialize_skew(const SemigroupSystem& sys,
                                                        const std::vector<std::size_t>& symbols, std::size_t depth);

struct Theorem4Report {
  double box_dim = 0.0;
  double umdim_G = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double homogeneity_L = 0.0;
  bool equality = true;  // supp nu is all of Y
  bool holds = false;
  double tol = 0.15;
  std::size_t omega_depth = 0;
  DimensionReport lhs_report;
  DimensionReport rhs_report;
  std::vector<std::string> flags;
};

/// LHS = upper box dimension of supp nu + umdim of Z for G; RHS = umdim of F
/// on Y^N x Z (or (supp nu)^N x Z when `restrict_to_support`). The fiber
/// target must be word-independent (coinciding generators).
Theorem4Report theorem4_harness(std::shared_ptr<const CountTarget> Z_target, const SampledSpace& Y,
                                const RandomWalkSpec& nu, const std::vector<double>& eps_ladder,
                                const std::vector<std::size_t>& N_ladder, double tol = 0.15,
                                bool restrict_to_support = false);

}  // namespace mmdim
