#include "mmdim/local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmdim/error.hpp"
#include "mmdim/parallel.hpp"

namespace mmdim {

double ball_mass(const MeasureOnSpace& mu, const SemigroupSystem& sys, const Word& w, const Point& x, double eps) {
  require(mu.space != nullptr && mu.space->size() == sys.phase().size(), "measure must live on the phase sample");
  const auto cx = orbit(sys, w, x);
  double m = 0.0;
  for (std::size_t i = 0; i < sys.phase().size(); ++i) {
    if (mu.weights[i] == 0.0) continue;
    bool in = true;
    std::size_t j = i;
    for (std::size_t t = 0; t < cx.size() && in; ++t) {
      if (t > 0) j = sys.step_index(w[t - 1], j);
      in = sys.phase().dist(cx[t], sys.phase().point(j)) < eps;
    }
    if (in) m += mu.weights[i];
  }
  return m;
}

SampledMass::SampledMass(std::shared_ptr<const SemigroupSystem> sys, MeasureOnSpace mu)
    : sys_(std::move(sys)), mu_(std::move(mu)) {
  require(sys_ && mu_.space && mu_.space->size() == sys_->phase().size(), "measure must live on the phase sample");
  for (std::size_t i = 0; i < sys_->phase().size(); ++i) index_.emplace(sys_->phase().point(i), i);
  word_independent_ = true;
  for (std::size_t y = 1; y < sys_->alphabet() && word_independent_; ++y)
    for (std::size_t i = 0; i < sys_->phase().size(); ++i)
      if (sys_->step_index(y, i) != sys_->step_index(0, i)) {
        word_independent_ = false;
        break;
      }
}

double SampledMass::mass(const Word& w, const Point& x, double eps) const {
  auto it = index_.find(x);
  if (it == index_.end()) return ball_mass(mu_, *sys_, w, x, eps);
  const auto cx = orbit_indices(*sys_, w, it->second);
  const auto& X = sys_->phase();
  double m = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (mu_.weights[i] == 0.0) continue;
    bool in = X.dist(cx[0], i) < eps;
    std::size_t j = i;
    for (std::size_t t = 1; t < cx.size() && in; ++t) {
      j = sys_->step_index(w[t - 1], j);
      in = X.dist(cx[t], j) < eps;
    }
    if (in) m += mu_.weights[i];
  }
  return m;
}

ProductMass::ProductMass(std::vector<std::vector<double>> coords, std::size_t alphabet)
    : coords_(std::move(coords)), alphabet_(alphabet) {
  require(!coords_.empty(), "product measure needs coordinates");
  for (auto& c : coords_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
}

double ProductMass::mass(const Word& w, const Point& x, double eps) const {
  return product_ball_mass(coords_, x, w.size(), eps);
}

namespace {

struct Scored {
  Word w;
  double mass;
  std::uint64_t tie;
};

std::uint64_t word_tie(std::uint64_t seed, const Word& w) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto s : w.symbols) h = counter_hash(seed, h, s);
  return h;
}

}  // namespace

LocalEntropyEstimate local_entropy(const MassModel& model, const Point& x, double eps,
                                   const std::vector<std::size_t>& n_ladder, LocalKind kind, WordMode mode,
                                   std::uint64_t seed, std::size_t word_budget) {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  validate_time_ladder(n_ladder, "n_ladder");
  LocalEntropyEstimate est;
  est.x = x;
  est.eps = eps;
  est.ladder = n_ladder;
  est.kind = kind;
  est.base_mass = model.mass(Word(), x, eps);
  if (!(est.base_mass > 0.0)) fail(ErrorKind::Numerical, "ball around x has zero mass");
  const bool want_min = kind == LocalKind::Plus;
  auto better = [&](const Scored& a, const Scored& b) {
    if (a.mass != b.mass) return want_min ? a.mass < b.mass : a.mass > b.mass;
    return a.tie < b.tie;
  };

  const std::size_t A = model.alphabet();
  std::vector<Scored> extremal(n_ladder.size());
  if (model.word_independent()) {
    for (std::size_t k = 0; k < n_ladder.size(); ++k) {
      Word w(std::vector<std::uint32_t>(n_ladder[k], 0));
      extremal[k] = {w, model.mass(w, x, eps), 0};
    }
  } else {
    // Exhaustive lengths first; anything beyond the budget goes to the beam.
    std::size_t beam_from = n_ladder.size();
    for (std::size_t k = 0; k < n_ladder.size(); ++k) {
      if (mode == WordMode::Adversarial || word_count(A, n_ladder[k]) > word_budget) {
        beam_from = k;
        break;
      }
      const auto words = all_words(A, n_ladder[k]);
      std::vector<double> masses(words.size());
      parallel_for(words.size(), [&](std::size_t i) { masses[i] = model.mass(words[i], x, eps); });
      Scored best{words[0], masses[0], word_tie(seed, words[0])};
      for (std::size_t i = 1; i < words.size(); ++i) {
        Scored c{words[i], masses[i], word_tie(seed, words[i])};
        if (better(c, best)) best = c;
      }
      extremal[k] = best;
    }
    if (beam_from < n_ladder.size()) {
      est.exhaustive = false;
      constexpr std::size_t kWidth = 8;
      std::vector<Scored> beam{{Word(), est.base_mass, 0}};
      std::size_t k = beam_from;
      for (std::size_t len = 1; len <= n_ladder.back(); ++len) {
        std::vector<Scored> cand;
        for (const auto& b : beam)
          for (std::uint32_t y = 0; y < A; ++y) {
            Word w = b.w;
            w.symbols.push_back(y);
            cand.push_back({w, 0.0, word_tie(seed, w)});
          }
        parallel_for(cand.size(), [&](std::size_t i) { cand[i].mass = model.mass(cand[i].w, x, eps); });
        std::sort(cand.begin(), cand.end(), better);
        if (cand.size() > kWidth) cand.resize(kWidth);
        beam = std::move(cand);
        if (k < n_ladder.size() && n_ladder[k] == len) extremal[k++] = beam.front();
      }
    }
  }
  for (std::size_t k = 0; k < n_ladder.size(); ++k) {
    est.masses.push_back(extremal[k].mass);
    est.witnesses.push_back(extremal[k].w);
    est.values.push_back(-std::log(extremal[k].mass / est.base_mass) / static_cast<double>(n_ladder[k]));
  }
  est.estimate = tail_min(est.values);
  est.upper = tail_max(est.values);
  return est;
}

DimensionReport local_mdim(const MassModel& model, const Point& x, const std::vector<double>& eps_ladder,
                           const std::vector<std::size_t>& n_ladder, Variant variant, WordMode mode,
                           std::uint64_t seed) {
  validate_ladder(eps_ladder, 2, "eps_ladder");
  DimensionReport rep;
  const LocalKind kind = variant == Variant::Upper ? LocalKind::Plus : LocalKind::Minus;
  for (double eps : eps_ladder) {
    const auto est = local_entropy(model, x, eps, n_ladder, kind, mode, seed);
    if (!est.exhaustive) rep.flag("adversarial-words");
    ScaleRecord rec;
    rec.eps = eps;
    rec.ladder = n_ladder;
    rec.values = est.values;
    rec.upper = est.upper;
    rec.lower = est.estimate;
    rec.value = est.estimate;
    rec.ratio = rec.value / std::log(1.0 / eps);
    rep.scales.push_back(rec);
  }
  finish_slope(rep);
  return rep;
}

Theorem1Report theorem1_harness(const MassModel& model, const std::vector<Point>& Z_points, double mass_of_Z,
                                const CountTarget& target, const RandomWalkSpec& walk,
                                const std::vector<double>& eps_ladder, const std::vector<std::size_t>& n_ladder,
                                const std::vector<std::size_t>& N_ladder, double tol, const CPOptions& opts) {
  require(!Z_points.empty(), "Z needs at least one sampled point");
  Theorem1Report rep;
  rep.tol = tol;
  rep.mass_of_Z = mass_of_Z;
  rep.s_minus = std::numeric_limits<double>::infinity();
  rep.s_plus = -std::numeric_limits<double>::infinity();
  for (const auto& x : Z_points) {
    const auto lo = local_mdim(model, x, eps_ladder, n_ladder, Variant::Lower);
    const auto hi = local_mdim(model, x, eps_ladder, n_ladder, Variant::Upper);
    rep.s_minus = std::min(rep.s_minus, lo.slope);
    rep.s_plus = std::max(rep.s_plus, hi.slope);
    for (const auto& f : lo.flags) rep.flags.push_back(f);
  }
  const auto cp = cp_dimension(target, walk, eps_ladder, N_ladder, opts);
  rep.cp = cp.slope;
  for (const auto& f : cp.flags) rep.flags.push_back(f);
  rep.flags.push_back("sampled-points-only");
  std::sort(rep.flags.begin(), rep.flags.end());
  rep.flags.erase(std::unique(rep.flags.begin(), rep.flags.end()), rep.flags.end());
  rep.lower_checked = mass_of_Z > 0.0;
  if (!rep.lower_checked) rep.flags.push_back("mass-of-Z-zero");
  rep.holds = rep.cp <= rep.s_plus + tol && (!rep.lower_checked || rep.s_minus - tol <= rep.cp);
  return rep;
}

}  // namespace mmdim
