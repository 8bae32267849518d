#include "mmdim/mdim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "mmdim/cover.hpp"
#include "mmdim/error.hpp"
#include "mmdim/parallel.hpp"

namespace mmdim {

void validate_time_ladder(const std::vector<std::size_t>& ladder, const std::string& field) {
  if (ladder.empty()) fail(ErrorKind::Parameter, field + ": empty ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 1) fail(ErrorKind::Parameter, field + ": entries must be >= 1");
    if (i > 0 && ladder[i] <= ladder[i - 1]) fail(ErrorKind::Parameter, field + ": entries must be strictly increasing");
  }
}

namespace {

void flag_target(const CountTarget& target, DimensionReport& rep) {
  if (auto* st = dynamic_cast<const SampledTarget*>(&target))
    if (st->system().snap_error() > 0.0) rep.flag("snap-error");
}

void note(DimensionReport* diag, const ExpectedCount& ec) {
  if (!diag) return;
  if (!ec.counts_exact) diag->flag("greedy-used");
  if (!ec.enumerated) diag->flag("monte-carlo");
  if (ec.partial) diag->flag("partial");
}

DimensionReport count_dimension(const CountTarget& target, const RandomWalkSpec& walk,
                                const std::vector<double>& eps_ladder, const std::vector<std::size_t>& n_ladder,
                                CountKind kind, Variant variant, const AverageBudget& budget) {
  validate_ladder(eps_ladder, 2, "eps_ladder");
  validate_time_ladder(n_ladder, "n_ladder");
  DimensionReport rep;
  flag_target(target, rep);
  for (double eps : eps_ladder) {
    auto rec = scale_entropy(target, walk, eps, n_ladder, kind, variant == Variant::Upper, budget, &rep);
    rec.ratio = rec.value / std::log(1.0 / eps);
    rep.scales.push_back(std::move(rec));
  }
  finish_slope(rep);
  return rep;
}

}  // namespace

ScaleRecord scale_entropy(const CountTarget& target, const RandomWalkSpec& walk, double eps,
                          const std::vector<std::size_t>& n_ladder, CountKind kind, bool sup_mode,
                          const AverageBudget& budget, DimensionReport* diag) {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  validate_time_ladder(n_ladder, "n_ladder");
  ScaleRecord rec;
  rec.eps = eps;
  rec.ladder = n_ladder;
  const auto base = expected_count(target, walk, 0, eps, kind, budget);
  note(diag, base);
  if (!(base.mean > 0.0)) fail(ErrorKind::Numerical, "empty target has no scale entropy");
  rec.baseline = base.mean;
  std::vector<ExpectedCount> ecs(n_ladder.size());
  parallel_for(n_ladder.size(),
               [&](std::size_t k) { ecs[k] = expected_count(target, walk, n_ladder[k], eps, kind, budget); });
  for (std::size_t k = 0; k < n_ladder.size(); ++k) {
    note(diag, ecs[k]);
    rec.count_mean.push_back(ecs[k].mean);
    rec.count_stderr.push_back(ecs[k].stderr_);
    rec.values.push_back(std::log(ecs[k].mean / base.mean) / static_cast<double>(n_ladder[k]));
  }
  rec.upper = tail_max(rec.values);
  rec.lower = tail_min(rec.values);
  rec.value = sup_mode ? rec.upper : rec.lower;
  return rec;
}

DimensionReport mdim_whole(const CountTarget& target, const RandomWalkSpec& walk, const std::vector<double>& eps_ladder,
                           const std::vector<std::size_t>& n_ladder, Variant variant, const AverageBudget& budget) {
  return count_dimension(target, walk, eps_ladder, n_ladder, CountKind::Separated, variant, budget);
}

ExpectedCount lambda_B(const CountTarget& target, const RandomWalkSpec& walk, std::size_t N, double eps,
                       const AverageBudget& budget) {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  return expected_count(target, walk, N, eps, CountKind::Spanning, budget);
}

DimensionReport umdim_subset(const CountTarget& target, const RandomWalkSpec& walk,
                             const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                             const AverageBudget& budget) {
  return count_dimension(target, walk, eps_ladder, N_ladder, CountKind::Spanning, Variant::Upper, budget);
}

DimensionReport lmdim_subset(const CountTarget& target, const RandomWalkSpec& walk,
                             const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                             const AverageBudget& budget) {
  return count_dimension(target, walk, eps_ladder, N_ladder, CountKind::Spanning, Variant::Lower, budget);
}

namespace {

std::vector<Word> suffixes(const CountTarget& target, std::size_t slack) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= slack; ++len) {
    if (target.word_independent()) out.emplace_back(std::vector<std::uint32_t>(len, 0));
    else
      for (auto& u : all_words(target.alphabet(), len)) out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

BowenCoverFamily::BowenCoverFamily(const CountTarget& target, const Word& w, double eps, const CPOptions& opts) {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  const auto sufs = suffixes(target, opts.slack);
  const auto* st = dynamic_cast<const SampledTarget*>(&target);
  universe_ = static_cast<std::size_t>(target.size());
  if (universe_ == 0) {
    method_ = "exact";
    return;
  }
  const bool exact = st && universe_ <= opts.exact_limit && universe_ <= 20;
  if (st) {
    const auto& sys = st->system();
    const auto& Z = st->points();
    const std::size_t m = Z.size();
    std::vector<std::vector<Ball>> per_suffix(sufs.size());
    parallel_for(sufs.size(), [&](std::size_t s) {
      const Word v = concat(w, sufs[s]);
      std::vector<std::vector<std::size_t>> traj(m);
      for (std::size_t a = 0; a < m; ++a) traj[a] = orbit_indices(sys, v, Z[a]);
      for (std::size_t a = 0; a < m; ++a) {
        Ball b;
        b.length = v.size();
        for (std::size_t c = 0; c < m; ++c) {
          bool in = true;
          for (std::size_t t = 0; t < traj[a].size() && in; ++t) in = sys.phase().dist(traj[a][t], traj[c][t]) < eps;
          if (!in) continue;
          b.members.push_back(static_cast<std::uint32_t>(c));
          if (c < 64) b.mask |= std::uint64_t{1} << c;
        }
        per_suffix[s].push_back(std::move(b));
      }
    });
    if (exact) {
      // Same member set: the longest word has the smallest weight for lambda >= 0.
      std::map<std::uint64_t, std::size_t> longest;
      for (auto& group : per_suffix)
        for (auto& b : group) {
          auto& len = longest[b.mask];
          len = std::max(len, b.length);
        }
      for (auto [mask, len] : longest) {
        Ball b;
        b.mask = mask;
        b.length = len;
        balls_.push_back(b);
      }
      method_ = "exact";
      return;
    }
    for (auto& group : per_suffix)
      for (auto& b : group) balls_.push_back(std::move(b));
    method_ = "greedy";
  } else {
    method_ = "uniform-length";
  }
  std::vector<CountValue> counts(sufs.size());
  parallel_for(sufs.size(), [&](std::size_t s) { counts[s] = target.count(concat(w, sufs[s]), eps, CountKind::Cover); });
  for (std::size_t s = 0; s < sufs.size(); ++s) {
    uniform_.emplace_back(w.size() + sufs[s].size(), counts[s].count);
    counts_exact_ = counts_exact_ && counts[s].exact;
  }
}

CPValue BowenCoverFamily::evaluate(double lambda) const {
  CPValue out;
  out.method = method_;
  if (universe_ == 0) {
    out.exact = true;
    return out;
  }
  auto weight = [&](std::size_t len) { return std::exp(-lambda * static_cast<double>(len + 1)); };
  if (method_ == "exact") {
    std::vector<CoverCandidate> cands;
    for (const auto& b : balls_) cands.push_back({b.mask, weight(b.length)});
    const std::uint64_t universe = universe_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << universe_) - 1);
    const auto sol = weighted_cover_exact(cands, universe);
    out.value = sol.cost;
    out.exact = true;
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (auto [len, c] : uniform_) best = std::min(best, weight(len) * c);
  if (method_ == "greedy") {
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<double> weights;
    members.reserve(balls_.size());
    for (const auto& b : balls_) {
      members.push_back(b.members);
      weights.push_back(weight(b.length));
    }
    const auto sol = weighted_cover_greedy(members, weights, universe_);
    if (sol.feasible) best = std::min(best, sol.cost);
  }
  out.value = best;
  out.exact = false;
  return out;
}

CPValue cp_outer_measure(const CountTarget& target, const Word& w, double lambda, double eps, const CPOptions& opts) {
  return BowenCoverFamily(target, w, eps, opts).evaluate(lambda);
}

namespace {

struct WeightedWords {
  std::vector<Word> words;
  std::vector<double> weights;  // already normalized
  bool sampled = false;
};

WeightedWords prefixes(const CountTarget& target, const RandomWalkSpec& walk, std::size_t N,
                       const AverageBudget& budget) {
  require(walk.alphabet() == target.alphabet(), "walk alphabet differs from the system alphabet");
  WeightedWords ww;
  if (target.word_independent()) {
    ww.words.emplace_back(std::vector<std::uint32_t>(N, 0));
    ww.weights.push_back(1.0);
    return ww;
  }
  if (word_count(walk.alphabet(), N) <= budget.exact_words) {
    for (auto& w : all_words(walk.alphabet(), N)) {
      const double p = walk.word_probability(w);
      if (p <= 0.0) continue;
      ww.words.push_back(std::move(w));
      ww.weights.push_back(p);
    }
    return ww;
  }
  ww.sampled = true;
  for (std::size_t k = 0; k < budget.mc_samples; ++k) {
    ww.words.push_back(sample_word(walk, N, k));
    ww.weights.push_back(1.0 / static_cast<double>(budget.mc_samples));
  }
  return ww;
}

struct AveragedFamily {
  std::vector<BowenCoverFamily> families;
  std::vector<double> weights;
  bool sampled = false;

  AveragedFamily(const CountTarget& target, const RandomWalkSpec& walk, std::size_t N, double eps,
                 const CPOptions& opts) {
    auto ww = prefixes(target, walk, N, opts.budget);
    sampled = ww.sampled;
    weights = ww.weights;
    families.reserve(ww.words.size());
    for (const auto& w : ww.words) families.emplace_back(target, w, eps, opts);
  }

  CPValue evaluate(double lambda) const {
    std::vector<CPValue> vals(families.size());
    parallel_for(families.size(), [&](std::size_t k) { vals[k] = families[k].evaluate(lambda); });
    CPValue out;
    out.exact = !sampled;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      out.value += weights[k] * vals[k].value;
      out.exact = out.exact && vals[k].exact;
      out.method = vals[k].method;
    }
    return out;
  }
};

}  // namespace

CPValue cp_outer_measure(const CountTarget& target, const RandomWalkSpec& walk, std::size_t N, double lambda,
                         double eps, const CPOptions& opts) {
  return AveragedFamily(target, walk, N, eps, opts).evaluate(lambda);
}

CPCritical cp_critical_exponent(const CountTarget& target, const RandomWalkSpec& walk,
                                const std::vector<std::size_t>& N_ladder, double eps, const CPOptions& opts) {
  validate_time_ladder(N_ladder, "N_ladder");
  if (N_ladder.size() < 2) fail(ErrorKind::Parameter, "N_ladder: needs at least two entries");
  require(opts.grid >= 2, "lambda grid needs at least two points");
  const AveragedFamily lo_fam(target, walk, N_ladder.front(), eps, opts);
  const AveragedFamily hi_fam(target, walk, N_ladder.back(), eps, opts);
  CPCritical res;
  auto classify = [&](double lambda) {
    const auto a = lo_fam.evaluate(lambda), b = hi_fam.evaluate(lambda);
    if (!a.exact || !b.exact) {
      const std::string f = a.method == "exact" ? b.method : a.method;
      if (std::find(res.flags.begin(), res.flags.end(), f) == res.flags.end()) res.flags.push_back(f);
    }
    const bool above = b.value < a.value * (1.0 - 1e-9);
    res.trace.emplace_back(lambda, above);
    return above;
  };
  const double top = std::log(std::max(target.sample_size(), 2.0));
  std::vector<double> grid(opts.grid);
  std::vector<char> cls(opts.grid);
  for (std::size_t k = 0; k < opts.grid; ++k) {
    grid[k] = top * static_cast<double>(k) / static_cast<double>(opts.grid - 1);
    cls[k] = classify(grid[k]);
  }
  std::size_t first = opts.grid;
  for (std::size_t k = 0; k < opts.grid; ++k)
    if (cls[k]) {
      first = k;
      break;
    }
  for (std::size_t k = first; k < opts.grid; ++k)
    if (!cls[k]) {
      std::ostringstream msg;
      msg << "non-monotone critical exponent classification at eps " << eps << ":";
      for (std::size_t j = 0; j < opts.grid; ++j) msg << " " << grid[j] << (cls[j] ? "+" : "-");
      fail(ErrorKind::Numerical, msg.str());
    }
  if (first == opts.grid) {
    res.flags.push_back("no-decay-in-range");
    res.lambda = top;
    return res;
  }
  if (first == 0) {
    res.lambda = 0.0;
    return res;
  }
  double lo = grid[first - 1], hi = grid[first];
  while (hi - lo > opts.tolerance) {
    const double mid = 0.5 * (lo + hi);
    (classify(mid) ? hi : lo) = mid;
  }
  res.lambda = 0.5 * (lo + hi);
  return res;
}

DimensionReport cp_dimension(const CountTarget& target, const RandomWalkSpec& walk,
                             const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                             const CPOptions& opts) {
  validate_ladder(eps_ladder, 2, "eps_ladder");
  DimensionReport rep;
  flag_target(target, rep);
  for (double eps : eps_ladder) {
    const auto crit = cp_critical_exponent(target, walk, N_ladder, eps, opts);
    ScaleRecord rec;
    rec.eps = eps;
    rec.ladder = N_ladder;
    rec.value = rec.upper = rec.lower = crit.lambda;
    rec.ratio = crit.lambda / std::log(1.0 / eps);
    for (const auto& f : crit.flags) rep.flag(f == "exact" ? "exact" : (f == "greedy" ? "greedy-used" : f));
    rep.scales.push_back(rec);
  }
  finish_slope(rep);
  return rep;
}

double open_cover_oracle(const SemigroupSystem& sys, const std::vector<std::size_t>& Z, const Word& w, double lambda,
                         double eps, std::size_t slack) {
  if (Z.size() > 8 || sys.alphabet() > 3 || w.size() > 3 || slack > 3)
    fail(ErrorKind::Budget, "open-cover oracle limited to |Z| <= 8, alphabet <= 3, N <= 3, slack <= 3");
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  if (Z.empty()) return 0.0;
  const SampledSpace& X = sys.phase();
  const std::size_t m = Z.size();
  std::map<std::uint64_t, double> cheapest;
  for (std::size_t len = 0; len <= slack; ++len) {
    for (const auto& u : all_words(sys.alphabet(), len)) {
      const Word v = concat(w, u);
      std::vector<std::vector<std::size_t>> traj(m);
      for (std::size_t a = 0; a < m; ++a) traj[a] = orbit_indices(sys, v, Z[a]);
      // Z-traces of U_0 ∩ f^-1 U_1 ∩ ... for every string of cover elements.
      auto hits = [&](std::size_t t, std::size_t p) {
        std::uint64_t mask = 0;
        for (std::size_t a = 0; a < m; ++a)
          if (X.dist(traj[a][t], p) < eps / 2.0) mask |= std::uint64_t{1} << a;
        return mask;
      };
      std::vector<std::uint64_t> level;
      for (std::size_t p = 0; p < X.size(); ++p) level.push_back(hits(0, p));
      for (std::size_t t = 1; t < v.size() + 1; ++t) {
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
        std::vector<std::uint64_t> next;
        std::vector<std::uint64_t> step(X.size());
        for (std::size_t p = 0; p < X.size(); ++p) step[p] = hits(t, p);
        std::sort(step.begin(), step.end());
        step.erase(std::unique(step.begin(), step.end()), step.end());
        for (auto a : level)
          for (auto b : step)
            if (a & b) next.push_back(a & b);
        level = std::move(next);
      }
      const double wgt = std::exp(-lambda * static_cast<double>(v.size() + 1));
      for (auto mask : level) {
        if (!mask) continue;
        auto it = cheapest.find(mask);
        if (it == cheapest.end() || wgt < it->second) cheapest[mask] = wgt;
      }
    }
  }
  std::vector<CoverCandidate> cands;
  for (auto [mask, wgt] : cheapest) cands.push_back({mask, wgt});
  const auto sol = weighted_cover_exact(cands, (std::uint64_t{1} << m) - 1);
  return sol.cost;
}

}  // namespace mmdim
