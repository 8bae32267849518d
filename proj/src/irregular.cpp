#include "mmdim/irregular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmdim/error.hpp"
#include "mmdim/parallel.hpp"
#include "mmdim/skew.hpp"

namespace mmdim {

Observable coordinate_observable(std::size_t k) {
  return [k](const Point& x) {
    if (k >= x.size()) fail(ErrorKind::Parameter, "observable reads a coordinate the point does not have");
    return std::vector<double>{x[k]};
  };
}

namespace {

/// Running sums -> averages, one vector per n.
struct Averager {
  std::vector<double> sum;
  std::vector<std::vector<double>> partials;

  void add(const std::vector<double>& v) {
    if (sum.empty()) sum.assign(v.size(), 0.0);
    if (v.size() != sum.size()) fail(ErrorKind::Parameter, "observable changed dimension along the orbit");
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
    std::vector<double> avg(sum);
    const double n = static_cast<double>(partials.size() + 1);
    for (auto& a : avg) a /= n;
    partials.push_back(std::move(avg));
  }
};

/// Oscillation of the first n partials.
double oscillation_at(const std::vector<std::vector<double>>& partials, std::size_t n) {
  if (n == 0) return 0.0;
  double best = 0.0;
  for (std::size_t c = 0; c < partials[0].size(); ++c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t k = n / 2; k < n; ++k) {
      lo = std::min(lo, partials[k][c]);
      hi = std::max(hi, partials[k][c]);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

constexpr std::size_t kFirstCheckpoint = 64;

std::vector<std::size_t> checkpoints(std::size_t N) {
  std::vector<std::size_t> out;
  for (std::size_t c = kFirstCheckpoint; c <= N; c *= 2) out.push_back(c);
  if (out.empty()) out.push_back(N);
  return out;
}

}  // namespace

double trace_oscillation(const std::vector<std::vector<double>>& partials) {
  return oscillation_at(partials, partials.size());
}

ObservableTrace birkhoff_trace(const MapFamily& family, const Observable& phi, const Point& x, const Word& omega,
                               std::size_t N) {
  require(N >= 1, "trace length must be >= 1");
  if (omega.size() + 1 < N) fail(ErrorKind::Parameter, "omega shorter than the trace needs");
  ObservableTrace tr;
  tr.x = x;
  tr.omega = slice(omega, 1, N - 1);
  Averager avg;
  Point z = x;
  for (std::size_t j = 0; j < N; ++j) {
    if (j > 0) {
      require(omega[j - 1] < family.alphabet, "omega symbol outside the alphabet");
      z = family.apply(omega[j - 1], z);
    }
    avg.add(phi(z));
  }
  tr.partials = std::move(avg.partials);
  tr.oscillation = trace_oscillation(tr.partials);
  return tr;
}

namespace {

/// Word that pushes the first component of phi up in even doubling phases
/// and down in odd ones, one greedy step at a time.
std::pair<Word, std::vector<std::vector<double>>> pushing_trace(const MapFamily& family, const Observable& phi,
                                                                const Point& x, std::size_t N) {
  Word w;
  Averager avg;
  Point z = x;
  avg.add(phi(z));
  for (std::size_t j = 1; j < N; ++j) {
    const bool up = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(j)))) % 2 == 0;
    std::uint32_t best_y = 0;
    Point best_z;
    std::vector<double> best_v;
    for (std::uint32_t y = 0; y < family.alphabet; ++y) {
      Point cand = family.apply(y, z);
      auto v = phi(cand);
      const bool better = best_v.empty() || (up ? v[0] > best_v[0] : v[0] < best_v[0]);
      if (better) {
        best_y = y;
        best_z = std::move(cand);
        best_v = std::move(v);
      }
    }
    w.symbols.push_back(best_y);
    z = std::move(best_z);
    avg.add(best_v);
  }
  return {w, std::move(avg.partials)};
}

}  // namespace

IrregularityScore irregularity_score(const MapFamily& family, const Observable& phi, const Point& x, std::size_t N,
                                     OmegaStrategy strategy, const Word& omega) {
  require(N >= 1, "horizon must be >= 1");
  IrregularityScore out;
  if (strategy == OmegaStrategy::Fixed) {
    const auto tr = birkhoff_trace(family, phi, x, omega, N);
    out.witness = tr.omega;
    for (auto c : checkpoints(N)) out.checkpoints.emplace_back(c, oscillation_at(tr.partials, c));
    out.oscillation = tr.oscillation;
    return out;
  }
  std::vector<std::pair<Word, std::vector<std::vector<double>>>> cands;
  for (std::uint32_t y = 0; y < family.alphabet; ++y) {
    const Word w(std::vector<std::uint32_t>(N - 1, y));
    cands.emplace_back(w, birkhoff_trace(family, phi, x, w, N).partials);
  }
  if (family.alphabet > 1) cands.push_back(pushing_trace(family, phi, x, N));
  const auto cps = checkpoints(N);
  out.checkpoints.assign(cps.size(), {0, -1.0});
  out.oscillation = -1.0;
  for (const auto& [w, partials] : cands) {
    for (std::size_t k = 0; k < cps.size(); ++k) {
      const double o = oscillation_at(partials, cps[k]);
      if (o > out.checkpoints[k].second) out.checkpoints[k] = {cps[k], o};
      if (o > out.oscillation) {
        out.oscillation = o;
        out.witness = w;
      }
    }
  }
  return out;
}

Point block_sequence(double low, double high, std::size_t length, std::size_t phase) {
  Point p(length);
  for (std::size_t i = 0; i < length; ++i) {
    const auto k = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(i + phase + 1))));
    p[i] = k % 2 == 0 ? low : high;
  }
  return p;
}

IrregularPoint construct_irregular(const ZooSystem& zoo, const Observable& phi, std::size_t N) {
  if (!zoo.symbolic || zoo.coords.empty())
    fail(ErrorKind::Unsupported, "construct_irregular needs a symbolic shift preset (got '" + zoo.name + "')");
  require(N >= 2, "horizon must be >= 2");
  const auto [lo, hi] = std::minmax_element(zoo.coords[0].begin(), zoo.coords[0].end());
  IrregularPoint out;
  out.x = block_sequence(*lo, *hi, std::max(N, zoo.coords.size()));
  out.omega = Word(std::vector<std::uint32_t>(N - 1, 0));
  out.trace = birkhoff_trace(zoo.family, phi, out.x, out.omega, N);
  if (!(out.trace.oscillation > 0.0))
    fail(ErrorKind::Unsupported, "observable does not oscillate along the block point; no irregular point to build");
  return out;
}

namespace {

double observable_range(const ZooSystem& zoo, const Observable& phi) {
  std::vector<Point> probe;
  if (zoo.sys) probe = zoo.sys->phase().points();
  for (double v : zoo.coords[0]) probe.emplace_back(zoo.coords.size(), v);
  std::vector<double> lo, hi;
  for (const auto& p : probe) {
    const auto v = phi(p);
    if (lo.empty()) {
      lo = hi = v;
      continue;
    }
    for (std::size_t c = 0; c < v.size(); ++c) {
      lo[c] = std::min(lo[c], v[c]);
      hi[c] = std::max(hi[c], v[c]);
    }
  }
  double r = 0.0;
  for (std::size_t c = 0; c < lo.size(); ++c) r = std::max(r, hi[c] - lo[c]);
  return r;
}

Point concat_points(const Point& a, const Point& b) {
  Point p = a;
  p.insert(p.end(), b.begin(), b.end());
  return p;
}

/// psi(omega, x) = phi(x) averaged along the skew orbit.
double skew_oscillation(const ZooSystem& zoo, const Observable& phi, const Point& x, const Word& omega,
                        std::size_t N) {
  SkewSpace space{zoo.family, symbol_space(zoo.family.alphabet), omega.size(), 0};
  SkewPoint p{omega, x};
  Averager avg;
  for (std::size_t j = 0; j < N; ++j) {
    if (j > 0) p = skew_apply(space, p);
    avg.add(phi(p.x));
  }
  return trace_oscillation(avg.partials);
}

}  // namespace

Theorem5Report theorem5_harness(const ZooSystem& zoo, const RandomWalkSpec& walk, const Observable& phi,
                                const std::vector<double>& eps_ladder, const std::vector<std::size_t>& N_ladder,
                                const Theorem5Options& opts) {
  if (!zoo.symbolic || zoo.coords.empty())
    fail(ErrorKind::Unsupported, "theorem5 harness needs a symbolic shift preset (got '" + zoo.name + "')");
  validate_ladder(eps_ladder, 2, "eps_ladder");
  validate_time_ladder(N_ladder, "N_ladder");
  require(opts.horizon >= kFirstCheckpoint, "horizon must be >= 64");
  Theorem5Report rep;
  const double range = observable_range(zoo, phi);
  rep.threshold = opts.threshold > 0.0 ? opts.threshold : 0.1 * range;
  if (!(range > 0.0)) {
    rep.empty = true;
    rep.holds = true;
    rep.flags.push_back("phi-constant");
    rep.flags.push_back("I_phi empty at this resolution");
    return rep;
  }

  const auto& values = zoo.coords[0];
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it, span = hi - lo;
  const double eps_min = *std::min_element(eps_ladder.begin(), eps_ladder.end());
  const std::size_t depth = zoo.coords.size();
  const bool materialized = zoo.sys != nullptr;
  if (opts.head_length > 0) {
    rep.head_length = opts.head_length;
  } else if (materialized) {
    rep.head_length = std::max<std::size_t>(1, depth / 2);
  } else {
    const double need = std::ceil(std::log2(std::max(span, 1e-300) / eps_min)) + static_cast<double>(N_ladder.back()) + 1.0;
    rep.head_length = std::max(depth, static_cast<std::size_t>(std::max(need, 1.0)));
  }
  const std::size_t H = rep.head_length;
  if (materialized && H > depth) fail(ErrorKind::Parameter, "head length exceeds the sample depth");

  // Tails: block points (both parities, a few phases) and seeded iid tails.
  const std::size_t N = opts.horizon;
  std::vector<Point> tails{block_sequence(lo, hi, N), block_sequence(hi, lo, N), block_sequence(lo, hi, N, 1),
                           block_sequence(lo, hi, N, 3)};
  try {
    construct_irregular(zoo, phi, N);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unsupported) throw;
    rep.flags.push_back("construct-refused");
    tails.clear();
  }
  for (std::size_t r = 0; r < opts.random_tails; ++r) {
    Point t(N);
    for (std::size_t i = 0; i < N; ++i) t[i] = values[counter_hash(opts.seed, 1000 + r, i) % values.size()];
    tails.push_back(std::move(t));
  }
  rep.tails_tested = tails.size();
  const Point zero_head(H, lo);
  std::vector<IrregularityScore> scores(tails.size());
  parallel_for(tails.size(), [&](std::size_t k) {
    scores[k] = irregularity_score(zoo.family, phi, concat_points(zero_head, tails[k]), N, OmegaStrategy::Adversarial);
  });
  std::vector<std::size_t> accepted;
  double margin_used = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tails.size(); ++k) {
    rep.tail_scores.push_back(scores[k].oscillation);
    for (auto [c, o] : scores[k].checkpoints) {
      const double margin = 2.0 * static_cast<double>(H) * range / (static_cast<double>(c) / 2.0);
      if (o - margin > rep.threshold) {
        accepted.push_back(k);
        margin_used = std::min(margin_used, margin);
        break;
      }
    }
  }
  rep.tails_irregular = accepted.size();
  rep.margin = accepted.empty() ? 0.0 : margin_used;

  // Inclusion: every tested (omega, x) pair, replayed through the skew map.
  {
    std::vector<std::pair<std::size_t, Word>> pairs;
    for (std::size_t k = 0; k < tails.size(); ++k) {
      pairs.emplace_back(k, scores[k].witness);
      for (std::uint32_t y = 0; y < zoo.family.alphabet; ++y)
        pairs.emplace_back(k, Word(std::vector<std::uint32_t>(N - 1, y)));
    }
    std::vector<char> bad(pairs.size(), 0);
    parallel_for(pairs.size(), [&](std::size_t i) {
      const Point x = concat_points(zero_head, tails[pairs[i].first]);
      const double skew = skew_oscillation(zoo, phi, x, pairs[i].second, N);
      const double base = birkhoff_trace(zoo.family, phi, x, pairs[i].second, N).oscillation;
      bad[i] = skew > rep.threshold && !(base > rep.threshold) ? 1 : 0;
    });
    rep.inclusion_pairs = pairs.size();
    rep.inclusion_counterexamples = static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
  }

  if (accepted.empty()) {
    rep.empty = true;
    rep.holds = rep.inclusion_counterexamples == 0;
    rep.flags.push_back("I_phi empty at this resolution");
    return rep;
  }

  std::shared_ptr<const CountTarget> target;
  if (materialized) {
    rep.reduction = "materialized";
    std::vector<std::size_t> idx;
    for (const auto& head : sequence_grid(values, H))
      for (auto k : accepted) {
        Point p = concat_points(head, tails[k]);
        p.resize(depth);
        if (auto i = zoo.sys->phase().find(p)) idx.push_back(*i);
      }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    rep.z_irr_size = idx.size();
    target = std::make_shared<SampledTarget>(zoo.sys, idx);
  } else {
    // Tail coordinates sit at weight <= 2^-(H - N_max) in every Bowen metric of
    // the ladder, below eps_min, so closeness is decided by the head alone.
    rep.reduction = "head-only";
    if (!(std::ldexp(span, -static_cast<int>(H) + static_cast<int>(N_ladder.back())) < eps_min))
      fail(ErrorKind::Budget, "head length " + std::to_string(H) + " too short for the ladder; tails would matter");
    rep.z_irr_size = word_count(values.size(), H);
    target = std::make_shared<ProductShiftTarget>(std::vector<std::vector<double>>(H, values), zoo.family.alphabet);
  }
  rep.irr_report = umdim_subset(*target, walk, eps_ladder, N_ladder, opts.budget);
  rep.whole_report = mdim_whole(*zoo.whole, walk, eps_ladder, N_ladder, Variant::Upper, opts.budget);
  rep.umdim_irr = rep.irr_report.slope;
  rep.mdim_whole = rep.whole_report.slope;
  rep.gap = rep.umdim_irr - rep.mdim_whole;
  rep.holds = std::fabs(rep.gap) <= opts.tol && rep.inclusion_counterexamples == 0;
  for (const auto& f : rep.irr_report.flags) rep.flags.push_back("irr:" + f);
  for (const auto& f : rep.whole_report.flags) rep.flags.push_back("whole:" + f);
  rep.flags.push_back("sampled-stand-in");
  return rep;
}

}  // namespace mmdim
