#include "mmdim/skew.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmdim/error.hpp"
#include "mmdim/parallel.hpp"

namespace mmdim {

std::size_t truncation_depth(double diam_Y, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  if (!(diam_Y > 0.0)) return 1;
  const double m = std::ceil(std::log2(2.0 * diam_Y / eps));
  return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

SkewPoint skew_apply(const SkewSpace& space, const SkewPoint& p) {
  require(!p.omega.empty(), "skew point needs a nonempty omega");
  require(p.omega[0] < space.family.alphabet, "omega symbol outside the alphabet");
  SkewPoint q;
  q.x = space.family.apply(p.omega[0], p.x);
  q.omega.symbols.assign(p.omega.symbols.begin() + 1, p.omega.symbols.end());
  q.omega.symbols.push_back(space.filler);
  return q;
}

double sequence_distance(const SkewSpace& space, const Word& a, const Word& b) {
  if (a.size() != b.size()) fail(ErrorKind::Parameter, "omega truncation depths differ");
  require(space.Y != nullptr, "skew space without a Y sample");
  const std::size_t m = std::min(a.size(), space.depth == 0 ? a.size() : space.depth);
  double s = 0.0, w = 0.5;
  for (std::size_t j = 0; j < m; ++j, w *= 0.5) {
    if (a[j] == b[j]) continue;
    require(a[j] < space.Y->size() && b[j] < space.Y->size(), "omega symbol outside the Y sample");
    s += w * space.Y->dist(a[j], b[j]);
  }
  return s;
}

double product_distance(const SkewSpace& space, const SkewPoint& p, const SkewPoint& q) {
  return std::max(sequence_distance(space, p.omega, q.omega), space.family.metric(p.x, q.x));
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Lowest index in [0, n) satisfying pred, scanning in parallel chunks.
std::size_t find_first(std::size_t n, const std::function<bool(std::size_t)>& pred) {
  const std::size_t chunk = 256 * std::max(1u, thread_count());
  for (std::size_t base = 0; base < n; base += chunk) {
    const std::size_t len = std::min(chunk, n - base);
    std::vector<char> ok(len, 0);
    parallel_for(len, [&](std::size_t i) { ok[i] = pred(base + i) ? 1 : 0; });
    for (std::size_t i = 0; i < len; ++i)
      if (ok[i]) return base + i;
  }
  return kNone;
}

struct GlueProblem {
  const MapFamily& family;
  const GlueInstance& inst;
  bool closed;
  std::vector<std::vector<Point>> target_orbits;

  GlueProblem(const MapFamily& f, const GlueInstance& i, bool c) : family(f), inst(i), closed(c) {
    require(!inst.segments.empty(), "glue instance needs at least one segment");
    if (!(inst.eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
    for (const auto& seg : inst.segments) {
      for (auto s : seg.w.symbols) require(s < family.alphabet, "segment word symbol outside the alphabet");
      std::vector<Point> orb{seg.x};
      for (std::size_t t = 0; t < seg.w.size(); ++t) orb.push_back(family.apply(seg.w[t], orb.back()));
      target_orbits.push_back(std::move(orb));
    }
  }

  bool near(const Point& a, const Point& b) const {
    const double d = family.metric(a, b);
    return closed ? d <= inst.eps : d < inst.eps;
  }

  bool first_segment(const Point& y) const {
    Point z = y;
    const auto& w = inst.segments[0].w;
    for (std::size_t t = 0;; ++t) {
      if (!near(z, target_orbits[0][t])) return false;
      if (t == w.size()) return true;
      z = family.apply(w[t], z);
    }
  }

  /// Checks segments 2..k along the concatenated word; segment 1 is assumed.
  bool rest(const Point& y, const std::vector<std::size_t>& gaps, const std::vector<Word>& gap_words) const {
    Point z = y;
    for (std::size_t j = 0; j < inst.segments.size(); ++j) {
      const auto& w = inst.segments[j].w;
      if (j > 0) {
        for (std::size_t t = 0;; ++t) {
          if (!near(z, target_orbits[j][t])) return false;
          if (t == w.size()) break;
          z = family.apply(w[t], z);
        }
      } else {
        for (std::size_t t = 0; t < w.size(); ++t) z = family.apply(w[t], z);
      }
      if (j + 1 < inst.segments.size()) {
        const Word& u = gap_words[j];
        if (u.size() != gaps[j]) fail(ErrorKind::Parameter, "gap word length differs from its gap");
        for (std::size_t t = 0; t < u.size(); ++t) z = family.apply(u[t], z);
      }
    }
    return true;
  }
};

std::vector<std::vector<Word>> gap_word_tuples(const MapFamily& family, const std::vector<std::size_t>& gaps,
                                               const GlueOptions& opts, bool& exhaustive) {
  std::size_t total_len = 0;
  for (auto p : gaps) total_len += p;
  auto split = [&](const std::vector<std::uint32_t>& letters) {
    std::vector<Word> out;
    std::size_t pos = 0;
    for (auto p : gaps) {
      out.emplace_back(std::vector<std::uint32_t>(letters.begin() + static_cast<std::ptrdiff_t>(pos),
                                                  letters.begin() + static_cast<std::ptrdiff_t>(pos + p)));
      pos += p;
    }
    return out;
  };
  std::vector<std::vector<Word>> tuples;
  if (word_count(family.alphabet, total_len) <= opts.exhaust_limit) {
    exhaustive = true;
    for (const auto& w : all_words(family.alphabet, total_len)) tuples.push_back(split(w.symbols));
    return tuples;
  }
  exhaustive = false;
  tuples.push_back(split(std::vector<std::uint32_t>(total_len, 0)));
  for (std::size_t k = 1; k < opts.sampled_gap_words; ++k) {
    std::vector<std::uint32_t> letters(total_len);
    for (std::size_t t = 0; t < total_len; ++t)
      letters[t] = static_cast<std::uint32_t>(counter_hash(opts.seed, k, t) % family.alphabet);
    tuples.push_back(split(letters));
  }
  return tuples;
}

/// Candidate order: exact copies of x_1 first, then everything else passing
/// the first segment, in list order.
std::vector<std::size_t> first_segment_pool(const GlueProblem& prob, const std::vector<Point>& candidates) {
  std::vector<char> ok(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t i) { ok[i] = prob.first_segment(candidates[i]) ? 1 : 0; });
  std::vector<std::size_t> pool;
  const Point& x1 = prob.inst.segments[0].x;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (ok[i] && candidates[i] == x1) pool.push_back(i);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (ok[i] && candidates[i] != x1) pool.push_back(i);
  return pool;
}

/// Tries one gap tuple; fills `res` and returns true when every gap-word
/// tuple has a witness.
bool try_gaps(const GlueProblem& prob, const std::vector<Point>& candidates, const std::vector<std::size_t>& pool,
              const std::vector<std::size_t>& gaps, const GlueOptions& opts, GlueResult& res) {
  bool exhaustive = true;
  const auto tuples = gap_word_tuples(prob.family, gaps, opts, exhaustive);
  std::vector<std::size_t> witnesses;
  witnesses.reserve(tuples.size());
  for (const auto& tuple : tuples) {
    const std::size_t hit =
        find_first(pool.size(), [&](std::size_t k) { return prob.rest(candidates[pool[k]], gaps, tuple); });
    if (hit == kNone) return false;
    witnesses.push_back(pool[hit]);
  }
  res.found = true;
  res.gaps = gaps;
  res.witnesses = witnesses;
  res.y = witnesses.front();
  res.exhaustive = exhaustive;
  res.gap_words_checked = tuples.size();
  std::vector<std::size_t> distinct = witnesses;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (auto c : distinct) {
    const bool all = std::all_of(tuples.begin(), tuples.end(),
                                 [&](const std::vector<Word>& t) { return prob.rest(candidates[c], gaps, t); });
    if (all) {
      res.uniform = true;
      res.uniform_y = c;
      break;
    }
  }
  return true;
}

}  // namespace

GlueResult gluing_search(const MapFamily& family, const std::vector<Point>& candidates, const GlueInstance& inst,
                         const GlueOptions& opts) {
  const GlueProblem prob(family, inst, opts.closed);
  const auto pool = first_segment_pool(prob, candidates);
  GlueResult res;
  if (pool.empty()) return res;
  const std::size_t k = inst.segments.size() - 1;
  std::vector<std::size_t> gaps(k, 0);
  while (true) {
    if (try_gaps(prob, candidates, pool, gaps, opts, res)) return res;
    std::size_t j = k;
    while (j > 0 && gaps[j - 1] == inst.p_max) gaps[--j] = 0;
    if (j == 0) break;
    ++gaps[j - 1];
  }
  res = GlueResult{};
  return res;
}

GlueResult specification_search(const MapFamily& family, const std::vector<Point>& candidates,
                                const GlueInstance& inst, const std::vector<std::size_t>& gaps, std::size_t m_eps,
                                const GlueOptions& opts) {
  const GlueProblem prob(family, inst, opts.closed);
  if (gaps.size() + 1 != inst.segments.size())
    fail(ErrorKind::Parameter, "need one gap between each pair of consecutive segments");
  for (auto p : gaps)
    if (p < m_eps) fail(ErrorKind::Parameter, "gap " + std::to_string(p) + " is below m(eps) = " + std::to_string(m_eps));
  GlueResult res;
  const auto pool = first_segment_pool(prob, candidates);
  if (pool.empty() || !try_gaps(prob, candidates, pool, gaps, opts, res)) return GlueResult{};
  return res;
}

bool glue_witness_valid(const MapFamily& family, const Point& y, const GlueInstance& inst,
                        const std::vector<std::size_t>& gaps, const std::vector<Word>& gap_words, bool closed) {
  const GlueProblem prob(family, inst, closed);
  if (gaps.size() + 1 != inst.segments.size() || gap_words.size() != gaps.size())
    fail(ErrorKind::Parameter, "gap and gap-word lists must have one entry per segment boundary");
  return prob.first_segment(y) && prob.rest(y, gaps, gap_words);
}

Lemma1Result lemma1_glue(const SkewSpace& space, const std::vector<Point>& candidates,
                         const std::vector<SkewSegment>& segments, double eps, std::size_t p_max_G,
                         const GlueOptions& opts) {
  require(!segments.empty(), "lemma1_glue needs at least one segment");
  require(space.Y != nullptr && space.Y->size() >= 1, "skew space without a Y sample");
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  Lemma1Result out;
  const double diam = space.Y->diameter();
  out.delta = diam > 0.0 ? eps / (2.0 * diam) : eps;
  out.extension = out.delta >= 1.0 ? 0 : static_cast<std::size_t>(std::ceil(-std::log2(out.delta)));

  GlueInstance base;
  base.eps = std::min(out.delta, eps);
  base.p_max = p_max_G;
  for (const auto& seg : segments) {
    if (seg.start.omega.size() != space.depth)
      fail(ErrorKind::Parameter, "segment omega must have the truncation depth");
    if (seg.n + out.extension > seg.start.omega.size())
      fail(ErrorKind::Parameter, "truncation depth too small for n_j + ceil(-log2 delta)");
    base.segments.push_back({seg.start.x, slice(seg.start.omega, 1, seg.n + out.extension)});
  }
  GlueOptions base_opts = opts;
  base_opts.closed = false;
  out.base = gluing_search(space.family, candidates, base, base_opts);
  if (!out.base.found) return out;
  out.found = true;
  out.gaps_G = out.base.gaps;
  for (auto p : out.gaps_G) out.gaps_F.push_back(p + out.extension);

  // Blocks omega_j|[1, n_j + c] separated by the zero gap words the base
  // witness was found for, then the whole of omega_k.
  Word omega;
  std::vector<std::size_t> starts;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    starts.push_back(omega.size());
    if (j + 1 < segments.size()) {
      omega = concat(omega, base.segments[j].w);
      omega.symbols.insert(omega.symbols.end(), out.gaps_G[j], 0);
    } else {
      omega = concat(omega, segments[j].start.omega);
    }
  }
  out.witness = {omega, candidates[out.base.y]};

  auto truncated = [&](const SkewPoint& p) {
    SkewPoint q{slice(p.omega, 1, space.depth), p.x};
    return q;
  };
  SkewPoint cur = out.witness;
  std::size_t time = 0;
  out.max_distance = 0.0;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    for (; time < starts[j]; ++time) cur = skew_apply(space, cur);
    SkewPoint ref = segments[j].start;
    SkewPoint w = cur;
    for (std::size_t t = 0;; ++t) {
      out.max_distance = std::max(out.max_distance, product_distance(space, truncated(w), ref));
      if (t == segments[j].n) break;
      w = skew_apply(space, w);
      ref = skew_apply(space, ref);
    }
  }
  out.verified = out.max_distance <= eps;
  for (std::size_t j = 0; j < out.gaps_F.size(); ++j)
    out.verified = out.verified && out.gaps_F[j] - out.gaps_G[j] == out.extension;
  return out;
}

SkewFactoredTarget::SkewFactoredTarget(std::shared_ptr<const CountTarget> omega,
                                       std::shared_ptr<const CountTarget> fiber)
    : omega_(std::move(omega)), fiber_(std::move(fiber)) {
  require(omega_ && fiber_, "factored target needs both factors");
  if (!omega_->word_independent() || !fiber_->word_independent())
    fail(ErrorKind::Unsupported, "factored skew counts need coinciding generators on both factors");
}

CountValue SkewFactoredTarget::count(const Word& w, double eps, CountKind kind) const {
  const Word a(std::vector<std::uint32_t>(w.size(), 0));
  const auto u = omega_->count(a, eps, kind);
  const auto v = fiber_->count(a, eps, kind);
  CountValue out;
  out.count = u.count * v.count;
  if (kind == CountKind::Separated) {
    out.certified = u.certified && v.certified;
    out.exact = u.exact && v.exact && (u.certified || v.certified);
  } else {
    out.certified = u.certified && v.certified;
    out.exact = u.exact && v.exact && out.certified;
  }
  return out;
}

namespace {

constexpr std::size_t kSkewSampleLimit = 1u << 16;

Metric omega_metric(std::shared_ptr<const SampledSpace> Y, std::size_t depth) {
  return {"seq-weighted-Y", [Y, depth](const Point& a, const Point& b) {
            double s = 0.0, w = 0.5;
            for (std::size_t j = 0; j < depth; ++j, w *= 0.5)
              if (a[j] != b[j]) s += w * Y->dist(static_cast<std::size_t>(a[j]), static_cast<std::size_t>(b[j]));
            return s;
          }};
}

std::vector<Point> symbol_sequences(const std::vector<std::size_t>& symbols, std::size_t depth) {
  std::vector<double> values;
  for (auto s : symbols) values.push_back(static_cast<double>(s));
  return sequence_grid(values, depth);
}

}  // namespace

std::shared_ptr<const SemigroupSystem> omega_shift(const SampledSpace& Y, const std::vector<std::size_t>& symbols,
                                                   std::size_t depth) {
  require(!symbols.empty(), "omega shift needs at least one symbol");
  require(depth >= 1, "omega shift needs depth >= 1");
  for (auto s : symbols) require(s < Y.size(), "symbol outside the Y sample");
  if (word_count(symbols.size(), depth) > kSeparatedExactLimit)
    fail(ErrorKind::Budget, "omega shift with " + std::to_string(symbols.size()) + "^" + std::to_string(depth) +
                                " points exceeds the sample limit " + std::to_string(kSeparatedExactLimit));
  auto Yp = std::make_shared<const SampledSpace>(Y);
  const Metric metric = omega_metric(Yp, depth);
  const double filler = static_cast<double>(symbols.front());
  auto X = std::make_shared<SampledSpace>(symbol_sequences(symbols, depth), metric);
  Generator gen = [filler](std::size_t, const Point& p) {
    Point q(p.begin() + 1, p.end());
    q.push_back(filler);
    return q;
  };
  return std::make_shared<SemigroupSystem>(X, symbol_space(1), gen, false);
}

std::shared_ptr<const SemigroupSystem> materialize_skew(const SemigroupSystem& sys,
                                                        const std::vector<std::size_t>& symbols, std::size_t depth) {
  require(!symbols.empty(), "skew sample needs at least one symbol");
  for (auto s : symbols) require(s < sys.alphabet(), "symbol outside the alphabet");
  const auto omegas = symbol_sequences(symbols, depth);
  const SampledSpace& X = sys.phase();
  if (omegas.size() * X.size() > kSkewSampleLimit)
    fail(ErrorKind::Budget, "materialized skew space would have " + std::to_string(omegas.size() * X.size()) +
                                " points (limit " + std::to_string(kSkewSampleLimit) + ")");
  const auto Yp = sys.params_ptr();
  const Metric dprime = omega_metric(Yp, depth);
  const Metric dx = X.metric();
  const Metric D{"skew-D", [dprime, dx, depth](const Point& a, const Point& b) {
                   const Point xa(a.begin() + static_cast<std::ptrdiff_t>(depth), a.end());
                   const Point xb(b.begin() + static_cast<std::ptrdiff_t>(depth), b.end());
                   return std::max(dprime(a, b), dx(xa, xb));
                 }};
  std::vector<Point> pts;
  pts.reserve(omegas.size() * X.size());
  for (const auto& o : omegas)
    for (const auto& x : X.points()) {
      Point p = o;
      p.insert(p.end(), x.begin(), x.end());
      pts.push_back(std::move(p));
    }
  auto S = std::make_shared<SampledSpace>(std::move(pts), D);
  const double filler = static_cast<double>(symbols.front());
  const Generator& base = sys.generator();
  const bool snap = sys.snap();
  const SemigroupSystem* base_sys = &sys;
  Generator F = [=](std::size_t, const Point& p) {
    const Point x(p.begin() + static_cast<std::ptrdiff_t>(depth), p.end());
    const auto y = static_cast<std::size_t>(p[0]);
    const Point fx = snap ? base_sys->step(y, x) : base(y, x);
    Point q(p.begin() + 1, p.begin() + static_cast<std::ptrdiff_t>(depth));
    q.push_back(filler);
    q.insert(q.end(), fx.begin(), fx.end());
    return q;
  };
  // The generator is only evaluated during tabulation, while `sys` is alive.
  return std::make_shared<SemigroupSystem>(S, symbol_space(1), F, snap);
}

Theorem4Report theorem4_harness(std::shared_ptr<const CountTarget> Z_target, const SampledSpace& Y,
                                const RandomWalkSpec& nu, const std::vector<double>& eps_ladder,
                                const std::vector<std::size_t>& N_ladder, double tol, bool restrict_to_support) {
  require(Z_target != nullptr, "theorem4 harness needs a target");
  validate_ladder(eps_ladder, 3, "eps_ladder");
  validate_time_ladder(N_ladder, "N_ladder");
  if (nu.alphabet() != Y.size()) fail(ErrorKind::Parameter, "walk weights must match the Y sample");
  if (Z_target->alphabet() != Y.size()) fail(ErrorKind::Parameter, "target alphabet must match the Y sample");
  if (!Z_target->word_independent())
    fail(ErrorKind::Unsupported, "theorem4 harness needs coinciding generators on the fiber");
  Theorem4Report rep;
  rep.tol = tol;

  std::vector<std::size_t> support, all(Y.size());
  for (std::size_t i = 0; i < Y.size(); ++i) {
    all[i] = i;
    if (nu.weights[i] > 0.0) support.push_back(i);
  }
  rep.equality = support.size() == Y.size() || restrict_to_support;
  std::vector<Point> supp_pts;
  for (auto i : support) supp_pts.push_back(Y.point(i));
  auto supp_space = std::make_shared<SampledSpace>(supp_pts, Y.metric());

  rep.lhs_report = upper_box_dimension(*supp_space, eps_ladder);
  rep.box_dim = rep.lhs_report.slope;
  const auto g = umdim_subset(*Z_target, nu, eps_ladder, N_ladder);
  rep.umdim_G = g.slope;
  rep.lhs = rep.box_dim + rep.umdim_G;
  for (const auto& f : rep.lhs_report.flags) rep.flags.push_back("box:" + f);
  for (const auto& f : g.flags) rep.flags.push_back("G:" + f);

  const double eps_min = *std::min_element(eps_ladder.begin(), eps_ladder.end());
  rep.omega_depth = truncation_depth(Y.diameter(), eps_min) + N_ladder.back();
  const auto& symbols = restrict_to_support ? support : all;
  auto omega_sys = omega_shift(Y, symbols, rep.omega_depth);
  auto omega_target = SampledTarget::whole(omega_sys);
  auto skew = std::make_shared<SkewFactoredTarget>(omega_target, Z_target);
  rep.rhs_report = umdim_subset(*skew, RandomWalkSpec::uniform(1, nu.seed), eps_ladder, N_ladder);
  rep.rhs = rep.rhs_report.slope;
  for (const auto& f : rep.rhs_report.flags) rep.flags.push_back("F:" + f);

  const auto hom = homogeneity_constant(MeasureOnSpace(std::make_shared<SampledSpace>(Y), nu.weights), eps_ladder,
                                        10000, nu.seed);
  rep.homogeneity_L = hom.L;
  if (!hom.failures.empty()) rep.flags.push_back("homogeneity-zero-mass");
  rep.gap = rep.rhs - rep.lhs;
  rep.holds = rep.equality ? std::fabs(rep.gap) <= tol : rep.gap >= -0.05;
  return rep;
}

}  // namespace mmdim
