#include "mmdim/counting.hpp"

#include <algorithm>
#include <numeric>

#include "mmdim/cover.hpp"
#include "mmdim/error.hpp"

namespace mmdim {

const char* kind_name(CountKind k) {
  switch (k) {
    case CountKind::Separated: return "separated";
    case CountKind::Spanning: return "spanning";
    case CountKind::Cover: return "cover";
  }
  return "?";
}

namespace {

struct Trajectories {
  std::size_t len = 0;
  std::vector<std::size_t> idx;  // Z.size() * len
};

Trajectories trajectories(const SemigroupSystem& sys, const Word& w, const std::vector<std::size_t>& Z) {
  check_word(sys, w);
  Trajectories t;
  t.len = w.size() + 1;
  t.idx.resize(Z.size() * t.len);
  for (std::size_t a = 0; a < Z.size(); ++a) {
    std::size_t i = Z[a];
    t.idx[a * t.len] = i;
    for (std::size_t k = 0; k < w.size(); ++k) t.idx[a * t.len + k + 1] = i = sys.step_index(w[k], i);
  }
  return t;
}

BitMatrix bowen_relation(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                         bool strict) {
  const auto t = trajectories(sys, w, Z);
  const SampledSpace& X = sys.phase();
  return build_relation(Z.size(), [&](std::size_t a, std::size_t b) {
    const std::size_t* ta = &t.idx[a * t.len];
    const std::size_t* tb = &t.idx[b * t.len];
    for (std::size_t k = 0; k < t.len; ++k) {
      const double d = X.dist(ta[k], tb[k]);
      if (strict ? !(d < eps) : d > eps) return false;
    }
    return true;
  });
}

void check_args(const SemigroupSystem& sys, double eps, const std::vector<std::size_t>& Z) {
  if (!(eps > 0.0)) fail(ErrorKind::Parameter, "eps must be positive");
  for (auto z : Z)
    if (z >= sys.phase().size()) fail(ErrorKind::Parameter, "target index " + std::to_string(z) + " outside the sample");
}

CountResult to_result(const SelectResult& sel, const std::vector<std::size_t>& Z) {
  CountResult r;
  r.count = sel.chosen.size();
  for (auto c : sel.chosen) r.witness.push_back(Z[c]);
  r.exact = sel.exact;
  r.bound = sel.exact ? r.count : sel.bound;
  r.certified = sel.certified;
  return r;
}

CountResult dominating(const BitMatrix& close, const std::vector<std::size_t>& Z, CountMode mode, const char* what) {
  const std::size_t limit = mode == CountMode::Greedy ? 0 : kSpanningExactLimit;
  auto res = to_result(min_dominating(close, limit), Z);
  if (mode == CountMode::Exact && !res.exact)
    fail(ErrorKind::Budget, std::string("exact ") + what + " count needs |Z| <= " + std::to_string(kSpanningExactLimit) +
                                " (got " + std::to_string(Z.size()) + "); use greedy mode");
  return res;
}

}  // namespace

CountResult max_separated(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                          CountMode mode) {
  check_args(sys, eps, Z);
  if (Z.empty()) return {0, {}, true, 0, true};
  const BitMatrix close = bowen_relation(sys, w, eps, Z, false);
  if (mode == CountMode::Greedy) {
    SelectResult sel;
    sel.chosen = greedy_independent(close);
    sel.bound = Z.size();
    return to_result(sel, Z);
  }
  if (mode == CountMode::Exact && Z.size() > kSeparatedExactLimit)
    fail(ErrorKind::Budget, "exact separated count needs |Z| <= " + std::to_string(kSeparatedExactLimit) +
                                "; use greedy mode");
  const std::size_t budget = Z.size() <= kSeparatedExactLimit ? kSeparatedNodeBudget : 0;
  auto res = to_result(max_independent(close, budget), Z);
  if (mode == CountMode::Exact && !res.exact)
    fail(ErrorKind::Budget, "exact separated count not certified within the search budget; use greedy mode");
  return res;
}

CountResult min_spanning(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                         CountMode mode) {
  check_args(sys, eps, Z);
  if (Z.empty()) return {0, {}, true, 0, true};
  return dominating(bowen_relation(sys, w, eps, Z, false), Z, mode, "spanning");
}

CountResult min_open_cover(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                           CountMode mode) {
  check_args(sys, eps, Z);
  if (Z.empty()) return {0, {}, true, 0, true};
  return dominating(bowen_relation(sys, w, eps, Z, true), Z, mode, "cover");
}

SandwichReport sandwich_check(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z) {
  SandwichReport rep;
  rep.r = min_spanning(sys, w, eps, Z, CountMode::Exact).count;
  rep.s = max_separated(sys, w, eps, Z, CountMode::Exact).count;
  rep.r_half = min_spanning(sys, w, eps / 2.0, Z, CountMode::Exact).count;
  rep.holds = rep.r <= rep.s && rep.s <= rep.r_half;
  return rep;
}

std::vector<std::size_t> ball_members(const SemigroupSystem& sys, const Word& w, std::size_t center, double radius) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sys.phase().size(); ++i)
    if (bowen_distance(sys, w, center, i) < radius) out.push_back(i);
  return out;
}

std::vector<std::size_t> disjoint_subfamily(const SemigroupSystem& sys, const std::vector<BowenBall>& balls) {
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return balls[a].w.size() < balls[b].w.size(); });
  std::vector<char> taken(sys.phase().size(), 0);
  std::vector<std::size_t> chosen;
  for (auto b : order) {
    const auto mem = ball_members(sys, balls[b].w, balls[b].center, balls[b].eps);
    if (std::any_of(mem.begin(), mem.end(), [&](std::size_t i) { return taken[i] != 0; })) continue;
    for (auto i : mem) taken[i] = 1;
    chosen.push_back(b);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

SubfamilyCheck verify_subfamily(const SemigroupSystem& sys, const std::vector<BowenBall>& balls,
                                const std::vector<std::size_t>& chosen) {
  SubfamilyCheck out;
  const std::size_t n = sys.phase().size();
  std::vector<int> owner(n, -1);
  out.disjoint = true;
  std::vector<char> dilated(n, 0);
  for (auto c : chosen) {
    for (auto i : ball_members(sys, balls[c].w, balls[c].center, balls[c].eps)) {
      if (owner[i] >= 0) out.disjoint = false;
      owner[i] = static_cast<int>(c);
    }
    for (auto i : ball_members(sys, balls[c].w, balls[c].center, 3.0 * balls[c].eps)) dilated[i] = 1;
  }
  std::vector<char> in_union(n, 0);
  for (const auto& b : balls)
    for (auto i : ball_members(sys, b.w, b.center, b.eps)) in_union[i] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (in_union[i] && !dilated[i]) out.uncovered.push_back(i);
  out.covers = out.uncovered.empty();
  return out;
}

SampledTarget::SampledTarget(std::shared_ptr<const SemigroupSystem> sys, std::vector<std::size_t> Z, CountMode mode)
    : sys_(std::move(sys)), Z_(std::move(Z)), mode_(mode) {
  require(sys_ != nullptr, "target without a system");
  for (auto z : Z_) require(z < sys_->phase().size(), "target index outside the sample");
  word_independent_ = true;
  for (std::size_t y = 1; y < sys_->alphabet() && word_independent_; ++y)
    for (std::size_t i = 0; i < sys_->phase().size(); ++i)
      if (sys_->step_index(y, i) != sys_->step_index(0, i)) {
        word_independent_ = false;
        break;
      }
}

std::shared_ptr<SampledTarget> SampledTarget::whole(std::shared_ptr<const SemigroupSystem> sys, CountMode mode) {
  std::vector<std::size_t> Z(sys->phase().size());
  std::iota(Z.begin(), Z.end(), 0);
  return std::make_shared<SampledTarget>(std::move(sys), std::move(Z), mode);
}

CountValue SampledTarget::count(const Word& w, double eps, CountKind kind) const {
  const Word key_word = word_independent_ ? Word(std::vector<std::uint32_t>(w.size(), 0)) : w;
  const auto key = std::make_tuple(key_word, eps, static_cast<int>(kind));
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  CountResult r;
  switch (kind) {
    case CountKind::Separated: r = max_separated(*sys_, key_word, eps, Z_, mode_); break;
    case CountKind::Spanning: r = min_spanning(*sys_, key_word, eps, Z_, mode_); break;
    case CountKind::Cover: r = min_open_cover(*sys_, key_word, eps, Z_, mode_); break;
  }
  CountValue v{static_cast<double>(r.count), r.exact, r.certified};
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(key, v);
  return v;
}

}  // namespace mmdim
