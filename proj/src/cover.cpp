#include "mmdim/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>

#include "mmdim/error.hpp"
#include "mmdim/parallel.hpp"

namespace mmdim {

namespace {

using Bits = std::vector<std::uint64_t>;

bool any(const Bits& b) {
  for (auto w : b)
    if (w) return true;
  return false;
}

std::size_t first_bit(const Bits& b) {
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(b[w]));
  return std::numeric_limits<std::size_t>::max();
}

void clear_bit(Bits& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= (std::uint64_t{1} << (i % 64)); }
bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; }

Bits full_bits(std::size_t n) {
  Bits b((n + 63) / 64, ~std::uint64_t{0});
  if (n % 64) b.back() = (std::uint64_t{1} << (n % 64)) - 1;
  if (n == 0) b.clear();
  return b;
}

std::size_t popcount_and(const std::uint64_t* a, const Bits& b) {
  std::size_t c = 0;
  for (std::size_t w = 0; w < b.size(); ++w) c += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  return c;
}

// Max clique in the "separated" graph (complement of close) by colour-bounded
// branch and bound.
class MaxClique {
 public:
  MaxClique(const BitMatrix& sep, std::size_t budget, std::vector<std::size_t> best)
      : sep_(sep), budget_(budget), best_(std::move(best)) {}

  bool run() {
    Bits all = full_bits(sep_.size());
    std::vector<std::size_t> cur;
    expand(all, cur);
    return !aborted_;
  }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void expand(Bits R, std::vector<std::size_t>& cur) {
    if (aborted_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> colour;
    Bits U = R;
    std::size_t c = 0;
    while (any(U)) {
      ++c;
      Bits Q = U;
      while (any(Q)) {
        const std::size_t v = first_bit(Q);
        clear_bit(Q, v);
        clear_bit(U, v);
        const std::uint64_t* nb = sep_.row(v);
        for (std::size_t w = 0; w < Q.size(); ++w) Q[w] &= ~nb[w];
        order.push_back(v);
        colour.push_back(c);
      }
    }
    for (std::size_t k = order.size(); k-- > 0;) {
      if (cur.size() + colour[k] <= best_.size()) return;
      const std::size_t v = order[k];
      cur.push_back(v);
      Bits next(R.size());
      const std::uint64_t* nb = sep_.row(v);
      for (std::size_t w = 0; w < R.size(); ++w) next[w] = R[w] & nb[w];
      if (!any(next)) {
        if (cur.size() > best_.size()) {
          best_ = cur;
          std::sort(best_.begin(), best_.end());
        }
      } else {
        expand(std::move(next), cur);
      }
      cur.pop_back();
      clear_bit(R, v);
      if (aborted_) return;
    }
  }

  const BitMatrix& sep_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<std::size_t> best_;
};

}  // namespace

BitMatrix::BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), rows_(n * ((n + 63) / 64), 0) {}

BitMatrix build_relation(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& close) {
  BitMatrix m(n);
  // Each row is filled by one task; j < i entries are mirrored afterwards.
  parallel_for(n, [&](std::size_t i) {
    std::uint64_t* row = m.row(i);
    for (std::size_t j = i + 1; j < n; ++j)
      if (close(i, j)) row[j / 64] |= (std::uint64_t{1} << (j % 64));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m.get(i, j)) m.set(j, i);
  return m;
}

std::vector<std::size_t> greedy_independent(const BitMatrix& close) {
  const std::size_t n = close.size();
  Bits blocked(close.words(), 0);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (test_bit(blocked, i)) continue;
    out.push_back(i);
    const std::uint64_t* r = close.row(i);
    for (std::size_t w = 0; w < blocked.size(); ++w) blocked[w] |= r[w];
  }
  return out;
}

SelectResult max_independent(const BitMatrix& close, std::size_t node_budget) {
  const std::size_t n = close.size();
  SelectResult res;
  if (n == 0) {
    res.exact = true;
    return res;
  }
  res.chosen = greedy_independent(close);

  // Greedy clique cover: any independent set meets each clique at most once.
  Bits uncovered = full_bits(n);
  std::size_t cliques = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!test_bit(uncovered, i)) continue;
    ++cliques;
    clear_bit(uncovered, i);
    Bits cand(close.words());
    const std::uint64_t* ri = close.row(i);
    for (std::size_t w = 0; w < cand.size(); ++w) cand[w] = ri[w] & uncovered[w];
    while (any(cand)) {
      const std::size_t j = first_bit(cand);
      clear_bit(uncovered, j);
      const std::uint64_t* rj = close.row(j);
      for (std::size_t w = 0; w < cand.size(); ++w) cand[w] &= rj[w];
      clear_bit(cand, j);
    }
  }
  res.bound = cliques;
  if (cliques == res.chosen.size()) {
    res.exact = true;
    res.certified = true;
    return res;
  }
  if (node_budget == 0) return res;

  BitMatrix sep(n);
  const Bits all = full_bits(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t* c = close.row(i);
    std::uint64_t* s = sep.row(i);
    for (std::size_t w = 0; w < all.size(); ++w) s[w] = ~c[w] & all[w];
    s[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }
  MaxClique mc(sep, node_budget, res.chosen);
  const bool done = mc.run();
  res.chosen = mc.best();
  res.exact = done;
  if (done) res.bound = res.chosen.size();
  return res;
}

namespace {

bool dominate_dfs(const std::vector<std::uint32_t>& masks, const std::vector<std::vector<std::size_t>>& by_elem,
                  std::uint32_t covered, std::uint32_t full, std::size_t depth, std::size_t max_size,
                  std::vector<std::size_t>& pick) {
  if (covered == full) return true;
  if (depth == 0) return false;
  const std::size_t remaining = static_cast<std::size_t>(std::popcount(full & ~covered));
  if (remaining > depth * max_size) return false;
  const std::size_t e = static_cast<std::size_t>(std::countr_zero(full & ~covered));
  for (std::size_t c : by_elem[e]) {
    pick.push_back(c);
    if (dominate_dfs(masks, by_elem, covered | masks[c], full, depth - 1, max_size, pick)) return true;
    pick.pop_back();
  }
  return false;
}

// Greedy 2-packing: closed neighbourhoods pairwise disjoint, so every
// dominating set needs one distinct member per packed point.
std::size_t packing_number(const BitMatrix& close) {
  const std::size_t n = close.size();
  Bits used(close.words(), 0);
  std::size_t packing = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Bits nb(close.row(i), close.row(i) + close.words());
    set_bit(nb, i);
    bool free = true;
    for (std::size_t w = 0; w < nb.size() && free; ++w)
      if (nb[w] & used[w]) free = false;
    if (!free) continue;
    ++packing;
    for (std::size_t w = 0; w < nb.size(); ++w) used[w] |= nb[w];
  }
  return packing;
}

}  // namespace

SelectResult min_dominating(const BitMatrix& close, std::size_t exact_limit) {
  const std::size_t n = close.size();
  SelectResult res;
  if (n == 0) {
    res.exact = true;
    return res;
  }
  if (n <= exact_limit && n <= 32) {
    std::vector<std::uint32_t> masks(n, 0);
    std::vector<std::vector<std::size_t>> by_elem(n);
    std::size_t max_size = 0;
    for (std::size_t i = 0; i < n; ++i) {
      masks[i] = std::uint32_t{1} << i;
      for (std::size_t j = 0; j < n; ++j)
        if (close.get(i, j)) masks[i] |= std::uint32_t{1} << j;
      max_size = std::max<std::size_t>(max_size, static_cast<std::size_t>(std::popcount(masks[i])));
    }
    for (std::size_t e = 0; e < n; ++e)
      for (std::size_t c = 0; c < n; ++c)
        if (masks[c] >> e & 1u) by_elem[e].push_back(c);
    const std::uint32_t full = n == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::size_t> pick;
      if (dominate_dfs(masks, by_elem, 0, full, k, max_size, pick)) {
        std::sort(pick.begin(), pick.end());
        res.chosen = pick;
        res.exact = true;
        res.bound = k;
        res.certified = packing_number(close) == k;
        return res;
      }
    }
  }

  // Max-coverage greedy with lazy gain updates.
  Bits uncovered = full_bits(n);
  auto gain_of = [&](std::size_t i) {
    std::size_t g = popcount_and(close.row(i), uncovered);
    if (test_bit(uncovered, i)) ++g;
    return g;
  };
  using Item = std::pair<std::size_t, std::size_t>;  // (gain, n - index) so ties favour low index
  std::priority_queue<Item> pq;
  for (std::size_t i = 0; i < n; ++i) pq.push({gain_of(i), n - i});
  std::size_t left = n;
  while (left > 0) {
    auto [g, key] = pq.top();
    pq.pop();
    const std::size_t i = n - key;
    const std::size_t now = gain_of(i);
    if (now != g) {
      if (now > 0) pq.push({now, key});
      continue;
    }
    res.chosen.push_back(i);
    const std::uint64_t* r = close.row(i);
    for (std::size_t w = 0; w < uncovered.size(); ++w) uncovered[w] &= ~r[w];
    clear_bit(uncovered, i);
    left -= now;
  }
  std::sort(res.chosen.begin(), res.chosen.end());

  res.bound = packing_number(close);
  res.exact = res.certified = res.bound == res.chosen.size();
  return res;
}

CoverSolution weighted_cover_exact(const std::vector<CoverCandidate>& cands, std::uint64_t universe) {
  CoverSolution sol;
  std::vector<std::size_t> elems;
  for (std::size_t b = 0; b < 64; ++b)
    if (universe >> b & 1u) elems.push_back(b);
  const std::size_t m = elems.size();
  if (m > 20) fail(ErrorKind::Budget, "exact weighted cover limited to 20 elements");
  if (m == 0) {
    sol.exact = true;
    return sol;
  }
  std::vector<std::uint32_t> local(cands.size(), 0);
  for (std::size_t c = 0; c < cands.size(); ++c)
    for (std::size_t k = 0; k < m; ++k)
      if (cands[c].mask >> elems[k] & 1u) local[c] |= std::uint32_t{1} << k;
  std::vector<std::vector<std::size_t>> by_elem(m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t c = 0; c < cands.size(); ++c)
      if (local[c] >> k & 1u) by_elem[k].push_back(c);

  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> memo(std::size_t{1} << m, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::int32_t> choice(std::size_t{1} << m, -1);
  std::function<double(std::uint32_t)> best = [&](std::uint32_t covered) -> double {
    if (covered == full) return 0.0;
    if (!std::isnan(memo[covered])) return memo[covered];
    const std::size_t e = static_cast<std::size_t>(std::countr_zero(full & ~covered));
    double b = inf;
    std::int32_t arg = -1;
    for (std::size_t c : by_elem[e]) {
      const double v = cands[c].weight + best(covered | local[c]);
      if (v < b) {
        b = v;
        arg = static_cast<std::int32_t>(c);
      }
    }
    memo[covered] = b;
    choice[covered] = arg;
    return b;
  };
  sol.cost = best(0);
  sol.exact = true;
  if (std::isinf(sol.cost)) {
    sol.feasible = false;
    return sol;
  }
  std::uint32_t cov = 0;
  while (cov != full) {
    const std::int32_t c = choice[cov];
    sol.chosen.push_back(static_cast<std::size_t>(c));
    cov |= local[static_cast<std::size_t>(c)];
  }
  return sol;
}

CoverSolution weighted_cover_greedy(const std::vector<std::vector<std::uint32_t>>& members,
                                    const std::vector<double>& weights, std::size_t universe_size) {
  CoverSolution sol;
  std::vector<char> covered(universe_size, 0);
  std::size_t left = universe_size;
  auto gain_of = [&](std::size_t c) {
    std::size_t g = 0;
    for (auto e : members[c]) g += covered[e] ? 0 : 1;
    return g;
  };
  struct Item {
    double ratio;
    std::size_t gain;
    std::size_t idx;
    bool operator<(const Item& o) const {
      if (ratio != o.ratio) return ratio > o.ratio;  // min-heap on ratio
      return idx > o.idx;
    }
  };
  std::priority_queue<Item> pq;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const std::size_t g = gain_of(c);
    if (g > 0) pq.push({weights[c] / static_cast<double>(g), g, c});
  }
  while (left > 0) {
    if (pq.empty()) {
      sol.feasible = false;
      return sol;
    }
    Item it = pq.top();
    pq.pop();
    const std::size_t g = gain_of(it.idx);
    if (g == 0) continue;
    if (g != it.gain) {
      pq.push({weights[it.idx] / static_cast<double>(g), g, it.idx});
      continue;
    }
    sol.chosen.push_back(it.idx);
    sol.cost += weights[it.idx];
    for (auto e : members[it.idx])
      if (!covered[e]) {
        covered[e] = 1;
        --left;
      }
  }
  return sol;
}

}  // namespace mmdim
