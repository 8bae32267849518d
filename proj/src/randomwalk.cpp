#include "mmdim/randomwalk.hpp"

#include <algorithm>
#include <cmath>

#include "mmdim/error.hpp"
#include "mmdim/parallel.hpp"

namespace mmdim {

RandomWalkSpec::RandomWalkSpec(std::vector<double> w, std::uint64_t s) : weights(std::move(w)), seed(s) {
  require(!weights.empty(), "walk needs at least one symbol");
  double sum = 0.0;
  for (double x : weights) {
    require(x >= 0.0, "walk weights must be nonnegative");
    sum += x;
  }
  require(std::fabs(sum - 1.0) <= 1e-12, "walk weights must sum to 1");
}

RandomWalkSpec RandomWalkSpec::uniform(std::size_t alphabet, std::uint64_t seed) {
  require(alphabet >= 1, "walk needs at least one symbol");
  return RandomWalkSpec(std::vector<double>(alphabet, 1.0 / static_cast<double>(alphabet)), seed);
}

double RandomWalkSpec::word_probability(const Word& w) const {
  double p = 1.0;
  for (auto s : w.symbols) {
    require(s < weights.size(), "symbol outside the walk alphabet");
    p *= weights[s];
  }
  return p;
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t draw) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ draw);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t draw) {
  return static_cast<double>(counter_hash(seed, stream, draw) >> 11) * 0x1.0p-53;
}

std::uint32_t sample_symbol(const RandomWalkSpec& walk, std::uint64_t stream, std::uint64_t draw) {
  const double u = counter_uniform(walk.seed, stream, draw);
  double acc = 0.0;
  std::uint32_t last = 0;
  for (std::size_t y = 0; y < walk.weights.size(); ++y) {
    if (walk.weights[y] <= 0.0) continue;
    last = static_cast<std::uint32_t>(y);
    acc += walk.weights[y];
    if (u < acc) return last;
  }
  return last;
}

Word sample_word(const RandomWalkSpec& walk, std::size_t n, std::uint64_t stream) {
  Word w;
  w.symbols.reserve(n);
  for (std::size_t j = 0; j < n; ++j) w.symbols.push_back(sample_symbol(walk, stream, j));
  return w;
}

ExpectedCount expected_count(const CountTarget& target, const RandomWalkSpec& walk, std::size_t n, double eps,
                             CountKind kind, const AverageBudget& budget, bool keep_words) {
  require(walk.alphabet() == target.alphabet(), "walk alphabet differs from the system alphabet");
  ExpectedCount out;
  if (target.word_independent()) {
    const Word w(std::vector<std::uint32_t>(n, 0));
    const auto v = target.count(w, eps, kind);
    out.mean = v.count;
    out.enumerated = true;
    out.counts_exact = v.exact;
    out.evaluations = 1;
    if (keep_words) out.per_word.emplace_back(w, v.count);
    return out;
  }
  const std::size_t total = word_count(walk.alphabet(), n);
  if (total <= budget.exact_words) {
    std::vector<Word> words;
    for (auto& w : all_words(walk.alphabet(), n))
      if (walk.word_probability(w) > 0.0) words.push_back(std::move(w));
    if (words.size() > budget.max_evaluations) {
      words.resize(budget.max_evaluations);
      out.partial = true;
    }
    std::vector<CountValue> vals(words.size());
    parallel_for(words.size(), [&](std::size_t k) { vals[k] = target.count(words[k], eps, kind); });
    double mass = 0.0;
    for (std::size_t k = 0; k < words.size(); ++k) {
      const double p = walk.word_probability(words[k]);
      out.mean += p * vals[k].count;
      mass += p;
      out.counts_exact = out.counts_exact && vals[k].exact;
      if (keep_words) out.per_word.emplace_back(words[k], vals[k].count);
    }
    if (out.partial && mass > 0.0) out.mean /= mass;
    out.enumerated = !out.partial;
    out.evaluations = words.size();
    return out;
  }
  std::size_t m = budget.mc_samples;
  if (m > budget.max_evaluations) {
    m = budget.max_evaluations;
    out.partial = true;
  }
  require(m >= 2, "Monte Carlo needs at least two samples");
  std::vector<Word> words(m);
  std::vector<CountValue> vals(m);
  parallel_for(m, [&](std::size_t k) {
    words[k] = sample_word(walk, n, k);
    vals[k] = target.count(words[k], eps, kind);
  });
  double sum = 0.0, sq = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sum += vals[k].count;
    out.counts_exact = out.counts_exact && vals[k].exact;
    if (keep_words) out.per_word.emplace_back(words[k], vals[k].count);
  }
  out.mean = sum / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) sq += (vals[k].count - out.mean) * (vals[k].count - out.mean);
  out.stderr_ = std::sqrt(sq / static_cast<double>(m - 1) / static_cast<double>(m));
  out.evaluations = m;
  return out;
}

}  // namespace mmdim
