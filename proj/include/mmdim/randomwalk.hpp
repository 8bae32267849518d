#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "mmdim/counting.hpp"

namespace mmdim {

/// Product walk nu^N with nu given by weights over the Y sample.
struct RandomWalkSpec {
  std::vector<double> weights;
  std::uint64_t seed = 0;

  RandomWalkSpec() = default;
  RandomWalkSpec(std::vector<double> w, std::uint64_t s);
  static RandomWalkSpec uniform(std::size_t alphabet, std::uint64_t seed);
  std::size_t alphabet() const { return weights.size(); }
  double word_probability(const Word& w) const;
};

/// splitmix64 finalizer applied to (seed, stream, draw); the same triple
/// always yields the same value whatever thread asks for it.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t draw);
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t draw);

std::uint32_t sample_symbol(const RandomWalkSpec& walk, std::uint64_t stream, std::uint64_t draw);
/// omega|[1, n] for stream `stream`.
Word sample_word(const RandomWalkSpec& walk, std::size_t n, std::uint64_t stream = 0);

struct AverageBudget {
  std::size_t exact_words = 4096;   // enumerate all words when |Y|^n fits
  std::size_t mc_samples = 200;     // otherwise this many sampled words
  std::size_t max_evaluations = static_cast<std::size_t>(-1);
};

struct ExpectedCount {
  double mean = 0.0;
  double stderr_ = 0.0;
  bool enumerated = false;  // exact average over all words
  bool counts_exact = true; // every underlying count certified
  bool partial = false;     // stopped at max_evaluations
  std::size_t evaluations = 0;
  std::vector<std::pair<Word, double>> per_word;  // filled when requested
};

ExpectedCount expected_count(const CountTarget& target, const RandomWalkSpec& walk, std::size_t n, double eps,
                             CountKind kind, const AverageBudget& budget = {}, bool keep_words = false);

}  // namespace mmdim
