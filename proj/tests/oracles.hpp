// Brute-force reference computations for the unit tests. Everything here is
// written from the definitions and shares no code with the library beyond
// the sample tables.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mmdim/randomwalk.hpp"
#include "mmdim/semigroup.hpp"

namespace oracle {

using mmdim::SemigroupSystem;
using mmdim::Word;

/// Orbit indices x, f_{i_1} x, f_{i_2} f_{i_1} x, ... from the step table.
inline std::vector<std::size_t> orbit(const SemigroupSystem& sys, const Word& w, std::size_t i) {
  std::vector<std::size_t> out{i};
  for (auto s : w.symbols) out.push_back(sys.step_index(s, out.back()));
  return out;
}

inline double bowen(const SemigroupSystem& sys, const Word& w, std::size_t a, std::size_t b) {
  const auto oa = orbit(sys, w, a), ob = orbit(sys, w, b);
  double d = 0.0;
  for (std::size_t t = 0; t < oa.size(); ++t) d = std::max(d, sys.phase().dist(oa[t], ob[t]));
  return d;
}

/// Largest subset of Z with pairwise d_w > eps, over all 2^|Z| subsets.
inline std::size_t max_separated(const SemigroupSystem& sys, const Word& w, double eps,
                                 const std::vector<std::size_t>& Z) {
  const std::size_t m = Z.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t a = 0; a < m && ok; ++a)
      for (std::size_t b = a + 1; b < m && ok; ++b)
        if ((mask >> a & 1u) && (mask >> b & 1u)) ok = bowen(sys, w, Z[a], Z[b]) > eps;
    if (ok) best = size;
  }
  return best;
}

/// Fewest centers from Z whose balls (closed, or open when `strict`) cover Z.
inline std::size_t min_cover(const SemigroupSystem& sys, const Word& w, double eps, const std::vector<std::size_t>& Z,
                             bool strict) {
  const std::size_t m = Z.size();
  if (m == 0) return 0;
  std::vector<std::uint32_t> reach(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double d = bowen(sys, w, Z[a], Z[b]);
      if (strict ? d < eps : d <= eps) reach[a] |= 1u << b;
    }
  const std::uint32_t all = (1u << m) - 1;
  std::size_t best = m;
  for (std::uint32_t mask = 1; mask <= all; ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    std::uint32_t covered = 0;
    for (std::size_t a = 0; a < m; ++a)
      if (mask >> a & 1u) covered |= reach[a];
    if (covered == all) best = size;
  }
  return best;
}

inline std::size_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t k, std::size_t n) {
  return static_cast<std::size_t>(mmdim::counter_hash(seed, stream, k) % n);
}

inline Word random_word(std::uint64_t seed, std::uint64_t stream, std::size_t len, std::size_t alphabet) {
  Word w;
  for (std::size_t t = 0; t < len; ++t) w.symbols.push_back(static_cast<std::uint32_t>(draw(seed, stream, t, alphabet)));
  return w;
}

/// Distinct sorted indices below M, between 1 and max_size of them.
inline std::vector<std::size_t> random_subset(std::uint64_t seed, std::uint64_t stream, std::size_t max_size,
                                              std::size_t M) {
  std::vector<std::size_t> Z;
  const std::size_t m = 1 + draw(seed, stream, 0, std::min(max_size, M));
  for (std::size_t a = 0; Z.size() < m; ++a) {
    const std::size_t z = draw(seed, stream, a + 1, M);
    if (std::find(Z.begin(), Z.end(), z) == Z.end()) Z.push_back(z);
  }
  std::sort(Z.begin(), Z.end());
  return Z;
}

}  // namespace oracle
