#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mmdim {

/// Dense symmetric boolean matrix stored as bit rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n);
  std::size_t size() const { return n_; }
  std::size_t words() const { return words_; }
  void set(std::size_t i, std::size_t j) { rows_[i * words_ + j / 64] |= (std::uint64_t{1} << (j % 64)); }
  bool get(std::size_t i, std::size_t j) const { return (rows_[i * words_ + j / 64] >> (j % 64)) & 1u; }
  const std::uint64_t* row(std::size_t i) const { return rows_.data() + i * words_; }
  std::uint64_t* row(std::size_t i) { return rows_.data() + i * words_; }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Builds the "close" relation close(i, j) for i != j, in parallel.
BitMatrix build_relation(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& close);

struct SelectResult {
  std::vector<std::size_t> chosen;
  bool exact = false;
  std::size_t bound = 0;  // certified bound on the optimum (upper for packing, lower for cover)
  /// The cheap certificate (clique cover for packing, 2-packing for cover)
  /// matches the count. Strong products of certified factors stay exact.
  bool certified = false;
};

/// Largest set of indices that are pairwise not close. Greedy in index order
/// first; a greedy clique cover gives an upper bound; when the two differ a
/// bitset branch-and-bound runs up to `node_budget` nodes.
SelectResult max_independent(const BitMatrix& close, std::size_t node_budget);

/// Greedy independent set in index order (no certificate).
std::vector<std::size_t> greedy_independent(const BitMatrix& close);

/// Smallest set of indices whose closed neighbourhoods cover everything.
/// Exact search when n <= exact_limit, otherwise max-coverage greedy with
/// lowest-index ties.
SelectResult min_dominating(const BitMatrix& close, std::size_t exact_limit);

/// Weighted set cover over a universe of at most 64 elements: minimise the
/// total weight of chosen candidates whose masks cover `universe`.
struct CoverCandidate {
  std::uint64_t mask = 0;
  double weight = 0.0;
};
struct CoverSolution {
  double cost = 0.0;
  std::vector<std::size_t> chosen;
  bool exact = false;
  bool feasible = true;
};
CoverSolution weighted_cover_exact(const std::vector<CoverCandidate>& cands, std::uint64_t universe);

/// Greedy weighted set cover over an arbitrary universe (candidate element
/// lists); picks the lowest weight per newly covered element.
CoverSolution weighted_cover_greedy(const std::vector<std::vector<std::uint32_t>>& members,
                                    const std::vector<double>& weights, std::size_t universe_size);

}  // namespace mmdim
