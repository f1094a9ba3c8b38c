#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "privcache/rational.hpp"
#include "privcache/rng.hpp"

namespace privcache {

/// C(n, k); zero when k < 0 or k > n.
BigInt binomial(std::int64_t n, std::int64_t k);

/// C(n, k) in 64 bits. Throws std::overflow_error if it does not fit.
std::uint64_t binomial_u64(std::int64_t n, std::int64_t k);

/// Ranks and unranks k-subsets of {0, ..., n-1} in lexicographic order
/// ({0,1,..,k-1} has rank 0). Subsets are sorted index vectors.
class SubsetIndexer {
 public:
  SubsetIndexer(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t count() const { return count_; }

  std::uint64_t rank(std::span<const int> subset) const;
  std::vector<int> unrank(std::uint64_t rank) const;

 private:
  int n_;
  int k_;
  std::uint64_t count_;
  // table_[a][b] = C(a, b) for a <= n, b <= k
  std::vector<std::vector<std::uint64_t>> table_;
};

/// Advances a sorted k-subset of {0..n-1} to its lexicographic successor.
/// Returns false (leaving the input unchanged) on the last subset.
bool next_subset(std::vector<int>& subset, int n);

/// All k-subsets of `ground` in lexicographic order of positions; `ground` is
/// sorted first. Empty when k > |ground| or k < 0.
std::vector<std::vector<int>> subsets_of_size(std::span<const int> ground, int k);

/// All permutations of `ground`, lexicographic over the sorted ground set.
std::vector<std::vector<int>> permutations(std::span<const int> ground);

/// Uniform random permutation of `ground` (Fisher-Yates).
std::vector<int> sample_permutation(std::span<const int> ground, Rng& rng);

/// {0, 1, ..., n-1}
std::vector<int> iota_vector(int n);

/// Sign (+1/-1) of the permutation taking sorted(seq) to seq. Entries must be
/// distinct.
int permutation_sign(std::span<const int> seq);

}  // namespace privcache
