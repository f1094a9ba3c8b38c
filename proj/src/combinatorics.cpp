#include "privcache/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace privcache {

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::domain_error("binomial: n must be nonnegative");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;  // exact: out is C(n-k+i, i) here
  }
  return out;
}

std::uint64_t binomial_u64(std::int64_t n, std::int64_t k) {
  const BigInt b = binomial(n, k);
  if (b > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("binomial does not fit in 64 bits");
  }
  return b.convert_to<std::uint64_t>();
}

SubsetIndexer::SubsetIndexer(int n, int k) : n_(n), k_(k) {
  if (n < 0) throw std::invalid_argument("SubsetIndexer: negative ground size");
  count_ = (k < 0 || k > n) ? 0 : binomial_u64(n, k);
  const int cols = std::max(k, 0) + 1;
  table_.assign(n + 1, std::vector<std::uint64_t>(cols, 0));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b < cols; ++b) {
      if (b == 0) {
        table_[a][b] = 1;
      } else if (a > 0) {
        table_[a][b] = table_[a - 1][b - 1] + table_[a - 1][b];
      }
    }
  }
}

std::uint64_t SubsetIndexer::rank(std::span<const int> subset) const {
  if (static_cast<int>(subset.size()) != k_) throw std::invalid_argument("rank: wrong subset size");
  // Count the subsets that precede `subset`: at each position i, every smaller
  // choice c (greater than the previous element) contributes C(n-1-c, k-1-i).
  std::uint64_t r = 0;
  int prev = -1;
  for (int i = 0; i < k_; ++i) {
    const int e = subset[i];
    if (e <= prev || e >= n_) throw std::invalid_argument("rank: subset not sorted or out of range");
    for (int c = prev + 1; c < e; ++c) r += table_[n_ - 1 - c][k_ - 1 - i];
    prev = e;
  }
  return r;
}

std::vector<int> SubsetIndexer::unrank(std::uint64_t rank) const {
  if (rank >= count_) throw std::out_of_range("unrank: rank out of range");
  std::vector<int> out;
  out.reserve(k_);
  int c = 0;
  for (int i = 0; i < k_; ++i) {
    while (true) {
      const std::uint64_t block = table_[n_ - 1 - c][k_ - 1 - i];
      if (rank < block) break;
      rank -= block;
      ++c;
    }
    out.push_back(c);
    ++c;
  }
  return out;
}

bool next_subset(std::vector<int>& subset, int n) {
  const int k = static_cast<int>(subset.size());
  int i = k - 1;
  while (i >= 0 && subset[i] == n - k + i) --i;
  if (i < 0) return false;
  ++subset[i];
  for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  return true;
}

std::vector<std::vector<int>> subsets_of_size(std::span<const int> ground, int k) {
  std::vector<int> sorted(ground.begin(), ground.end());
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> pos = iota_vector(k);
  do {
    std::vector<int> s;
    s.reserve(k);
    for (int p : pos) s.push_back(sorted[p]);
    out.push_back(std::move(s));
  } while (next_subset(pos, n));
  return out;
}

std::vector<std::vector<int>> permutations(std::span<const int> ground) {
  std::vector<int> cur(ground.begin(), ground.end());
  std::sort(cur.begin(), cur.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(cur);
  } while (std::next_permutation(cur.begin(), cur.end()));
  return out;
}

std::vector<int> sample_permutation(std::span<const int> ground, Rng& rng) {
  std::vector<int> out(ground.begin(), ground.end());
  for (std::size_t i = out.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(out[i - 1], out[j]);
  }
  return out;
}

std::vector<int> iota_vector(int n) {
  std::vector<int> out(std::max(n, 0));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

int permutation_sign(std::span<const int> seq) {
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] > seq[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace privcache
