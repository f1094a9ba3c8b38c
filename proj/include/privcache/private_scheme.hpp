#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "privcache/field.hpp"
#include "privcache/rational.hpp"
#include "privcache/rng.hpp"
#include "privcache/yma.hpp"

namespace privcache {

/// (N, K, L) demand-private system run on top of the restricted-demand YMA
/// scheme with parameter r. The number of distinct files per round,
/// min(N, K*L), is always derived.
struct SchemeParams {
  int files = 0;             // N
  int users = 0;             // K
  int demands_per_user = 0;  // L
  int r = 0;
  PrimeField field{};
  std::size_t packet_size = 1;

  int distinct_files() const { return std::min(files, users * demands_per_user); }
  int virtual_users() const { return users * distinct_files(); }
  UccParams ucc() const;
  std::size_t file_length() const { return ucc().file_length(); }

  /// Throws std::invalid_argument naming the violated precondition.
  void validate() const;
};

/// K rows of L pairwise-distinct file indices.
using DemandMatrix = std::vector<std::vector<int>>;

/// Throws std::invalid_argument if D is not in the demand set for `params`.
void validate_demand(const SchemeParams& params, const DemandMatrix& demand);

/// Every demand matrix for (N, K, L), rows enumerated lexicographically.
std::vector<DemandMatrix> all_demand_matrices(int files, int users, int demands_per_user);

/// Server-side placement randomness: a file relabeling and one tuple of L
/// distinct virtual slots in [0, min(N,KL)) per user.
struct PlacementRandomness {
  std::vector<int> permutation;           // P: file n is stored under label P[n]
  std::vector<std::vector<int>> slots;    // S_k
};

/// Delivery randomness for one demand matrix.
struct DeliveryRandomness {
  std::vector<int> superset;  // T, sorted
  std::vector<int> expanded;  // Q~, length K * min(N,KL)
};

/// Cache of one real user: per file label i, the symbols of the file stored
/// under label i, together with the user's slot tuple.
struct CacheState {
  int user = 0;
  std::vector<StoredSymbols> labeled;  // indexed by label in [0, N)
  std::vector<int> slots;              // S_k

  std::size_t symbol_count() const;
};

/// The broadcast of the private scheme: the YMA broadcast for the permuted
/// expanded demand, which travels inside it.
struct PrivateBroadcast {
  UccBroadcast ucc;

  const std::vector<int>& permuted_demand() const { return ucc.demand; }
};

/// The N-bar subsets of [N] containing every requested file, lexicographic.
std::vector<std::vector<int>> feasible_supersets(const SchemeParams& params, const DemandMatrix& demand);

/// All tuples of L distinct slots from [N-bar].
std::vector<std::vector<int>> all_slot_tuples(const SchemeParams& params);

/// All blocks that are permutations of `superset` with row[l] at position
/// slots[l] for every l.
std::vector<std::vector<int>> pinned_blocks(std::span<const int> superset, std::span<const int> row,
                                            std::span<const int> slots);

/// Draws P and every S_k from labeled substreams of `seed`.
PlacementRandomness sample_placement_randomness(const SchemeParams& params, std::uint64_t seed);

/// Draws T uniformly from the feasible supersets and every block of Q~
/// uniformly among the pinned blocks, each from its own substream.
DeliveryRandomness sample_delivery_randomness(const SchemeParams& params, const DemandMatrix& demand,
                                              const PlacementRandomness& placement, std::uint64_t seed);

/// Places every user's cache: label P[n] holds the symbols of W_n that the
/// virtual users k*N-bar + S_{k,l} store.
std::vector<CacheState> private_placement(const SchemeParams& params, const FileLibrary& library,
                                          const PlacementRandomness& randomness);

/// Cache size of a slot assignment, normalized by F.
Rational cache_size_of(const SchemeParams& params, const PlacementRandomness& randomness);

/// Maximum normalized cache size over every user and every slot tuple.
Rational worst_case_cache_size(const SchemeParams& params);

/// P~ with entries P[q~_u].
std::vector<int> permute_demand(std::span<const int> permutation, std::span<const int> expanded);

/// Relabeled library: row P[n] is W_n.
FileLibrary relabel_library(const FileLibrary& library, std::span<const int> permutation);

PrivateBroadcast private_delivery(const SchemeParams& params, const FileLibrary& library,
                                  const DemandMatrix& demand, const PlacementRandomness& placement,
                                  const DeliveryRandomness& delivery);

/// Broadcast symbols normalized by F (the permuted demand is side
/// information and not counted).
Rational measured_rate(const PrivateBroadcast& broadcast);

/// User k recovers its l-th requested file from the broadcast and its own
/// cache only, by acting as virtual user k*N-bar + S_{k,l}.
DecodeResult private_decode(int user, int slot, const PrivateBroadcast& broadcast, const CacheState& cache,
                            DecoderKind kind = DecoderKind::kLinearSolve);

/// Outcome of one full placement/delivery/decoding round.
struct RunRecord {
  std::uint64_t seed = 0;
  SchemeParams params;
  DemandMatrix demand;
  PlacementRandomness placement;
  DeliveryRandomness delivery;
  PrivateBroadcast broadcast;
  Rational memory;
  Rational rate;
  /// verdicts[k][l]: decode status for user k, slot l.
  std::vector<std::vector<DecodeStatus>> verdicts;
  /// Whether the decoded file equals the requested library row.
  std::vector<std::vector<bool>> correct;
  bool all_correct = false;
};

/// Runs the scheme for one demand with all randomness derived from `seed`.
/// Also cross-checks the structural decoder when `cross_check` is set; a
/// disagreement marks the decode incorrect.
RunRecord simulate_run(const SchemeParams& params, const FileLibrary& library, const DemandMatrix& demand,
                       std::uint64_t seed, DecoderKind kind = DecoderKind::kLinearSolve,
                       bool cross_check = false);

/// Demand matrix drawn uniformly from the demand set using substream "demand".
DemandMatrix sample_demand(const SchemeParams& params, std::uint64_t seed);

}  // namespace privcache
