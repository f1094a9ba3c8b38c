#include "privcache/private_scheme.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "privcache/combinatorics.hpp"

namespace privcache {

UccParams SchemeParams::ucc() const {
  UccParams p;
  p.files = files;
  p.blocks = users;
  p.block_length = distinct_files();
  p.r = r;
  p.packet_size = packet_size;
  return p;
}

void SchemeParams::validate() const {
  if (files < 1) throw std::invalid_argument("N must be at least 1");
  if (users < 1) throw std::invalid_argument("K must be at least 1");
  if (demands_per_user < 1) throw std::invalid_argument("L must be at least 1");
  if (demands_per_user > files) throw std::invalid_argument("L must not exceed N");
  if (r < 0 || r > virtual_users()) {
    throw std::invalid_argument("r=" + std::to_string(r) + " outside [0, K*min(N,KL)] = [0, " +
                                std::to_string(virtual_users()) + "]");
  }
  ucc().validate();
}

void validate_demand(const SchemeParams& params, const DemandMatrix& demand) {
  if (static_cast<int>(demand.size()) != params.users) {
    throw std::invalid_argument("demand matrix must have K rows");
  }
  for (const auto& row : demand) {
    if (static_cast<int>(row.size()) != params.demands_per_user) {
      throw std::invalid_argument("every demand row must have L entries");
    }
    for (int d : row) {
      if (d < 0 || d >= params.files) throw std::invalid_argument("demanded file index out of range");
    }
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("a user requests the same file twice");
    }
  }
}

namespace {

// Ordered tuples of `length` distinct elements of [n], lexicographic.
std::vector<std::vector<int>> distinct_tuples(int n, int length) {
  std::vector<std::vector<int>> out;
  const auto all = iota_vector(n);
  for (const auto& subset : subsets_of_size(all, length)) {
    for (auto& perm : permutations(subset)) out.push_back(std::move(perm));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> first_n(std::vector<int> v, int n) {
  v.resize(n);
  return v;
}

}  // namespace

std::vector<DemandMatrix> all_demand_matrices(int files, int users, int demands_per_user) {
  const auto rows = distinct_tuples(files, demands_per_user);
  std::vector<DemandMatrix> out;
  std::vector<std::size_t> pick(users, 0);
  while (true) {
    DemandMatrix d(users);
    for (int k = 0; k < users; ++k) d[k] = rows[pick[k]];
    out.push_back(std::move(d));
    int k = users - 1;
    while (k >= 0 && ++pick[k] == rows.size()) pick[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<std::vector<int>> feasible_supersets(const SchemeParams& params, const DemandMatrix& demand) {
  validate_demand(params, demand);
  std::vector<int> requested;
  for (const auto& row : demand) requested.insert(requested.end(), row.begin(), row.end());
  std::sort(requested.begin(), requested.end());
  requested.erase(std::unique(requested.begin(), requested.end()), requested.end());

  std::vector<int> others;
  for (int n = 0; n < params.files; ++n) {
    if (!std::binary_search(requested.begin(), requested.end(), n)) others.push_back(n);
  }
  const int missing = params.distinct_files() - static_cast<int>(requested.size());
  std::vector<std::vector<int>> out;
  for (const auto& extra : subsets_of_size(others, missing)) {
    std::vector<int> set = requested;
    set.insert(set.end(), extra.begin(), extra.end());
    std::sort(set.begin(), set.end());
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> all_slot_tuples(const SchemeParams& params) {
  return distinct_tuples(params.distinct_files(), params.demands_per_user);
}

std::vector<std::vector<int>> pinned_blocks(std::span<const int> superset, std::span<const int> row,
                                            std::span<const int> slots) {
  const std::size_t len = superset.size();
  if (row.size() != slots.size()) throw std::invalid_argument("pinned_blocks: row and slots differ in length");
  std::vector<int> rest;
  for (int f : superset) {
    if (std::find(row.begin(), row.end(), f) == row.end()) rest.push_back(f);
  }
  if (rest.size() + row.size() != len) throw std::invalid_argument("pinned_blocks: row not inside superset");
  std::vector<bool> pinned(len, false);
  for (int s : slots) {
    if (s < 0 || static_cast<std::size_t>(s) >= len || pinned[s]) {
      throw std::invalid_argument("pinned_blocks: invalid slot tuple");
    }
    pinned[s] = true;
  }
  std::vector<std::vector<int>> out;
  for (const auto& order : permutations(rest)) {
    std::vector<int> block(len);
    for (std::size_t l = 0; l < slots.size(); ++l) block[slots[l]] = row[l];
    std::size_t next = 0;
    for (std::size_t i = 0; i < len; ++i) {
      if (!pinned[i]) block[i] = order[next++];
    }
    out.push_back(std::move(block));
  }
  return out;
}

PlacementRandomness sample_placement_randomness(const SchemeParams& params, std::uint64_t seed) {
  params.validate();
  PlacementRandomness out;
  Rng perm_rng = substream(seed, "perm");
  out.permutation = sample_permutation(iota_vector(params.files), perm_rng);
  const auto slots = iota_vector(params.distinct_files());
  for (int k = 0; k < params.users; ++k) {
    Rng rng = substream(seed, "slots", k);
    out.slots.push_back(first_n(sample_permutation(slots, rng), params.demands_per_user));
  }
  return out;
}

DeliveryRandomness sample_delivery_randomness(const SchemeParams& params, const DemandMatrix& demand,
                                              const PlacementRandomness& placement, std::uint64_t seed) {
  const auto supersets = feasible_supersets(params, demand);
  DeliveryRandomness out;
  Rng set_rng = substream(seed, "superset");
  out.superset = supersets[set_rng.below(supersets.size())];
  const int nbar = params.distinct_files();
  for (int k = 0; k < params.users; ++k) {
    const auto& row = demand[k];
    const auto& slots = placement.slots[k];
    std::vector<int> rest;
    for (int f : out.superset) {
      if (std::find(row.begin(), row.end(), f) == row.end()) rest.push_back(f);
    }
    Rng rng = substream(seed, "block", k);
    const auto shuffled = sample_permutation(rest, rng);
    std::vector<int> block(nbar, -1);
    for (std::size_t l = 0; l < slots.size(); ++l) block[slots[l]] = row[l];
    std::size_t next = 0;
    for (int i = 0; i < nbar; ++i) {
      if (block[i] < 0) block[i] = shuffled[next++];
    }
    out.expanded.insert(out.expanded.end(), block.begin(), block.end());
  }
  return out;
}

namespace {

std::vector<std::size_t> union_of_indices(const PlacementMap& placement, int nbar, int user,
                                          std::span<const int> slots) {
  std::vector<std::size_t> out;
  for (int s : slots) {
    const auto& idx = placement.indices(user * nbar + s, 0);
    out.insert(out.end(), idx.begin(), idx.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::size_t CacheState::symbol_count() const {
  std::size_t n = 0;
  for (const auto& s : labeled) n += s.size();
  return n;
}

std::vector<CacheState> private_placement(const SchemeParams& params, const FileLibrary& library,
                                          const PlacementRandomness& randomness) {
  params.validate();
  if (library.files() != params.files || library.length() != params.file_length()) {
    throw std::invalid_argument("private_placement: library dimensions do not match the parameters");
  }
  const PlacementMap placement = yma_placement(params.ucc());
  const int nbar = params.distinct_files();
  std::vector<CacheState> caches;
  for (int k = 0; k < params.users; ++k) {
    CacheState cache;
    cache.user = k;
    cache.slots = randomness.slots[k];
    cache.labeled.resize(params.files);
    const auto indices = union_of_indices(placement, nbar, k, cache.slots);
    for (int n = 0; n < params.files; ++n) {
      StoredSymbols& stored = cache.labeled[randomness.permutation[n]];
      stored.indices = indices;
      stored.values.reserve(indices.size());
      for (std::size_t i : indices) stored.values.push_back(library.at(n, i));
    }
    caches.push_back(std::move(cache));
  }
  return caches;
}

Rational cache_size_of(const SchemeParams& params, const PlacementRandomness& randomness) {
  params.validate();
  const PlacementMap placement = yma_placement(params.ucc());
  const int nbar = params.distinct_files();
  std::size_t largest = 0;
  for (int k = 0; k < params.users; ++k) {
    largest = std::max(largest, union_of_indices(placement, nbar, k, randomness.slots[k]).size());
  }
  return Rational(BigInt(largest) * params.files, BigInt(params.file_length()));
}

Rational worst_case_cache_size(const SchemeParams& params) {
  params.validate();
  const PlacementMap placement = yma_placement(params.ucc());
  const int nbar = params.distinct_files();
  std::size_t largest = 0;
  for (int k = 0; k < params.users; ++k) {
    for (const auto& slots : all_slot_tuples(params)) {
      largest = std::max(largest, union_of_indices(placement, nbar, k, slots).size());
    }
  }
  return Rational(BigInt(largest) * params.files, BigInt(params.file_length()));
}

std::vector<int> permute_demand(std::span<const int> permutation, std::span<const int> expanded) {
  std::vector<int> out;
  out.reserve(expanded.size());
  for (int q : expanded) out.push_back(permutation[q]);
  return out;
}

FileLibrary relabel_library(const FileLibrary& library, std::span<const int> permutation) {
  FileLibrary out(library.files(), library.length());
  for (int n = 0; n < library.files(); ++n) {
    std::copy(library.file(n).begin(), library.file(n).end(), out.file(permutation[n]).begin());
  }
  return out;
}

PrivateBroadcast private_delivery(const SchemeParams& params, const FileLibrary& library,
                                  const DemandMatrix& demand, const PlacementRandomness& placement,
                                  const DeliveryRandomness& delivery) {
  validate_demand(params, demand);
  PrivateBroadcast out;
  const auto permuted = permute_demand(placement.permutation, delivery.expanded);
  out.ucc = yma_encode(params.ucc(), params.field, permuted, relabel_library(library, placement.permutation));
  return out;
}

Rational measured_rate(const PrivateBroadcast& broadcast) {
  return Rational(BigInt(broadcast.ucc.symbol_count()), BigInt(broadcast.ucc.params.file_length()));
}

DecodeResult private_decode(int user, int slot, const PrivateBroadcast& broadcast, const CacheState& cache,
                            DecoderKind kind) {
  const UccParams& p = broadcast.ucc.params;
  DecodeResult bad;
  bad.status = DecodeStatus::kInvalidInput;
  if (user < 0 || user >= p.blocks || cache.user != user) {
    bad.detail = "cache does not belong to the decoding user";
    return bad;
  }
  if (slot < 0 || slot >= static_cast<int>(cache.slots.size())) {
    bad.detail = "demand slot out of range";
    return bad;
  }
  if (static_cast<int>(broadcast.ucc.demand.size()) != p.virtual_users()) {
    bad.detail = "broadcast demand has the wrong length";
    return bad;
  }
  const int u = user * p.block_length + cache.slots[slot];
  const PlacementMap placement = yma_placement(p);

  // Z_{k, p~_i, l} for the labels requested in block 0.
  CacheSlice slice;
  for (int i = 0; i < p.block_length; ++i) {
    const int label = broadcast.ucc.demand[i];
    if (label < 0 || label >= static_cast<int>(cache.labeled.size())) {
      bad.detail = "broadcast names a label outside the cache";
      return bad;
    }
    const StoredSymbols& held = cache.labeled[label];
    StoredSymbols part;
    for (std::size_t idx : placement.indices(u, label)) {
      const auto v = held.find(idx);
      if (!v) {
        DecodeResult r;
        r.status = DecodeStatus::kMissingCache;
        r.detail = "cache lacks a symbol of its virtual user";
        return r;
      }
      part.indices.push_back(idx);
      part.values.push_back(*v);
    }
    slice[label] = std::move(part);
  }
  return yma_decode(kind, u, broadcast.ucc, slice);
}

DemandMatrix sample_demand(const SchemeParams& params, std::uint64_t seed) {
  params.validate();
  DemandMatrix d;
  const auto files = iota_vector(params.files);
  for (int k = 0; k < params.users; ++k) {
    Rng rng = substream(seed, "demand", k);
    d.push_back(first_n(sample_permutation(files, rng), params.demands_per_user));
  }
  return d;
}

RunRecord simulate_run(const SchemeParams& params, const FileLibrary& library, const DemandMatrix& demand,
                       std::uint64_t seed, DecoderKind kind, bool cross_check) {
  params.validate();
  validate_demand(params, demand);
  RunRecord rec;
  rec.seed = seed;
  rec.params = params;
  rec.demand = demand;
  rec.placement = sample_placement_randomness(params, seed);
  rec.delivery = sample_delivery_randomness(params, demand, rec.placement, seed);
  const auto caches = private_placement(params, library, rec.placement);
  rec.broadcast = private_delivery(params, library, demand, rec.placement, rec.delivery);
  rec.memory = cache_size_of(params, rec.placement);
  rec.rate = measured_rate(rec.broadcast);
  rec.all_correct = true;
  const DecoderKind other = kind == DecoderKind::kLinearSolve ? DecoderKind::kStructural : DecoderKind::kLinearSolve;
  for (int k = 0; k < params.users; ++k) {
    rec.verdicts.emplace_back();
    rec.correct.emplace_back();
    for (int l = 0; l < params.demands_per_user; ++l) {
      const DecodeResult res = private_decode(k, l, rec.broadcast, caches[k], kind);
      const auto want = library.file(demand[k][l]);
      bool ok = res.ok() && std::equal(res.file.begin(), res.file.end(), want.begin(), want.end());
      if (ok && cross_check) {
        const DecodeResult alt = private_decode(k, l, rec.broadcast, caches[k], other);
        ok = alt.ok() && alt.file == res.file;
      }
      rec.verdicts.back().push_back(res.status);
      rec.correct.back().push_back(ok);
      rec.all_correct = rec.all_correct && ok;
    }
  }
  return rec;
}

}  // namespace privcache
