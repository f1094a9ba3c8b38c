#include "privcache/yma.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "privcache/combinatorics.hpp"
#include "privcache/linear_solve.hpp"

namespace privcache {

std::uint64_t UccParams::subfile_count() const { return binomial_u64(virtual_users(), r); }

void UccParams::validate() const {
  if (files < 1) throw std::invalid_argument("UccParams: need at least one file");
  if (blocks < 1) throw std::invalid_argument("UccParams: need at least one block");
  if (block_length < 1 || block_length > files) {
    throw std::invalid_argument("UccParams: block length must lie in [1, files]");
  }
  if (r < 0 || r > virtual_users()) {
    throw std::invalid_argument("UccParams: r=" + std::to_string(r) + " outside [0, " +
                                std::to_string(virtual_users()) + "]");
  }
  if (packet_size < 1) throw std::invalid_argument("UccParams: packet size must be positive");
}

FileLibrary FileLibrary::random(const PrimeField& field, int files, std::size_t length, std::uint64_t seed) {
  FileLibrary lib(files, length);
  Rng rng = substream(seed, "library");
  for (int n = 0; n < files; ++n) {
    for (std::size_t i = 0; i < length; ++i) lib.at(n, i) = static_cast<Symbol>(rng.below(field.modulus()));
  }
  return lib;
}

const std::vector<std::size_t>& PlacementMap::indices(int user, int file) const {
  if (user < 0 || user >= users() || file < 0 || file >= files_) {
    throw std::out_of_range("PlacementMap: (user, file) out of range");
  }
  return per_user_[user];
}

std::optional<Symbol> StoredSymbols::find(std::size_t index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return std::nullopt;
  return values[it - indices.begin()];
}

std::optional<std::size_t> UccBroadcast::find(std::uint64_t rank) const {
  auto it = std::lower_bound(segments.begin(), segments.end(), rank,
                             [](const Segment& s, std::uint64_t r) { return s.rank < r; });
  if (it == segments.end() || it->rank != rank) return std::nullopt;
  return static_cast<std::size_t>(it - segments.begin());
}

std::size_t UccBroadcast::symbol_count() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.values.size();
  return n;
}

int segment_sign(SegmentSigns signs, std::span<const int> label, int u) {
  if (signs == SegmentSigns::kPlain) return 1;
  const auto pos = std::find(label.begin(), label.end(), u) - label.begin();
  return pos % 2 == 0 ? 1 : -1;
}

std::vector<std::size_t> subfile_indices(const UccParams& params, std::uint64_t rank) {
  std::vector<std::size_t> out(params.packet_size);
  for (std::size_t i = 0; i < params.packet_size; ++i) out[i] = rank * params.packet_size + i;
  return out;
}

PlacementMap yma_placement(const UccParams& params) {
  params.validate();
  const int kv = params.virtual_users();
  std::vector<std::vector<std::size_t>> per_user(kv);
  std::vector<int> label = iota_vector(params.r);
  std::uint64_t rank = 0;
  do {
    for (int u : label) {
      for (std::size_t i = 0; i < params.packet_size; ++i) per_user[u].push_back(rank * params.packet_size + i);
    }
    ++rank;
  } while (next_subset(label, kv));
  return PlacementMap(params.files, std::move(per_user));
}

bool is_restricted(const UccParams& params, std::span<const int> demand) {
  if (static_cast<int>(demand.size()) != params.virtual_users()) {
    throw std::invalid_argument("is_restricted: demand length " + std::to_string(demand.size()) +
                                " differs from " + std::to_string(params.virtual_users()));
  }
  for (int d : demand) {
    if (d < 0 || d >= params.files) throw std::invalid_argument("is_restricted: file index out of range");
  }
  const auto len = static_cast<std::size_t>(params.block_length);
  std::vector<int> reference(demand.begin(), demand.begin() + len);
  std::sort(reference.begin(), reference.end());
  if (std::adjacent_find(reference.begin(), reference.end()) != reference.end()) return false;
  for (int b = 1; b < params.blocks; ++b) {
    std::vector<int> block(demand.begin() + b * len, demand.begin() + (b + 1) * len);
    std::sort(block.begin(), block.end());
    if (block != reference) return false;
  }
  return true;
}

std::vector<int> leaders(const UccParams& params) { return iota_vector(params.block_length); }

std::uint64_t expected_segment_count(const UccParams& params) {
  const int kv = params.virtual_users();
  return binomial_u64(kv, params.r + 1) - binomial_u64(kv - params.block_length, params.r + 1);
}

namespace {

// Label B minus its element at position `skip`.
std::vector<int> without(std::span<const int> label, std::size_t skip) {
  std::vector<int> out;
  out.reserve(label.size() - 1);
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i != skip) out.push_back(label[i]);
  }
  return out;
}

}  // namespace

UccBroadcast yma_encode(const UccParams& params, const PrimeField& field, std::span<const int> demand,
                        const FileLibrary& library, SegmentSigns signs, bool include_all) {
  params.validate();
  if (!is_restricted(params, demand)) {
    throw std::invalid_argument("yma_encode: demand is not in the restricted demand subset");
  }
  if (library.files() < params.files || library.length() != params.file_length()) {
    throw std::invalid_argument("yma_encode: library dimensions do not match the parameters");
  }
  UccBroadcast out;
  out.params = params;
  out.modulus = field.modulus();
  out.signs = signs;
  out.demand.assign(demand.begin(), demand.end());

  const int kv = params.virtual_users();
  if (params.r + 1 > kv) return out;
  const SubsetIndexer small(kv, params.r);
  std::vector<int> label = iota_vector(params.r + 1);
  std::uint64_t rank = 0;
  do {
    if (include_all || label.front() < params.block_length) {
      Segment seg;
      seg.label = label;
      seg.rank = rank;
      seg.values.assign(params.packet_size, 0);
      for (std::size_t j = 0; j < label.size(); ++j) {
        const int u = label[j];
        const std::uint64_t sub = small.rank(without(label, j));
        const auto file = library.file(demand[u]);
        const bool negate = segment_sign(signs, label, u) < 0;
        for (std::size_t i = 0; i < params.packet_size; ++i) {
          const Symbol w = file[sub * params.packet_size + i];
          seg.values[i] = negate ? field.sub(seg.values[i], w) : field.add(seg.values[i], w);
        }
      }
      out.segments.push_back(std::move(seg));
    }
    ++rank;
  } while (next_subset(label, kv));
  return out;
}

CacheSlice cache_slice_for(const UccParams& params, int u, std::span<const int> files,
                           const FileLibrary& library) {
  const PlacementMap placement = yma_placement(params);
  CacheSlice slice;
  for (int f : files) {
    StoredSymbols stored;
    stored.indices = placement.indices(u, f);
    for (std::size_t i : stored.indices) stored.values.push_back(library.at(f, i));
    slice[f] = std::move(stored);
  }
  return slice;
}

const char* to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::kOk: return "ok";
    case DecodeStatus::kMissingCache: return "missing-cache";
    case DecodeStatus::kMissingSegment: return "missing-segment";
    case DecodeStatus::kUnderdetermined: return "underdetermined";
    case DecodeStatus::kInconsistent: return "inconsistent";
    case DecodeStatus::kUnsupported: return "unsupported";
    case DecodeStatus::kInvalidInput: return "invalid-input";
  }
  return "unknown";
}

const char* to_string(DecoderKind kind) {
  return kind == DecoderKind::kLinearSolve ? "linear-solve" : "structural";
}

namespace {

DecodeResult failure(DecodeStatus status, std::string detail) {
  DecodeResult r;
  r.status = status;
  r.detail = std::move(detail);
  return r;
}

// Shared input checks; returns an error result or nullopt.
std::optional<DecodeResult> check_inputs(int u, const UccBroadcast& b) {
  const UccParams& p = b.params;
  try {
    p.validate();
    if (!is_restricted(p, b.demand)) return failure(DecodeStatus::kInvalidInput, "demand not restricted");
  } catch (const std::exception& e) {
    return failure(DecodeStatus::kInvalidInput, e.what());
  }
  if (u < 0 || u >= p.virtual_users()) return failure(DecodeStatus::kInvalidInput, "user out of range");
  for (const auto& s : b.segments) {
    if (s.values.size() != p.packet_size) return failure(DecodeStatus::kInvalidInput, "segment size mismatch");
  }
  return std::nullopt;
}

// Reads one cached packet of `file` for subfile `rank`.
bool read_cached(const CacheSlice& cache, const UccParams& p, int file, std::uint64_t rank,
                 SymbolVector& out) {
  auto it = cache.find(file);
  if (it == cache.end()) return false;
  out.resize(p.packet_size);
  for (std::size_t i = 0; i < p.packet_size; ++i) {
    const auto v = it->second.find(rank * p.packet_size + i);
    if (!v) return false;
    out[i] = *v;
  }
  return true;
}

}  // namespace

DecodeResult decode_linear(int u, const UccBroadcast& b, const CacheSlice& cache) {
  if (auto err = check_inputs(u, b)) return *err;
  const UccParams& p = b.params;
  const PrimeField field(b.modulus);
  const int kv = p.virtual_users();
  const SubsetIndexer small(kv, p.r);
  const std::uint64_t subfiles = small.count();

  std::vector<int> files(b.demand.begin(), b.demand.begin() + p.block_length);
  std::sort(files.begin(), files.end());
  auto file_pos = [&](int f) { return std::lower_bound(files.begin(), files.end(), f) - files.begin(); };

  // Column for every (demanded file, subfile not containing u).
  std::vector<long> column_of_subfile(subfiles, -1);
  std::vector<std::uint64_t> unknown_subfiles;
  for (std::uint64_t j = 0; j < subfiles; ++j) {
    const auto label = small.unrank(j);
    if (!std::binary_search(label.begin(), label.end(), u)) {
      column_of_subfile[j] = static_cast<long>(unknown_subfiles.size());
      unknown_subfiles.push_back(j);
    }
  }
  const std::size_t per_file = unknown_subfiles.size();
  const std::size_t cols = per_file * files.size();

  FieldMatrix a(b.segments.size(), cols);
  FieldMatrix rhs(b.segments.size(), p.packet_size);
  SymbolVector packet;
  for (std::size_t row = 0; row < b.segments.size(); ++row) {
    const Segment& seg = b.segments[row];
    for (std::size_t i = 0; i < p.packet_size; ++i) rhs.at(row, i) = seg.values[i];
    for (std::size_t j = 0; j < seg.label.size(); ++j) {
      const int v = seg.label[j];
      const std::uint64_t sub = small.rank(without(seg.label, j));
      const Symbol coeff = field.reduce(segment_sign(b.signs, seg.label, v));
      if (column_of_subfile[sub] < 0) {
        if (!read_cached(cache, p, b.demand[v], sub, packet)) {
          return failure(DecodeStatus::kMissingCache, "cached subfile unavailable");
        }
        for (std::size_t i = 0; i < p.packet_size; ++i) {
          rhs.at(row, i) = field.sub(rhs.at(row, i), field.mul(coeff, packet[i]));
        }
      } else {
        const std::size_t col = file_pos(b.demand[v]) * per_file + column_of_subfile[sub];
        a.at(row, col) = field.add(a.at(row, col), coeff);
      }
    }
  }

  const int target_file = b.demand[u];
  std::vector<std::size_t> targets(per_file);
  for (std::size_t i = 0; i < per_file; ++i) targets[i] = file_pos(target_file) * per_file + i;
  const SolveResult solved = solve_for(field, std::move(a), std::move(rhs), targets);
  if (solved.status == SolveStatus::kInconsistent) return failure(DecodeStatus::kInconsistent, "no solution");
  if (solved.status == SolveStatus::kUnderdetermined) {
    return failure(DecodeStatus::kUnderdetermined, "requested file not determined");
  }

  DecodeResult out;
  out.file.assign(p.file_length(), 0);
  for (std::uint64_t j = 0; j < subfiles; ++j) {
    if (column_of_subfile[j] < 0) {
      if (!read_cached(cache, p, target_file, j, packet)) {
        return failure(DecodeStatus::kMissingCache, "own subfile missing from cache");
      }
    } else {
      const std::size_t t = column_of_subfile[j];
      packet.assign(solved.solution.row(t).begin(), solved.solution.row(t).end());
    }
    std::copy(packet.begin(), packet.end(), out.file.begin() + j * p.packet_size);
  }
  out.status = DecodeStatus::kOk;
  return out;
}

namespace {

// Rebuilds Y_B for a subset B that avoids the leaders. With C = B u leaders
// and V ranging over the sets picking one requester of each demanded file in
// C (listed in leader order), sum_V sign(V ++ (C \ V)) * Y_{C \ V} = 0, and
// V = leaders is the only choice with C \ V = B.
std::optional<SymbolVector> rebuild_segment(const UccBroadcast& b, const PrimeField& field,
                                            const SubsetIndexer& big, std::span<const int> target) {
  const UccParams& p = b.params;
  std::vector<int> all(target.begin(), target.end());
  for (int l = 0; l < p.block_length; ++l) all.push_back(l);
  std::sort(all.begin(), all.end());

  std::vector<std::vector<int>> candidates(p.block_length);
  for (int l = 0; l < p.block_length; ++l) {
    for (int c : all) {
      if (b.demand[c] == b.demand[l]) candidates[l].push_back(c);
    }
  }

  SymbolVector sum(p.packet_size, 0);
  std::vector<std::size_t> pick(p.block_length, 0);
  int leader_sign = 0;
  while (true) {
    std::vector<int> chosen(p.block_length);
    for (int l = 0; l < p.block_length; ++l) chosen[l] = candidates[l][pick[l]];
    std::vector<int> rest;
    for (int c : all) {
      if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) rest.push_back(c);
    }
    std::vector<int> order = chosen;
    order.insert(order.end(), rest.begin(), rest.end());
    const int sign = permutation_sign(order);
    if (std::equal(rest.begin(), rest.end(), target.begin(), target.end())) {
      leader_sign = sign;
    } else {
      const auto idx = b.find(big.rank(rest));
      if (!idx) return std::nullopt;
      const SymbolVector& y = b.segments[*idx].values;
      for (std::size_t i = 0; i < p.packet_size; ++i) {
        sum[i] = sign > 0 ? field.add(sum[i], y[i]) : field.sub(sum[i], y[i]);
      }
    }
    int l = 0;
    while (l < p.block_length && ++pick[l] == candidates[l].size()) pick[l++] = 0;
    if (l == p.block_length) break;
  }
  // Y_B = -leader_sign * sum
  for (auto& x : sum) x = leader_sign > 0 ? field.neg(x) : x;
  return sum;
}

}  // namespace

DecodeResult decode_structural(int u, const UccBroadcast& b, const CacheSlice& cache) {
  if (auto err = check_inputs(u, b)) return *err;
  const UccParams& p = b.params;
  const PrimeField field(b.modulus);
  if (b.signs == SegmentSigns::kPlain && field.modulus() != 2) {
    return failure(DecodeStatus::kUnsupported, "unsigned segments over odd characteristic");
  }
  const int kv = p.virtual_users();
  const SubsetIndexer small(kv, p.r);
  const SubsetIndexer big(kv, std::min(p.r + 1, kv));
  const int target_file = b.demand[u];

  DecodeResult out;
  out.file.assign(p.file_length(), 0);
  SymbolVector packet;
  for (std::uint64_t j = 0; j < small.count(); ++j) {
    const auto label = small.unrank(j);
    if (std::binary_search(label.begin(), label.end(), u)) {
      if (!read_cached(cache, p, target_file, j, packet)) {
        return failure(DecodeStatus::kMissingCache, "own subfile missing from cache");
      }
      std::copy(packet.begin(), packet.end(), out.file.begin() + j * p.packet_size);
      continue;
    }
    std::vector<int> plus = label;
    plus.insert(std::upper_bound(plus.begin(), plus.end(), u), u);

    SymbolVector y;
    if (const auto idx = b.find(big.rank(plus))) {
      y = b.segments[*idx].values;
    } else if (plus.front() >= p.block_length) {
      auto rebuilt = rebuild_segment(b, field, big, plus);
      if (!rebuilt) return failure(DecodeStatus::kMissingSegment, "leader segment missing");
      y = std::move(*rebuilt);
    } else {
      return failure(DecodeStatus::kMissingSegment, "leader segment missing");
    }

    // W_{d_u, R} = sign(u) * (Y_{R+} - sum_{v != u} sign(v) W_{d_v, R+ \ {v}})
    for (std::size_t k = 0; k < plus.size(); ++k) {
      const int v = plus[k];
      if (v == u) continue;
      if (!read_cached(cache, p, b.demand[v], small.rank(without(plus, k)), packet)) {
        return failure(DecodeStatus::kMissingCache, "interfering subfile missing from cache");
      }
      const bool negative = segment_sign(b.signs, plus, v) < 0;
      for (std::size_t i = 0; i < p.packet_size; ++i) {
        y[i] = negative ? field.add(y[i], packet[i]) : field.sub(y[i], packet[i]);
      }
    }
    if (segment_sign(b.signs, plus, u) < 0) {
      for (auto& x : y) x = field.neg(x);
    }
    std::copy(y.begin(), y.end(), out.file.begin() + j * p.packet_size);
  }
  out.status = DecodeStatus::kOk;
  return out;
}

DecodeResult yma_decode(DecoderKind kind, int u, const UccBroadcast& broadcast, const CacheSlice& cache) {
  return kind == DecoderKind::kLinearSolve ? decode_linear(u, broadcast, cache)
                                           : decode_structural(u, broadcast, cache);
}

}  // namespace privcache
