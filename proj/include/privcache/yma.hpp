#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "privcache/field.hpp"

namespace privcache {

/// Shape of the non-private single-demand scheme with restricted demands:
/// `files` files and blocks * block_length virtual users, where every demand
/// vector splits into `blocks` blocks of `block_length` entries, each block a
/// permutation of one common set of block_length files. Files are cut into
/// C(virtual_users, r) subfiles of `packet_size` symbols each.
struct UccParams {
  int files = 0;
  int blocks = 0;
  int block_length = 0;
  int r = 0;
  std::size_t packet_size = 1;

  int virtual_users() const { return blocks * block_length; }
  std::uint64_t subfile_count() const;
  std::size_t file_length() const { return subfile_count() * packet_size; }

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

/// N x F matrix of field symbols, row n holding file n.
class FileLibrary {
 public:
  FileLibrary() = default;
  FileLibrary(int files, std::size_t length) : files_(files), length_(length), data_(files * length, 0) {}

  static FileLibrary random(const PrimeField& field, int files, std::size_t length, std::uint64_t seed);

  int files() const { return files_; }
  std::size_t length() const { return length_; }

  std::span<Symbol> file(int n) { return {data_.data() + n * length_, length_}; }
  std::span<const Symbol> file(int n) const { return {data_.data() + n * length_, length_}; }
  Symbol at(int n, std::size_t i) const { return data_[n * length_ + i]; }
  Symbol& at(int n, std::size_t i) { return data_[n * length_ + i]; }

  friend bool operator==(const FileLibrary&, const FileLibrary&) = default;

 private:
  int files_ = 0;
  std::size_t length_ = 0;
  std::vector<Symbol> data_;
};

/// Uncoded placement: for every (virtual user u, file n) the set of symbol
/// indices of file n that u stores verbatim. The subfile placement stores the
/// same index set for every file.
class PlacementMap {
 public:
  PlacementMap(int files, std::vector<std::vector<std::size_t>> per_user)
      : files_(files), per_user_(std::move(per_user)) {}

  int users() const { return static_cast<int>(per_user_.size()); }
  int files() const { return files_; }
  const std::vector<std::size_t>& indices(int user, int file) const;

 private:
  int files_;
  std::vector<std::vector<std::size_t>> per_user_;
};

/// Symbols of one file held verbatim by a cache: sorted indices with values.
struct StoredSymbols {
  std::vector<std::size_t> indices;
  SymbolVector values;

  std::optional<Symbol> find(std::size_t index) const;
  std::size_t size() const { return indices.size(); }
  friend bool operator==(const StoredSymbols&, const StoredSymbols&) = default;
};

/// Cache content a virtual user holds for the files it decodes from, keyed by
/// file label.
using CacheSlice = std::map<int, StoredSymbols>;

/// How subfiles are combined into a segment Y_B.
///  kAlternating: Y_B = sum_{j} (-1)^j W_{d_{b_j}, B \ {b_j}} over sorted B.
///  kPlain: Y_B = sum_{u in B} W_{d_u, B \ {u}}.
/// The two coincide in characteristic 2. Over odd characteristic only the
/// alternating form keeps the segments of non-leader subsets in the span of
/// the transmitted ones.
enum class SegmentSigns { kAlternating, kPlain };

struct Segment {
  std::vector<int> label;  // sorted (r+1)-subset of virtual users
  std::uint64_t rank = 0;  // lexicographic rank among (r+1)-subsets
  SymbolVector values;     // packet_size symbols
};

struct UccBroadcast {
  UccParams params;
  std::uint32_t modulus = PrimeField::kDefaultModulus;
  SegmentSigns signs = SegmentSigns::kAlternating;
  std::vector<int> demand;
  std::vector<Segment> segments;  // ascending rank

  /// Position of the segment with the given label rank, if transmitted.
  std::optional<std::size_t> find(std::uint64_t rank) const;
  std::size_t symbol_count() const;
};

/// Sign of user `u` inside the sorted label under `signs`.
int segment_sign(SegmentSigns signs, std::span<const int> label, int u);

/// Index range of subfile `rank` inside a file: [rank*packet, (rank+1)*packet).
std::vector<std::size_t> subfile_indices(const UccParams& params, std::uint64_t rank);

/// Subfile placement: user u stores every subfile whose r-subset label contains u.
PlacementMap yma_placement(const UccParams& params);

/// Throws std::invalid_argument if the length differs from virtual_users()
/// or an entry is outside [0, files).
bool is_restricted(const UccParams& params, std::span<const int> demand);

/// The leader set: positions [0, block_length), one per distinct demanded file.
std::vector<int> leaders(const UccParams& params);

/// Number of transmitted segments, C(Kv, r+1) - C(Kv - block_length, r+1).
std::uint64_t expected_segment_count(const UccParams& params);

/// Sends Y_B for every (r+1)-subset B that meets the leader set. With
/// `include_all` it also sends the redundant non-leader segments (used to
/// check the redundancy elimination). Only the block-0 files are read.
UccBroadcast yma_encode(const UccParams& params, const PrimeField& field, std::span<const int> demand,
                        const FileLibrary& library, SegmentSigns signs = SegmentSigns::kAlternating,
                        bool include_all = false);

/// Restricts the placement of user u to the given files of a library.
CacheSlice cache_slice_for(const UccParams& params, int u, std::span<const int> files,
                           const FileLibrary& library);

enum class DecodeStatus {
  kOk,
  kMissingCache,     // a symbol the decoder needs is not in the cache
  kMissingSegment,   // a segment the decoder needs was not transmitted
  kUnderdetermined,  // the linear system leaves the requested file free
  kInconsistent,     // the linear system has no solution
  kUnsupported,      // decoder does not apply to this broadcast
  kInvalidInput,
};

const char* to_string(DecodeStatus status);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kInvalidInput;
  SymbolVector file;
  std::string detail;

  bool ok() const { return status == DecodeStatus::kOk; }
};

enum class DecoderKind { kLinearSolve, kStructural };

const char* to_string(DecoderKind kind);

/// Reference decoder: the uncached subfiles of the demanded files are
/// unknowns, every transmitted segment is one equation. Succeeds iff the
/// requested file is uniquely determined.
DecodeResult decode_linear(int u, const UccBroadcast& broadcast, const CacheSlice& cache);

/// Direct decoder. Each missing subfile W_{d_u, R} is read off Y_{R u {u}}
/// after cancelling cached terms; segments of non-leader subsets are rebuilt
/// from transmitted ones through the signed leader identity.
DecodeResult decode_structural(int u, const UccBroadcast& broadcast, const CacheSlice& cache);

DecodeResult yma_decode(DecoderKind kind, int u, const UccBroadcast& broadcast, const CacheSlice& cache);

}  // namespace privcache
