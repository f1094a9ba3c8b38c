#pragma once

#include <functional>
#include <string>
#include <vector>

#include "privcache/envelope.hpp"
#include "privcache/rational.hpp"

namespace privcache {

/// Where a tradeoff point comes from.
struct Provenance {
  enum class Kind { kAchievable, kCorner, kEndpoint };
  Kind kind = Kind::kEndpoint;
  int r = 0;  // kAchievable
  int s = 0;  // kCorner
  int t = 0;  // kCorner

  std::string to_string() const;  // "achievable r=1", "corner s=2 t=1", "endpoint"
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TradeoffPoint {
  Rational memory;
  Rational rate;
  Provenance provenance;

  MemoryRate pair() const { return {memory, rate}; }
};

/// Checked (N, K, L); throws std::invalid_argument unless N, K, L >= 1 and L <= N.
struct SystemShape {
  int files = 0;
  int users = 0;
  int demands_per_user = 0;

  int distinct_files() const;
  int max_s() const;  // min(floor(N/L), K)
  void validate() const;
};

/// (M_r, R_r) of the private scheme for r = 0..K*N-bar.
std::vector<TradeoffPoint> achievable_points(const SystemShape& shape);

/// Lower convex envelope of the achievable points (memory sharing), on [0, N].
Envelope achievable_envelope(const SystemShape& shape);

/// R >= intercept + slope * M.
struct ConverseLine {
  int s = 0;
  Rational lambda;
  int t = 0;
  Rational intercept;
  Rational slope;

  Rational at(const Rational& memory) const { return intercept + slope * memory; }
};

/// Whether (s, t, lambda) satisfies L(s(s-1) - t(t-1) + 2 lambda s) <= 2(N - (t-1)L) t.
bool converse_condition(const SystemShape& shape, int s, int t, const Rational& lambda);

/// The line for (s, lambda) with the minimal feasible t. Throws
/// std::invalid_argument when s is outside [1, min(floor(N/L), K)] or lambda
/// outside [0, 1].
ConverseLine converse_line(const SystemShape& shape, int s, const Rational& lambda);

/// (M_{s,t}, R_{s,t}) for 1 <= t <= s <= max_s, then the endpoint (0, L floor(N-bar/L)).
std::vector<TradeoffPoint> converse_corner_points(const SystemShape& shape);

Envelope converse_corner_envelope(const SystemShape& shape);

/// lambda in {0, 1/steps, ..., 1}.
std::vector<Rational> lambda_grid(int steps = 8);

/// `points` equispaced memories from 0 to N inclusive.
std::vector<Rational> memory_grid(const SystemShape& shape, int points = 101);

struct DominanceViolation {
  Rational memory;
  Rational lower;
  Rational upper;
  std::string bound;  // "corner envelope" or "line s=.. t=.. lambda=.."
};

struct DominanceReport {
  bool pass = true;
  std::size_t comparisons = 0;
  std::vector<DominanceViolation> violations;
  /// Grid lines that exceed the corner envelope somewhere; reported, not failed.
  std::size_t lines_above_corner_envelope = 0;
};

/// Hook applied to the achievable points before the envelope is built.
using PointMutation = std::function<void(std::vector<TradeoffPoint>&)>;

/// Checks, exactly, that the corner envelope and every converse line on the
/// lambda grid lie weakly below the achievable envelope at each grid memory.
/// Throws std::invalid_argument if a grid memory lies outside [0, N].
DominanceReport verify_envelope_dominance(const SystemShape& shape, const std::vector<Rational>& grid,
                                          const std::vector<Rational>& lambdas = lambda_grid(),
                                          const PointMutation& mutation = {});

struct GapCertificate {
  SystemShape shape;
  Rational max_ratio;
  Rational witness_memory;
  Rational witness_upper;
  Rational witness_lower;
  /// Max ratio over every breakpoint of both envelopes, which bounds the
  /// ratio on all of [0, N) since it is monotone between breakpoints.
  Rational sup_ratio;
  Rational sup_witness_memory;
  bool within_six = false;
};

/// Max of achievable / corner envelope over the corner memories other than
/// (1,1) and M = 0. 0/0 counts as 1; x/0 with x > 0 throws std::logic_error.
GapCertificate gap_certificate(const SystemShape& shape);

struct SweepRange {
  int max_files = 8;
  int max_users = 4;
};

/// Certificates for every N in [1, max_files], K in [1, max_users], L in
/// [1, N], ordered by (N, K, L), computed on `threads` workers.
std::vector<GapCertificate> gap_sweep(const SweepRange& range, unsigned threads = 1);

}  // namespace privcache
