#pragma once

#include <span>
#include <vector>

#include "privcache/rational.hpp"

namespace privcache {

/// A (memory, rate) pair: cache size M and broadcast rate R, both normalized
/// by the file size.
struct MemoryRate {
  Rational memory;
  Rational rate;

  friend bool operator==(const MemoryRate&, const MemoryRate&) = default;
};

/// Convex piecewise-linear function given by breakpoints with strictly
/// increasing memory. Defined on [first.memory, last.memory].
class Envelope {
 public:
  explicit Envelope(std::vector<MemoryRate> breakpoints);

  const std::vector<MemoryRate>& breakpoints() const { return breakpoints_; }
  const Rational& min_memory() const { return breakpoints_.front().memory; }
  const Rational& max_memory() const { return breakpoints_.back().memory; }

  /// Linear interpolation between breakpoints. Throws std::domain_error
  /// outside [min_memory, max_memory].
  Rational evaluate(const Rational& memory) const;
  Rational operator()(const Rational& memory) const { return evaluate(memory); }

 private:
  std::vector<MemoryRate> breakpoints_;
};

/// Lower convex hull of `points` as a function of memory. Among points with
/// equal memory only the smallest rate is kept; points on a common chord are
/// dropped so only the chord endpoints remain. Throws std::invalid_argument on
/// an empty input.
Envelope lower_convex_envelope(std::span<const MemoryRate> points);

}  // namespace privcache
