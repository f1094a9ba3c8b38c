#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace privcache {

/// Seedable 64-bit generator. Bounded draws use rejection sampling on the raw
/// engine output so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Independent stream derived from (seed, label, index) by hashing. Every
/// random choice in a run draws from its own labeled stream, so one seed
/// replays the whole run.
Rng substream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

}  // namespace privcache
