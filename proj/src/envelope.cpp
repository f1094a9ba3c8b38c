#include "privcache/envelope.hpp"

#include <algorithm>
#include <stdexcept>

namespace privcache {

namespace {

// Positive when a -> b -> c turns counter-clockwise.
Rational cross(const MemoryRate& a, const MemoryRate& b, const MemoryRate& c) {
  return (b.memory - a.memory) * (c.rate - a.rate) - (b.rate - a.rate) * (c.memory - a.memory);
}

}  // namespace

Envelope::Envelope(std::vector<MemoryRate> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw std::invalid_argument("Envelope: no breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (breakpoints_[i].memory <= breakpoints_[i - 1].memory) {
      throw std::invalid_argument("Envelope: breakpoints must have strictly increasing memory");
    }
  }
}

Rational Envelope::evaluate(const Rational& memory) const {
  if (memory < min_memory() || memory > max_memory()) {
    throw std::domain_error("Envelope: memory " + to_string(memory) + " outside [" +
                            to_string(min_memory()) + ", " + to_string(max_memory()) + "]");
  }
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), memory,
                             [](const MemoryRate& p, const Rational& m) { return p.memory < m; });
  if (it->memory == memory) return it->rate;
  const MemoryRate& hi = *it;
  const MemoryRate& lo = *(it - 1);
  return lo.rate + (hi.rate - lo.rate) * (memory - lo.memory) / (hi.memory - lo.memory);
}

Envelope lower_convex_envelope(std::span<const MemoryRate> points) {
  if (points.empty()) throw std::invalid_argument("lower_convex_envelope: empty input");
  std::vector<MemoryRate> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const MemoryRate& a, const MemoryRate& b) {
    return a.memory < b.memory || (a.memory == b.memory && a.rate < b.rate);
  });

  std::vector<MemoryRate> hull;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i].memory == sorted[i - 1].memory) continue;
    const MemoryRate& p = sorted[i];
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  return Envelope(std::move(hull));
}

}  // namespace privcache
