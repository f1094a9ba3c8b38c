#include "privcache/tradeoff.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "privcache/combinatorics.hpp"

namespace privcache {

std::string Provenance::to_string() const {
  switch (kind) {
    case Kind::kAchievable:
      return "achievable r=" + std::to_string(r);
    case Kind::kCorner:
      return "corner s=" + std::to_string(s) + " t=" + std::to_string(t);
    case Kind::kEndpoint:
      break;
  }
  return "endpoint";
}

int SystemShape::distinct_files() const { return std::min(files, users * demands_per_user); }

int SystemShape::max_s() const { return std::min(files / demands_per_user, users); }

void SystemShape::validate() const {
  if (files < 1) throw std::invalid_argument("N must be at least 1");
  if (users < 1) throw std::invalid_argument("K must be at least 1");
  if (demands_per_user < 1) throw std::invalid_argument("L must be at least 1");
  if (demands_per_user > files) throw std::invalid_argument("L must not exceed N");
}

std::vector<TradeoffPoint> achievable_points(const SystemShape& shape) {
  shape.validate();
  const int nbar = shape.distinct_files();
  const int kv = shape.users * nbar;
  const int l = shape.demands_per_user;
  std::vector<TradeoffPoint> out;
  for (int r = 0; r <= kv; ++r) {
    const BigInt all = binomial(kv, r);
    Rational m(all - binomial(kv - l, r), all);
    m *= shape.files;
    Rational rate(binomial(kv, r + 1) - binomial(kv - nbar, r + 1), all);
    out.push_back({m, rate, {Provenance::Kind::kAchievable, r, 0, 0}});
  }
  return out;
}

namespace {

Envelope envelope_of(const std::vector<TradeoffPoint>& points) {
  std::vector<MemoryRate> pairs;
  for (const auto& p : points) pairs.push_back(p.pair());
  return lower_convex_envelope(pairs);
}

}  // namespace

Envelope achievable_envelope(const SystemShape& shape) { return envelope_of(achievable_points(shape)); }

bool converse_condition(const SystemShape& shape, int s, int t, const Rational& lambda) {
  const int l = shape.demands_per_user;
  const Rational lhs = l * (Rational(s * (s - 1) - t * (t - 1)) + 2 * lambda * s);
  const Rational rhs = Rational(2 * (shape.files - (t - 1) * l) * t);
  return lhs <= rhs;
}

ConverseLine converse_line(const SystemShape& shape, int s, const Rational& lambda) {
  shape.validate();
  if (s < 1 || s > shape.max_s()) {
    throw std::invalid_argument("s = " + std::to_string(s) + " outside [1, " + std::to_string(shape.max_s()) + "]");
  }
  if (lambda < 0 || lambda > 1) throw std::invalid_argument("lambda must lie in [0, 1]");
  int t = 1;
  while (t < s && !converse_condition(shape, s, t, lambda)) ++t;
  if (!converse_condition(shape, s, t, lambda)) {
    throw std::logic_error("converse condition fails at t = s");
  }
  const int l = shape.demands_per_user;
  ConverseLine line;
  line.s = s;
  line.lambda = lambda;
  line.t = t;
  line.intercept = (Rational(s - 1) + lambda) * l;
  line.slope = -Rational(l) * (2 * lambda * s + s * (s - 1) - t * (t - 1)) /
               Rational(2 * (shape.files - l * (t - 1)));
  return line;
}

std::vector<TradeoffPoint> converse_corner_points(const SystemShape& shape) {
  shape.validate();
  const int l = shape.demands_per_user;
  std::vector<TradeoffPoint> out;
  for (int s = 1; s <= shape.max_s(); ++s) {
    for (int t = 1; t <= s; ++t) {
      const Rational m(shape.files - l * (t - 1), s);
      const Rational rate = l * (Rational(s - 1, 2) + Rational(t * (t - 1), 2 * s));
      out.push_back({m, rate, {Provenance::Kind::kCorner, 0, s, t}});
    }
  }
  out.push_back({Rational(0), Rational(l * (shape.distinct_files() / l)), {}});
  return out;
}

Envelope converse_corner_envelope(const SystemShape& shape) { return envelope_of(converse_corner_points(shape)); }

std::vector<Rational> lambda_grid(int steps) {
  if (steps < 1) throw std::invalid_argument("lambda grid needs at least one step");
  std::vector<Rational> out;
  for (int i = 0; i <= steps; ++i) out.emplace_back(i, steps);
  return out;
}

std::vector<Rational> memory_grid(const SystemShape& shape, int points) {
  if (points < 2) throw std::invalid_argument("memory grid needs at least two points");
  std::vector<Rational> out;
  for (int i = 0; i < points; ++i) out.push_back(Rational(shape.files) * Rational(i, points - 1));
  return out;
}

DominanceReport verify_envelope_dominance(const SystemShape& shape, const std::vector<Rational>& grid,
                                          const std::vector<Rational>& lambdas, const PointMutation& mutation) {
  shape.validate();
  for (const auto& m : grid) {
    if (m < 0 || m > shape.files) throw std::invalid_argument("grid memory " + to_string(m) + " outside [0, N]");
  }
  auto points = achievable_points(shape);
  if (mutation) mutation(points);
  const Envelope upper = envelope_of(points);
  const Envelope corner = converse_corner_envelope(shape);

  DominanceReport report;
  auto compare = [&](const Rational& m, const Rational& lower, const Rational& up, const std::string& bound) {
    ++report.comparisons;
    if (lower > up) {
      report.pass = false;
      report.violations.push_back({m, lower, up, bound});
    }
  };
  std::vector<ConverseLine> lines;
  for (int s = 1; s <= shape.max_s(); ++s) {
    for (const auto& lambda : lambdas) lines.push_back(converse_line(shape, s, lambda));
  }
  std::vector<bool> above(lines.size(), false);
  for (const auto& m : grid) {
    const Rational up = upper(m);
    const Rational low = corner(m);
    compare(m, low, up, "corner envelope");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& line = lines[i];
      const Rational value = line.at(m);
      compare(m, value, up,
              "line s=" + std::to_string(line.s) + " t=" + std::to_string(line.t) +
                  " lambda=" + to_string(line.lambda));
      if (value > low) above[i] = true;
    }
  }
  report.lines_above_corner_envelope = static_cast<std::size_t>(std::count(above.begin(), above.end(), true));
  return report;
}

namespace {

// upper / lower with 0/0 = 1.
Rational ratio(const Rational& upper, const Rational& lower, const Rational& memory) {
  if (lower == 0) {
    if (upper == 0) return Rational(1);
    throw std::logic_error("gap ratio: converse envelope is 0 at M = " + to_string(memory) +
                           " while the achievable envelope is " + to_string(upper));
  }
  return upper / lower;
}

}  // namespace

GapCertificate gap_certificate(const SystemShape& shape) {
  shape.validate();
  const Envelope upper = achievable_envelope(shape);
  const Envelope lower = converse_corner_envelope(shape);
  GapCertificate cert;
  cert.shape = shape;
  cert.max_ratio = -1;

  std::vector<Rational> memories;
  for (const auto& p : converse_corner_points(shape)) {
    if (p.provenance.kind == Provenance::Kind::kCorner && p.provenance.s == 1 && p.provenance.t == 1) continue;
    memories.push_back(p.memory);
  }
  for (const auto& m : memories) {
    const Rational up = upper(m);
    const Rational low = lower(m);
    const Rational value = ratio(up, low, m);
    if (value > cert.max_ratio) {
      cert.max_ratio = value;
      cert.witness_memory = m;
      cert.witness_upper = up;
      cert.witness_lower = low;
    }
  }

  cert.sup_ratio = -1;
  std::vector<Rational> breakpoints;
  for (const auto& p : upper.breakpoints()) breakpoints.push_back(p.memory);
  for (const auto& p : lower.breakpoints()) breakpoints.push_back(p.memory);
  for (const auto& m : breakpoints) {
    if (m == shape.files) continue;
    const Rational value = ratio(upper(m), lower(m), m);
    if (value > cert.sup_ratio) {
      cert.sup_ratio = value;
      cert.sup_witness_memory = m;
    }
  }
  if (cert.sup_ratio < 0) cert.sup_ratio = 1;
  cert.within_six = cert.max_ratio <= 6 && cert.sup_ratio <= 6;
  return cert;
}

std::vector<GapCertificate> gap_sweep(const SweepRange& range, unsigned threads) {
  if (range.max_files < 1 || range.max_users < 1) throw std::invalid_argument("sweep bounds must be at least 1");
  std::vector<SystemShape> shapes;
  for (int n = 1; n <= range.max_files; ++n) {
    for (int k = 1; k <= range.max_users; ++k) {
      for (int l = 1; l <= n; ++l) shapes.push_back({n, k, l});
    }
  }
  std::vector<GapCertificate> out(shapes.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(shapes.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < shapes.size(); i = next++) {
      try {
        out[i] = gap_certificate(shapes[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace privcache
