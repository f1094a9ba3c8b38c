#include <gtest/gtest.h>

#include "privcache/combinatorics.hpp"
#include "privcache/tradeoff.hpp"

using namespace privcache;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

// Lower convex envelope value as the minimum over every chord that spans m.
Rational chord_minimum(const std::vector<TradeoffPoint>& pts, const Rational& m) {
  std::optional<Rational> best;
  for (const auto& a : pts) {
    for (const auto& b : pts) {
      Rational value;
      if (a.memory == m) {
        value = a.rate;
      } else if (a.memory < m && m < b.memory) {
        value = a.rate + (b.rate - a.rate) * (m - a.memory) / (b.memory - a.memory);
      } else {
        continue;
      }
      if (!best || value < *best) best = value;
    }
  }
  return *best;
}

// Minimal t by scanning, with the condition scaled by 8 to stay in integers
// for lambda = j / 8.
int minimal_t(int n, int l, int s, int j) {
  for (int t = 1; t <= s; ++t) {
    if (l * (8 * (s * (s - 1) - t * (t - 1)) + 2 * j * s) <= 8 * 2 * (n - (t - 1) * l) * t) return t;
  }
  return -1;
}

std::vector<SystemShape> sweep() {
  std::vector<SystemShape> out;
  for (int n = 1; n <= 8; ++n) {
    for (int k = 1; k <= 4; ++k) {
      for (int l = 1; l <= n; ++l) out.push_back({n, k, l});
    }
  }
  return out;
}

}  // namespace

TEST(Achievable, WorkedExamplePoints) {
  const auto pts = achievable_points({5, 2, 2});
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_EQ(pts[0].memory, 0);
  EXPECT_EQ(pts[0].rate, 4);
  EXPECT_EQ(pts[1].memory, q(5, 4));
  EXPECT_EQ(pts[1].rate, q(11, 4));
  // r = 2 by hand: M = (28 - 15) / 28 * 5, R = (56 - 4) / 28
  EXPECT_EQ(pts[2].memory, q(65, 28));
  EXPECT_EQ(pts[2].rate, q(13, 7));
  EXPECT_EQ(pts[8].memory, 5);
  EXPECT_EQ(pts[8].rate, 0);
  EXPECT_EQ(pts[1].provenance.to_string(), "achievable r=1");
}

TEST(Achievable, EndpointsAndMonotonicityEverywhere) {
  for (const auto& s : sweep()) {
    const auto pts = achievable_points(s);
    ASSERT_EQ(pts.front().memory, 0);
    ASSERT_EQ(pts.front().rate, s.distinct_files());
    ASSERT_EQ(pts.back().memory, s.files);
    ASSERT_EQ(pts.back().rate, 0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      ASSERT_GE(pts[i].memory, pts[i - 1].memory);
      ASSERT_LE(pts[i].rate, pts[i - 1].rate);
    }
  }
}

TEST(Achievable, RejectsInvalidShapes) {
  EXPECT_THROW(achievable_points({2, 2, 3}), std::invalid_argument);
  EXPECT_THROW(achievable_points({0, 2, 1}), std::invalid_argument);
}

TEST(Achievable, EnvelopeValues) {
  const SystemShape s{5, 2, 2};
  const Envelope e = achievable_envelope(s);
  EXPECT_EQ(e(q(0)), 4);
  EXPECT_EQ(e(q(5)), 0);
  EXPECT_LE(e(q(5, 4)), q(11, 4));
  EXPECT_THROW(e(q(-1, 100)), std::domain_error);
  EXPECT_THROW(e(q(501, 100)), std::domain_error);
  const auto pts = achievable_points(s);
  for (const auto& m : memory_grid(s)) ASSERT_EQ(e(m), chord_minimum(pts, m));
}

TEST(Converse, SingleUserLines) {
  const SystemShape s{5, 2, 2};
  const auto full = converse_line(s, 1, q(1));
  EXPECT_EQ(full.t, 1);
  EXPECT_EQ(full.intercept, 2);
  EXPECT_EQ(full.slope, q(-2, 5));
  const auto zero = converse_line(s, 1, q(0));
  EXPECT_EQ(zero.t, 1);
  EXPECT_EQ(zero.intercept, 0);
  EXPECT_EQ(zero.slope, 0);
}

TEST(Converse, RangeChecks) {
  EXPECT_THROW(converse_line({5, 2, 2}, 0, q(0)), std::invalid_argument);
  EXPECT_THROW(converse_line({5, 2, 2}, 3, q(0)), std::invalid_argument);
  EXPECT_THROW(converse_line({5, 4, 2}, 3, q(0)), std::invalid_argument);  // floor(5/2) = 2
  EXPECT_THROW(converse_line({5, 2, 2}, 1, q(3, 2)), std::invalid_argument);
  EXPECT_NO_THROW(converse_line({2, 1, 1}, 1, q(1, 2)));
}

TEST(Converse, MinimalTMatchesScanAndTEqualsSIsFeasible) {
  for (const auto& s : sweep()) {
    for (int sv = 1; sv <= s.max_s(); ++sv) {
      for (int j = 0; j <= 8; ++j) {
        const Rational lambda = q(j, 8);
        ASSERT_TRUE(converse_condition(s, sv, sv, lambda));
        const auto line = converse_line(s, sv, lambda);
        ASSERT_EQ(line.t, minimal_t(s.files, s.demands_per_user, sv, j));
        ASSERT_GE(line.t, 1);
        ASSERT_LE(line.t, sv);
        ASSERT_LE(line.slope, 0);
        const int l = s.demands_per_user;
        const int t = line.t;
        ASSERT_EQ(line.intercept, (q(sv - 1) + lambda) * l);
        ASSERT_EQ(line.slope * 2 * (s.files - l * (t - 1)), -l * (2 * lambda * sv + sv * (sv - 1) - t * (t - 1)));
      }
    }
  }
}

TEST(Corners, KnownPoints) {
  const auto pts = converse_corner_points({5, 2, 2});
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[0].memory, 5);
  EXPECT_EQ(pts[0].rate, 0);
  EXPECT_EQ(pts[1].memory, q(5, 2));
  EXPECT_EQ(pts[1].rate, 1);
  EXPECT_EQ(pts[1].provenance.to_string(), "corner s=2 t=1");
  EXPECT_EQ(pts[2].memory, q(3, 2));
  EXPECT_EQ(pts[2].rate, 2);
  EXPECT_EQ(pts[3].memory, 0);
  EXPECT_EQ(pts[3].rate, 4);
  EXPECT_EQ(pts[3].provenance.to_string(), "endpoint");
}

TEST(Corners, EnvelopeAtZero) {
  for (const auto& s : sweep()) {
    const int l = s.demands_per_user;
    ASSERT_EQ(converse_corner_envelope(s)(q(0)), l * (s.distinct_files() / l));
  }
}

TEST(Dominance, WorkedExampleGrid) {
  const SystemShape s{5, 2, 2};
  const auto grid = memory_grid(s);
  ASSERT_EQ(grid.size(), 101u);
  EXPECT_EQ(grid[25], q(5, 4));
  const auto report = verify_envelope_dominance(s, grid);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.comparisons, 101u * (1 + 2 * 9));
  EXPECT_TRUE(report.violations.empty());
}

TEST(Dominance, TwoFilesTwoUsers) {
  const SystemShape s{2, 2, 1};
  EXPECT_TRUE(verify_envelope_dominance(s, memory_grid(s)).pass);
}

TEST(Dominance, HalvedPointIsCaught) {
  const SystemShape s{5, 2, 2};
  const auto report = verify_envelope_dominance(s, memory_grid(s), lambda_grid(), [](auto& pts) {
    pts[1].rate /= 2;
  });
  ASSERT_FALSE(report.pass);
  bool found = false;
  for (const auto& v : report.violations) {
    EXPECT_GT(v.lower, v.upper);
    found = found || (v.memory == q(5, 4) && v.upper == q(11, 8) && v.bound == "corner envelope");
  }
  EXPECT_TRUE(found);
}

TEST(Dominance, GridMustLieInRange) {
  EXPECT_THROW(verify_envelope_dominance({5, 2, 2}, {q(6)}), std::invalid_argument);
}

TEST(Gap, WithinSixOverSweep) {
  for (const auto& s : sweep()) {
    const auto cert = gap_certificate(s);
    ASSERT_TRUE(cert.within_six) << s.files << " " << s.users << " " << s.demands_per_user;
    ASSERT_GE(cert.max_ratio, 1);
    ASSERT_LE(cert.max_ratio, cert.sup_ratio);
  }
}

TEST(Gap, ZeroMemoryRatio) {
  for (const auto& s : sweep()) {
    const Rational ratio = achievable_envelope(s)(q(0)) / converse_corner_envelope(s)(q(0));
    if (s.files >= s.users * s.demands_per_user) {
      ASSERT_EQ(ratio, 1);
    } else {
      ASSERT_LE(ratio, 2);
    }
  }
}

TEST(Gap, SingleUser) {
  const auto cert = gap_certificate({2, 1, 1});
  EXPECT_EQ(cert.max_ratio, 1);
  EXPECT_EQ(cert.witness_memory, 0);
  EXPECT_TRUE(cert.within_six);
}

TEST(Gap, ThreadedSweepIsDeterministic) {
  const auto a = gap_sweep({8, 4}, 1);
  const auto b = gap_sweep({8, 4}, 4);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_EQ(a.size(), 4u * 36u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].shape.files, b[i].shape.files);
    ASSERT_EQ(a[i].shape.users, b[i].shape.users);
    ASSERT_EQ(a[i].shape.demands_per_user, b[i].shape.demands_per_user);
    ASSERT_EQ(a[i].max_ratio, b[i].max_ratio);
  }
}
