#include <gtest/gtest.h>

#include "privcache/field.hpp"
#include "privcache/linear_solve.hpp"
#include "privcache/rng.hpp"

using namespace privcache;

TEST(Field, SmallExamples) {
  const PrimeField f(5);
  EXPECT_EQ(f.add(3, 4), 2u);
  EXPECT_EQ(f.inv(2), 3u);
  EXPECT_EQ(f.sub(1, 3), 3u);
  EXPECT_EQ(f.neg(0), 0u);
  EXPECT_EQ(f.reduce(-7), 3u);
  EXPECT_EQ(f.pow(2, 4), 1u);
}

TEST(Field, CharacteristicTwoSubtractionIsAddition) {
  const PrimeField f(2);
  for (Symbol a = 0; a < 2; ++a) {
    for (Symbol b = 0; b < 2; ++b) EXPECT_EQ(f.sub(a, b), f.add(a, b));
  }
}

TEST(Field, RejectsCompositeAndZeroInverse) {
  EXPECT_THROW(PrimeField(4), std::invalid_argument);
  EXPECT_THROW(PrimeField(1), std::invalid_argument);
  EXPECT_THROW(PrimeField(0), std::invalid_argument);
  EXPECT_THROW(PrimeField(5).inv(0), std::domain_error);
  EXPECT_EQ(PrimeField().modulus(), 257u);
}

TEST(Field, PrimalityAgainstSieve) {
  std::vector<bool> composite(2000, false);
  for (std::uint64_t i = 2; i < 2000; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j < 2000; j += i) composite[j] = true;
  }
  for (std::uint64_t n = 0; n < 2000; ++n) ASSERT_EQ(is_prime(n), n >= 2 && !composite[n]) << n;
}

class FieldAxioms : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(FieldAxioms, Exhaustive) {
  const std::uint32_t q = GetParam();
  const PrimeField f(q);
  for (Symbol a = 0; a < q; ++a) {
    ASSERT_EQ(f.add(a, 0), a);
    ASSERT_EQ(f.mul(a, 1), a);
    ASSERT_EQ(f.add(a, f.neg(a)), 0u);
    if (a != 0) ASSERT_EQ(f.mul(a, f.inv(a)), 1u);
    for (Symbol b = 0; b < q; ++b) {
      ASSERT_EQ(f.add(a, b), (a + b) % q);
      ASSERT_EQ(f.mul(a, b), (a * b) % q);
      ASSERT_EQ(f.add(f.sub(a, b), b), a);
      for (Symbol c = 0; c < q; ++c) {
        ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallPrimes, FieldAxioms, ::testing::Values(2u, 3u, 5u));

TEST(Solve, Identity) {
  const PrimeField f(5);
  const auto res = gaussian_solve(f, FieldMatrix::identity(3), SymbolVector{1, 2, 3});
  ASSERT_EQ(res.status, SolveStatus::kUnique);
  EXPECT_EQ(res.solution, FieldMatrix::column({1, 2, 3}));
}

TEST(Solve, TwoByTwoByHand) {
  // x + y = 0, x + 2y = 1 over F_5: y = 1, x = 4.
  const PrimeField f(5);
  const auto res = gaussian_solve(f, FieldMatrix(2, 2, {1, 1, 1, 2}), SymbolVector{0, 1});
  ASSERT_EQ(res.status, SolveStatus::kUnique);
  EXPECT_EQ(res.solution, FieldMatrix::column({4, 1}));
}

TEST(Solve, InconsistentAndUnderdetermined) {
  const PrimeField f(5);
  EXPECT_EQ(gaussian_solve(f, FieldMatrix(2, 2, {1, 1, 2, 2}), SymbolVector{0, 1}).status,
            SolveStatus::kInconsistent);
  EXPECT_EQ(gaussian_solve(f, FieldMatrix(2, 2, {1, 1, 2, 2}), SymbolVector{1, 2}).status,
            SolveStatus::kUnderdetermined);
  EXPECT_EQ(gaussian_solve(f, FieldMatrix(1, 2, {1, 1}), SymbolVector{3}).status, SolveStatus::kUnderdetermined);
}

TEST(Solve, PartialTargets) {
  // x + y = 1, z = 2: z is determined, x is not.
  const PrimeField f(7);
  const FieldMatrix a(2, 3, {1, 1, 0, 0, 0, 1});
  const FieldMatrix b = FieldMatrix::column({1, 2});
  const std::vector<std::size_t> z{2};
  const auto res = solve_for(f, a, b, z);
  ASSERT_EQ(res.status, SolveStatus::kUnique);
  EXPECT_EQ(res.solution.at(0, 0), 2u);
  const std::vector<std::size_t> x{0};
  EXPECT_EQ(solve_for(f, a, b, x).status, SolveStatus::kUnderdetermined);
}

class RandomSolve : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(RandomSolve, RecoversPlantedSolution) {
  const PrimeField f(GetParam());
  Rng rng = substream(GetParam(), "solve");
  int unique = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    FieldMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a.at(i, j) = static_cast<Symbol>(rng.below(f.modulus()));
    }
    FieldMatrix x(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < 2; ++j) x.at(i, j) = static_cast<Symbol>(rng.below(f.modulus()));
    }
    const FieldMatrix b = multiply(f, a, x);
    const auto res = gaussian_solve(f, a, b);
    if (rank(f, a) == n) {
      ASSERT_EQ(res.status, SolveStatus::kUnique);
      ASSERT_EQ(res.solution, x);
      ++unique;
    } else {
      ASSERT_EQ(res.status, SolveStatus::kUnderdetermined);
    }
  }
  EXPECT_GT(unique, 50);
}

INSTANTIATE_TEST_SUITE_P(Moduli, RandomSolve, ::testing::Values(2u, 5u, 257u));

TEST(Rank, KnownMatrices) {
  const PrimeField f(3);
  EXPECT_EQ(rank(f, FieldMatrix(2, 2, {1, 2, 2, 1})), 1u);  // second row = 2 * first mod 3
  EXPECT_EQ(rank(f, FieldMatrix(2, 2, {1, 1, 2, 1})), 2u);
  EXPECT_EQ(rank(f, FieldMatrix(3, 3)), 0u);
}
