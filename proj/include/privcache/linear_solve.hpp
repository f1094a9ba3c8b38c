#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "privcache/field.hpp"

namespace privcache {

/// Dense row-major matrix over a prime field.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Symbol> data);

  static FieldMatrix identity(std::size_t n);
  static FieldMatrix column(const SymbolVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Symbol& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Symbol at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Symbol> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Symbol> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> data_;
};

FieldMatrix multiply(const PrimeField& field, const FieldMatrix& a, const FieldMatrix& b);

enum class SolveStatus {
  kUnique,           // every requested unknown is determined
  kUnderdetermined,  // consistent, but some requested unknown is free
  kInconsistent,     // no solution exists
};

const char* to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kInconsistent;
  /// One row per requested unknown, one column per right-hand side. Empty
  /// unless status is kUnique.
  FieldMatrix solution;
};

/// Solves A X = B for all unknowns. kUnique iff the system is consistent and A
/// has full column rank.
SolveResult gaussian_solve(const PrimeField& field, FieldMatrix a, FieldMatrix b);
SolveResult gaussian_solve(const PrimeField& field, FieldMatrix a, const SymbolVector& b);

/// Solves A X = B for the unknowns listed in `targets` only. A target is
/// determined when its column is a pivot of the reduced echelon form and its
/// pivot row has no entries in free columns; other unknowns may stay free.
SolveResult solve_for(const PrimeField& field, FieldMatrix a, FieldMatrix b,
                      std::span<const std::size_t> targets);

std::size_t rank(const PrimeField& field, FieldMatrix a);

}  // namespace privcache
