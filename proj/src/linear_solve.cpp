#include "privcache/linear_solve.hpp"

#include <stdexcept>

namespace privcache {

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Symbol> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("FieldMatrix: data size mismatch");
}

FieldMatrix FieldMatrix::identity(std::size_t n) {
  FieldMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FieldMatrix FieldMatrix::column(const SymbolVector& v) { return FieldMatrix(v.size(), 1, v); }

FieldMatrix multiply(const PrimeField& field, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  FieldMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Symbol x = a.at(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out.at(i, j) = field.add(out.at(i, j), field.mul(x, b.at(k, j)));
      }
    }
  }
  return out;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kUnique: return "unique";
    case SolveStatus::kUnderdetermined: return "underdetermined";
    case SolveStatus::kInconsistent: return "inconsistent";
  }
  return "unknown";
}

namespace {

struct Echelon {
  std::vector<std::size_t> pivot_cols;  // pivot column of row i
  std::vector<long> pivot_row_of_col;   // -1 for free columns
  bool consistent = true;
};

// Reduces [A | B] in place to reduced row echelon form.
Echelon reduce(const PrimeField& field, FieldMatrix& a, FieldMatrix& b) {
  Echelon e;
  e.pivot_row_of_col.assign(a.cols(), -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a.at(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(p, j), a.at(r, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b.at(p, j), b.at(r, j));
    }
    const Symbol inv = field.inv(a.at(r, c));
    for (std::size_t j = 0; j < a.cols(); ++j) a.at(r, j) = field.mul(a.at(r, j), inv);
    for (std::size_t j = 0; j < b.cols(); ++j) b.at(r, j) = field.mul(b.at(r, j), inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      const Symbol f = a.at(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < a.cols(); ++j) a.at(i, j) = field.sub(a.at(i, j), field.mul(f, a.at(r, j)));
      for (std::size_t j = 0; j < b.cols(); ++j) b.at(i, j) = field.sub(b.at(i, j), field.mul(f, b.at(r, j)));
    }
    e.pivot_cols.push_back(c);
    e.pivot_row_of_col[c] = static_cast<long>(r);
    ++r;
  }
  for (std::size_t i = r; i < a.rows() && e.consistent; ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (b.at(i, j) != 0) {
        e.consistent = false;
        break;
      }
    }
  }
  return e;
}

}  // namespace

SolveResult solve_for(const PrimeField& field, FieldMatrix a, FieldMatrix b,
                      std::span<const std::size_t> targets) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row count mismatch");
  for (std::size_t t : targets) {
    if (t >= a.cols()) throw std::out_of_range("solve: target column out of range");
  }
  const Echelon e = reduce(field, a, b);
  SolveResult result;
  if (!e.consistent) {
    result.status = SolveStatus::kInconsistent;
    return result;
  }
  FieldMatrix solution(targets.size(), b.cols());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const long pr = e.pivot_row_of_col[targets[i]];
    if (pr < 0) {
      result.status = SolveStatus::kUnderdetermined;
      return result;
    }
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (e.pivot_row_of_col[c] < 0 && a.at(pr, c) != 0) {
        result.status = SolveStatus::kUnderdetermined;
        return result;
      }
    }
    for (std::size_t j = 0; j < b.cols(); ++j) solution.at(i, j) = b.at(pr, j);
  }
  result.status = SolveStatus::kUnique;
  result.solution = std::move(solution);
  return result;
}

SolveResult gaussian_solve(const PrimeField& field, FieldMatrix a, FieldMatrix b) {
  std::vector<std::size_t> all(a.cols());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return solve_for(field, std::move(a), std::move(b), all);
}

SolveResult gaussian_solve(const PrimeField& field, FieldMatrix a, const SymbolVector& b) {
  return gaussian_solve(field, std::move(a), FieldMatrix::column(b));
}

std::size_t rank(const PrimeField& field, FieldMatrix a) {
  FieldMatrix b(a.rows(), 0);
  return reduce(field, a, b).pivot_cols.size();
}

}  // namespace privcache
