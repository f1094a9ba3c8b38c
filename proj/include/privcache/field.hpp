#pragma once

#include <cstdint>
#include <vector>

namespace privcache {

/// A prime-field element stored as its residue in [0, q).
using Symbol = std::uint32_t;
using SymbolVector = std::vector<Symbol>;

bool is_prime(std::uint64_t n);

/// Arithmetic in F_q for a prime q < 2^31. The modulus is checked for
/// primality at construction.
class PrimeField {
 public:
  static constexpr std::uint32_t kDefaultModulus = 257;

  explicit PrimeField(std::uint32_t q = kDefaultModulus);

  std::uint32_t modulus() const { return q_; }
  bool contains(std::uint64_t a) const { return a < q_; }

  Symbol add(Symbol a, Symbol b) const {
    const std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Symbol sub(Symbol a, Symbol b) const { return a >= b ? a - b : a + (q_ - b); }
  Symbol neg(Symbol a) const { return a == 0 ? 0 : q_ - a; }
  Symbol mul(Symbol a, Symbol b) const {
    return static_cast<Symbol>(static_cast<std::uint64_t>(a) * b % q_);
  }
  /// Multiplicative inverse; throws std::domain_error for 0.
  Symbol inv(Symbol a) const;
  Symbol pow(Symbol a, std::uint64_t e) const;
  /// Residue of an arbitrary signed integer.
  Symbol reduce(std::int64_t a) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.q_ == b.q_; }

 private:
  std::uint32_t q_;
};

}  // namespace privcache
