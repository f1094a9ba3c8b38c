#include "privcache/field.hpp"

#include <stdexcept>
#include <string>

namespace privcache {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q >= (1U << 31)) throw std::invalid_argument("PrimeField: modulus must be below 2^31");
  if (!is_prime(q)) throw std::invalid_argument("PrimeField: " + std::to_string(q) + " is not prime");
}

Symbol PrimeField::pow(Symbol a, std::uint64_t e) const {
  Symbol result = 1 % q_;
  Symbol base = a % q_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Symbol PrimeField::inv(Symbol a) const {
  if (a % q_ == 0) throw std::domain_error("PrimeField: inverse of zero");
  return pow(a, q_ - 2);
}

Symbol PrimeField::reduce(std::int64_t a) const {
  const std::int64_t m = static_cast<std::int64_t>(q_);
  std::int64_t r = a % m;
  if (r < 0) r += m;
  return static_cast<Symbol>(r);
}

}  // namespace privcache
