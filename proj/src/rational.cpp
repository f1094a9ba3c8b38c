#include "privcache/rational.hpp"

#include <stdexcept>

namespace privcache {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  return den < 0 ? Rational(-num, -den) : Rational(num, den);
}


std::string to_string(const BigInt& x) { return x.str(); }

std::string to_string(const Rational& x) {
  const BigInt den = denominator_of(x);
  if (den == 1) return numerator_of(x).str();
  return numerator_of(x).str() + "/" + den.str();
}

namespace {

BigInt parse_integer(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw std::invalid_argument("malformed integer: " + text);
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') throw std::invalid_argument("malformed integer: " + text);
  }
  return BigInt(text);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text));
  const BigInt num = parse_integer(text.substr(0, slash));
  const BigInt den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + text);
  return make_rational(num, den);
}

BigInt factorial(std::int64_t n) {
  if (n < 0) throw std::domain_error("factorial of a negative number");
  BigInt out = 1;
  for (std::int64_t i = 2; i <= n; ++i) out *= i;
  return out;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace privcache
