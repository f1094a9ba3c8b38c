#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace privcache {

/// Arbitrary-precision integer.
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// num/den in lowest terms; a negative denominator moves its sign to the
/// numerator. Throws std::domain_error when den is zero.
Rational make_rational(const BigInt& num, const BigInt& den);

inline BigInt numerator_of(const Rational& x) { return boost::multiprecision::numerator(x); }
inline BigInt denominator_of(const Rational& x) { return boost::multiprecision::denominator(x); }

/// "a/b", or just "a" when the denominator is 1.
std::string to_string(const Rational& x);
std::string to_string(const BigInt& x);

/// Parses "a", "a/b" or "-a/b". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(const std::string& text);

BigInt factorial(std::int64_t n);

double to_double(const Rational& x);

}  // namespace privcache
