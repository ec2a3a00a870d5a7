#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace locdim {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p", "-p/q" or a terminating decimal such as "0.125".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// Exact binary value of a finite double.
Rational rational_from_double(double x);

inline Integer numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denom(const Rational& q) { return boost::multiprecision::denominator(q); }

Rational rational_pow(const Rational& q, unsigned e);

Integer lcm_of_denominators(const std::vector<Rational>& values);

/// Largest dyadic a/2^bits <= q (round_up: smallest >= q).
Rational round_dyadic(const Rational& q, unsigned bits, bool round_up);

/// Natural log of a positive rational, safe for huge numerators and denominators.
long double log_rational(const Rational& q);
long double log_integer(const Integer& n);

}  // namespace locdim
