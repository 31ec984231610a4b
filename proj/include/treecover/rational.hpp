// Exact rational arithmetic used throughout: distances, scales and bounds are
// never represented in floating point.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treecover {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Accepts "7", "-3/4", "1.25", "+0.5".  Decimal literals are converted to an
// exact fraction, never rounded.
Rational parse_rational(std::string_view text);

// Canonical form: "n" when the denominator is 1, otherwise "n/d" with d > 0
// and gcd(n, d) = 1.  parse_rational(format_rational(q)) == q.
std::string format_rational(const Rational& q);

// Smallest integer >= q.
BigInt ceil_rational(const Rational& q);

// Largest integer <= q.
BigInt floor_rational(const Rational& q);

bool is_integer(const Rational& q);

// mul * q + add and mul * q / div with machine integers (div > 0).  Equivalent
// to the plain operator chain, but integer-valued q goes through cpp_int:
// cpp_rational re-normalizes after every operator, which at thousands of
// digits turns each one into a multi-millisecond call.
Rational mul_add_rational(const Rational& q, long mul, long add);
Rational mul_div_rational(const Rational& q, long mul, long div);
Rational add_scaled_rational(const Rational& q, long mul, const Rational& b); // q + mul * b

// Throws if q does not fit; used where counts are expected.
std::int64_t to_int64(const BigInt& v);

} // namespace treecover
