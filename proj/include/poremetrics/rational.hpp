#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace poremetrics {

/// Exact scalar. GMP keeps it canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;
using Point = std::vector<Rational>;

/// Parses "p/q", an integer, or a terminating decimal ("0.125", "-3.5e-2").
/// Throws PreconditionError on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& r);

Rational pow2(int exponent);
Rational ipow(const Rational& base, unsigned exponent);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Decimal rendering with `digits` significant digits (for reports only).
std::string to_decimal(const Rational& r, int digits = 20);

}  // namespace poremetrics
