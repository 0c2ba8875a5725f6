#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hpt {

// Exact rationals. mpq_class keeps values canonical (gcd 1, positive
// denominator) as long as every constructor path calls canonicalize().
using Rational = mpq_class;

// "p/q", with "/q" omitted when q == 1.
std::string to_string(const Rational& q);

// Accepts "p", "p/q", optional leading sign. Throws InputError.
Rational parse_rational(std::string_view text);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

} // namespace hpt
