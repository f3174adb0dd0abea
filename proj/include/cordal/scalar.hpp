/*
 * Exact rational scalars.  All arithmetic in the library bottoms out in
 * arbitrary-precision rationals; no floating point is used anywhere.
 */
#pragma once

#include <gmpxx.h>

#include <string>

namespace cordal {

using Rational = mpq_class;

// Builds a canonicalized rational from a numerator/denominator pair.
inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Canonical decimal-free rendering: "p" or "p/q" with q > 0 and gcd(p,q)=1.
inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

}  // namespace cordal
