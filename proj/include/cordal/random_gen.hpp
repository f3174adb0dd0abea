/*
 * Deterministic random generation for fuzz checks and samplers.  All
 * draws go through an explicit 64-bit generator with hand-rolled range
 * reduction, so a fixed seed reproduces the same stream on every
 * platform and standard library.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "cordal/ring.hpp"

namespace cordal {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  // splitmix64 step
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Uniform draw in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  // Small nonzero rational with numerator in [-4,4] and denominator in {1,2,3}.
  Rational small_rational() {
    long num = range(1, 4);
    if (chance(1, 2)) num = -num;
    return make_rational(num, range(1, 3));
  }

  // Sparse ring element: up to max_terms monomials of total degree at
  // most max_degree (absolute exponent for the Laurent family), with
  // small rational coefficients.  May return zero when allow_zero.
  RingElement ring_element(const RingSpecPtr& spec, int max_degree, int max_terms,
                           bool allow_zero = false);

  // A random variable-exponent monomial of total degree <= max_degree.
  Monomial monomial(const RingSpecPtr& spec, int max_degree);

 private:
  std::uint64_t state_;
};

}  // namespace cordal
