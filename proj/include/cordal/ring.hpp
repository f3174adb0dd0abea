/*
 * Sparse exact elements of the supported coefficient rings: the
 * rationals, multivariate polynomial rings over the rationals, and the
 * univariate ring of Laurent polynomials.  Elements are kept in a
 * canonical normal form: a term map ordered by graded lexicographic
 * comparison (largest first) that never stores a zero coefficient, so
 * structural equality of the maps is equality in the ring.
 */
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cordal/scalar.hpp"

namespace cordal {

enum class RingFamily { rationals, polynomial, laurent };

struct RingSpec {
  RingFamily family = RingFamily::rationals;
  std::vector<std::string> variables;  // empty for the rationals

  static std::shared_ptr<const RingSpec> make_rationals();
  static std::shared_ptr<const RingSpec> make_polynomial(std::vector<std::string> vars);
  static std::shared_ptr<const RingSpec> make_laurent(std::string var);

  std::size_t var_count() const { return variables.size(); }
  bool allows_negative_exponents() const { return family == RingFamily::laurent; }
  bool operator==(const RingSpec& other) const {
    return family == other.family && variables == other.variables;
  }
  bool operator!=(const RingSpec& other) const { return !(*this == other); }
  std::string family_name() const;
};

using RingSpecPtr = std::shared_ptr<const RingSpec>;

// Exponent vector with one entry per ring variable.  Entries may be
// negative only in the Laurent family.
using Monomial = std::vector<int>;

inline long long monomial_total_degree(const Monomial& m) {
  long long d = 0;
  for (int e : m) d += e;
  return d;
}

// Graded lexicographic comparison with the larger term first: higher
// total degree wins, ties are broken lexicographically on the exponent
// vector.  Map iteration therefore visits the leading term first, which
// fixes the canonical printed order.
struct GradedLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    long long da = monomial_total_degree(a), db = monomial_total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

class RingElement {
 public:
  using TermMap = std::map<Monomial, Rational, GradedLexGreater>;

  explicit RingElement(RingSpecPtr spec);

  static RingElement zero(RingSpecPtr spec) { return RingElement(std::move(spec)); }
  static RingElement one(RingSpecPtr spec) { return constant(std::move(spec), 1); }
  static RingElement constant(RingSpecPtr spec, const Rational& c);
  static RingElement variable(RingSpecPtr spec, std::size_t index);
  static RingElement monomial(RingSpecPtr spec, Monomial m, const Rational& c);

  const RingSpecPtr& spec() const { return spec_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Coefficient of the unit monomial (the whole element must be constant
  // only for callers that checked is_constant; this accessor just reads
  // the constant term).
  Rational constant_term() const;

  bool is_unit() const;
  RingElement inverse_of_unit() const;  // throws std::domain_error if not a unit

  // Adds c * x^m, keeping the normal form (zero coefficients removed).
  void add_term(const Monomial& m, const Rational& c);
  Rational coefficient(const Monomial& m) const;

  RingElement operator-() const;
  RingElement& operator+=(const RingElement& other);
  RingElement& operator-=(const RingElement& other);
  RingElement& operator*=(const RingElement& other);
  RingElement& scale(const Rational& c);

  // Adds c * other into this element.
  RingElement& add_scaled(const RingElement& other, const Rational& c);

  // Partial derivative with respect to the given variable.
  RingElement derivative(std::size_t var) const;

  // Exact quotient this/divisor when it exists in the ring.
  std::optional<RingElement> divide_exact(const RingElement& divisor) const;

  // Degree measure used by truncation bounds: maximum over terms of the
  // total degree (polynomial) or of the absolute exponent (Laurent);
  // zero for constants and the zero element.
  int degree_measure() const;

  std::string to_string() const;

  bool operator==(const RingElement& other) const {
    return terms_ == other.terms_;
  }
  bool operator!=(const RingElement& other) const { return !(*this == other); }

 private:
  RingSpecPtr spec_;
  TermMap terms_;
};

RingElement operator+(RingElement a, const RingElement& b);
RingElement operator-(RingElement a, const RingElement& b);
RingElement operator*(const RingElement& a, const RingElement& b);
RingElement operator*(const Rational& c, RingElement a);

// Throws std::invalid_argument when the two elements live over different
// ring specifications.
void require_same_spec(const RingElement& a, const RingElement& b);
void require_spec(const RingSpecPtr& spec, const RingElement& a);

}  // namespace cordal
