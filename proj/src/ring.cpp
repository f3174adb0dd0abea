#include "cordal/ring.hpp"

#include <sstream>
#include <stdexcept>

namespace cordal {

std::shared_ptr<const RingSpec> RingSpec::make_rationals() {
  auto s = std::make_shared<RingSpec>();
  s->family = RingFamily::rationals;
  return s;
}

std::shared_ptr<const RingSpec> RingSpec::make_polynomial(std::vector<std::string> vars) {
  if (vars.empty()) throw std::invalid_argument("polynomial ring needs at least one variable");
  for (const auto& v : vars) {
    if (v.empty()) throw std::invalid_argument("empty variable name");
  }
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j]) throw std::invalid_argument("duplicate variable name: " + vars[i]);
  auto s = std::make_shared<RingSpec>();
  s->family = RingFamily::polynomial;
  s->variables = std::move(vars);
  return s;
}

std::shared_ptr<const RingSpec> RingSpec::make_laurent(std::string var) {
  if (var.empty()) throw std::invalid_argument("empty variable name");
  auto s = std::make_shared<RingSpec>();
  s->family = RingFamily::laurent;
  s->variables = {std::move(var)};
  return s;
}

std::string RingSpec::family_name() const {
  switch (family) {
    case RingFamily::rationals: return "rationals";
    case RingFamily::polynomial: return "polynomial";
    case RingFamily::laurent: return "laurent";
  }
  return "?";
}

void require_same_spec(const RingElement& a, const RingElement& b) {
  if (*a.spec() != *b.spec())
    throw std::invalid_argument("ring elements over different coefficient rings");
}

void require_spec(const RingSpecPtr& spec, const RingElement& a) {
  if (*spec != *a.spec())
    throw std::invalid_argument("ring element over an unexpected coefficient ring");
}

RingElement::RingElement(RingSpecPtr spec) : spec_(std::move(spec)) {
  if (!spec_) throw std::invalid_argument("null ring specification");
}

RingElement RingElement::constant(RingSpecPtr spec, const Rational& c) {
  RingElement r(std::move(spec));
  r.add_term(Monomial(r.spec_->var_count(), 0), c);
  return r;
}

RingElement RingElement::variable(RingSpecPtr spec, std::size_t index) {
  RingElement r(std::move(spec));
  if (index >= r.spec_->var_count())
    throw std::invalid_argument("variable index out of range");
  Monomial m(r.spec_->var_count(), 0);
  m[index] = 1;
  r.add_term(m, 1);
  return r;
}

RingElement RingElement::monomial(RingSpecPtr spec, Monomial m, const Rational& c) {
  RingElement r(std::move(spec));
  r.add_term(m, c);
  return r;
}

bool RingElement::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int e : terms_.begin()->first)
    if (e != 0) return false;
  return true;
}

Rational RingElement::constant_term() const {
  Monomial unit(spec_->var_count(), 0);
  auto it = terms_.find(unit);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool RingElement::is_unit() const {
  if (terms_.empty()) return false;
  switch (spec_->family) {
    case RingFamily::rationals:
      return true;  // nonzero constant
    case RingFamily::polynomial:
      return terms_.size() == 1 && monomial_total_degree(terms_.begin()->first) == 0;
    case RingFamily::laurent:
      return terms_.size() == 1;  // c * z^k for any k
  }
  return false;
}

RingElement RingElement::inverse_of_unit() const {
  if (!is_unit()) throw std::domain_error("not a unit: " + to_string());
  const auto& [m, c] = *terms_.begin();
  Monomial inv(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) inv[i] = -m[i];
  return RingElement::monomial(spec_, inv, Rational(1) / c);
}

void RingElement::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != spec_->var_count())
    throw std::invalid_argument("monomial length does not match the ring");
  if (!spec_->allows_negative_exponents()) {
    for (int e : m)
      if (e < 0) throw std::invalid_argument("negative exponent outside the Laurent family");
  }
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational RingElement::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

RingElement RingElement::operator-() const {
  RingElement r(spec_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

RingElement& RingElement::operator+=(const RingElement& other) {
  require_same_spec(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& other) {
  require_same_spec(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

RingElement& RingElement::add_scaled(const RingElement& other, const Rational& c) {
  require_same_spec(*this, other);
  if (c == 0) return *this;
  for (const auto& [m, k] : other.terms_) add_term(m, c * k);
  return *this;
}

RingElement& RingElement::operator*=(const RingElement& other) {
  *this = *this * other;
  return *this;
}

RingElement& RingElement::scale(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, k] : terms_) k *= c;
  return *this;
}

RingElement operator+(RingElement a, const RingElement& b) {
  a += b;
  return a;
}

RingElement operator-(RingElement a, const RingElement& b) {
  a -= b;
  return a;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
  require_same_spec(a, b);
  RingElement r(a.spec());
  Monomial m(a.spec()->var_count());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

RingElement operator*(const Rational& c, RingElement a) {
  a.scale(c);
  return a;
}

RingElement RingElement::derivative(std::size_t var) const {
  if (var >= spec_->var_count())
    throw std::invalid_argument("variable index out of range");
  RingElement r(spec_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * m[var]);
  }
  return r;
}

namespace {

// Componentwise divisibility of leading monomials for the ordinary
// polynomial long-division loop (all exponents nonnegative here).
bool monomial_divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < d.size(); ++i)
    if (m[i] < d[i]) return false;
  return true;
}

std::optional<RingElement> divide_nonneg(const RingElement& dividend, const RingElement& divisor) {
  RingElement q(dividend.spec());
  RingElement r = dividend;
  const auto& [dm, dc] = *divisor.terms().begin();
  while (!r.is_zero()) {
    const auto& [lm, lc] = *r.terms().begin();
    if (!monomial_divides(dm, lm)) return std::nullopt;
    Monomial qm(lm.size());
    for (std::size_t i = 0; i < lm.size(); ++i) qm[i] = lm[i] - dm[i];
    Rational qc = lc / dc;
    q.add_term(qm, qc);
    r -= RingElement::monomial(r.spec(), qm, qc) * divisor;
  }
  return q;
}

int min_exponent(const RingElement& a) {
  int m = 0;
  bool first = true;
  for (const auto& [mono, c] : a.terms()) {
    if (first || mono[0] < m) m = mono[0];
    first = false;
  }
  return m;
}

RingElement shift_exponent(const RingElement& a, int by) {
  RingElement r(a.spec());
  for (const auto& [mono, c] : a.terms()) {
    Monomial m = mono;
    m[0] += by;
    r.add_term(m, c);
  }
  return r;
}

}  // namespace

std::optional<RingElement> RingElement::divide_exact(const RingElement& divisor) const {
  require_same_spec(*this, divisor);
  if (divisor.is_zero()) return std::nullopt;
  if (is_zero()) return RingElement::zero(spec_);
  switch (spec_->family) {
    case RingFamily::rationals: {
      return RingElement::constant(spec_, constant_term() / divisor.constant_term());
    }
    case RingFamily::polynomial:
      return divide_nonneg(*this, divisor);
    case RingFamily::laurent: {
      int sa = min_exponent(*this), sb = min_exponent(divisor);
      auto q = divide_nonneg(shift_exponent(*this, -sa), shift_exponent(divisor, -sb));
      if (!q) return std::nullopt;
      return shift_exponent(*q, sa - sb);
    }
  }
  return std::nullopt;
}

int RingElement::degree_measure() const {
  long long best = 0;
  for (const auto& [m, c] : terms_) {
    long long d = monomial_total_degree(m);
    if (spec_->family == RingFamily::laurent && d < 0) d = -d;
    if (d > best) best = d;
  }
  return static_cast<int>(best);
}

namespace {

std::string monomial_to_string(const RingSpec& spec, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += spec.variables[i];
    if (m[i] != 1) {
      out += "^";
      out += std::to_string(m[i]);
    }
  }
  return out;
}

}  // namespace

std::string RingElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    std::string mono = monomial_to_string(*spec_, m);
    if (mono.empty()) {
      out << rational_to_string(a);
    } else {
      if (a != 1) out << rational_to_string(a) << "*";
      out << mono;
    }
    first = false;
  }
  return out.str();
}

}  // namespace cordal
