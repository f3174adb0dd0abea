#include "cordal/random_gen.hpp"

namespace cordal {

Monomial Rng::monomial(const RingSpecPtr& spec, int max_degree) {
  Monomial m(spec->var_count(), 0);
  if (spec->var_count() == 0 || max_degree == 0) return m;
  if (spec->family == RingFamily::laurent) {
    m[0] = static_cast<int>(range(-max_degree, max_degree));
    return m;
  }
  int degree = static_cast<int>(range(0, max_degree));
  for (int d = 0; d < degree; ++d)
    m[below(spec->var_count())] += 1;
  return m;
}

RingElement Rng::ring_element(const RingSpecPtr& spec, int max_degree, int max_terms,
                              bool allow_zero) {
  RingElement out(spec);
  int terms = static_cast<int>(range(allow_zero ? 0 : 1, max_terms));
  for (int t = 0; t < terms; ++t) out.add_term(monomial(spec, max_degree), small_rational());
  if (!allow_zero && out.is_zero())
    out.add_term(Monomial(spec->var_count(), 0), small_rational());
  return out;
}

}  // namespace cordal
