#include "cordal/poisson.hpp"

#include <stdexcept>
#include <utility>

#include "cordal/homology.hpp"
#include "cordal/multiset_util.hpp"

namespace cordal {

namespace {

void require_invertible_form(const AlgebraPtr& a, const char* who) {
  if (!a->module()->is_nondegenerate())
    throw std::invalid_argument(std::string(who) +
                                ": the bilinear form is not invertible over the ring");
}

void require_same_algebra(const Cochain& omega, const Cochain& eta, const char* who) {
  const auto& a = omega.algebra();
  const auto& b = eta.algebra();
  if (*a->ring() != *b->ring() || *a->module() != *b->module())
    throw std::invalid_argument(std::string(who) + ": different algebras");
}

}  // namespace

std::vector<SharpComponent> sharp_lift(const Cochain& omega) {
  const auto& a = omega.algebra();
  require_invertible_form(a, "sharp_lift");
  const auto& mod = a->module();
  const int p = omega.degree();

  std::vector<SharpComponent> out;
  for (std::size_t k = 0; static_cast<int>(2 * k) + 1 <= p; ++k)
    out.push_back(SharpComponent{k, {}});

  for (std::size_t k = 0; k < out.size() && k < omega.level_count(); ++k) {
    // Group the stored entries by everything except the last module
    // slot; each group is the covector that slot defines.
    std::map<CochainKey, Covector> groups;
    for (const auto& [key, value] : omega.level(k)) {
      CochainKey prefix{std::vector<int>(key.elements.begin(), key.elements.end() - 1),
                        key.weights};
      auto [it, inserted] = groups.try_emplace(std::move(prefix), mod->zero_covector());
      it->second.set_coord(static_cast<std::size_t>(key.elements.back()), value);
    }
    for (auto& [prefix, lambda] : groups) {
      ModuleElement raised = mod->sharp(lambda);
      if (!raised.is_zero()) out[k].table.emplace(prefix, std::move(raised));
    }
  }
  return out;
}

Cochain bullet(const Cochain& omega, const Cochain& eta) {
  require_same_algebra(omega, eta, "bullet");
  const auto& a = omega.algebra();
  require_invertible_form(a, "bullet");
  const auto& mod = a->module();
  const auto& R = a->ring();
  const int p = omega.degree(), q = eta.degree();
  if (p + q - 2 < 0) return Cochain(a, 0);
  Cochain out(a, p + q - 2);

  const bool negate = q % 2 == 0;  // overall sign: minus for even second degree
  const auto lifted_omega = sharp_lift(omega);
  const auto lifted_eta = sharp_lift(eta);
  for (const auto& comp1 : lifted_omega) {
    for (const auto& [key1, raised1] : comp1.table) {
      for (const auto& comp2 : lifted_eta) {
        for (const auto& [key2, raised2] : comp2.table) {
          RingElement paired = mod->pairing(raised1, raised2);
          if (paired.is_zero()) continue;
          auto w_union = multiset_union(key1.weights, key2.weights);
          Rational mult = multiset_split_count(w_union, key1.weights);
          if (negate) mult = -mult;
          RingElement base = paired * RingElement::constant(R, mult);
          for (const auto& riffle : signed_interleavings(key1.elements, key2.elements)) {
            out.add_entry(comp1.level + comp2.level,
                          CochainKey{riffle.merged, w_union},
                          riffle.sign > 0 ? base : -base);
          }
        }
      }
    }
  }
  return out;
}

Cochain diamond(const Cochain& omega, const Cochain& eta) {
  require_same_algebra(omega, eta, "diamond");
  const auto& a = omega.algebra();
  require_invertible_form(a, "diamond");
  const auto& R = a->ring();
  const int p = omega.degree(), q = eta.degree();
  if (p + q - 2 < 0) return Cochain(a, 0);
  Cochain out(a, p + q - 2);

  for (std::size_t level1 = 1; level1 < omega.level_count(); ++level1) {
    for (const auto& [key1, g1] : omega.level(level1)) {
      for (std::size_t level2 = 0; level2 < eta.level_count(); ++level2) {
        for (const auto& [key2, g2] : eta.level(level2)) {
          // Feed the second factor's value into one derivation slot of
          // the first (one term per distinct slot variable).
          for (std::size_t idx = 0; idx < key1.weights.size(); ++idx) {
            if (idx > 0 && key1.weights[idx] == key1.weights[idx - 1]) continue;
            const int s = key1.weights[idx];
            RingElement inserted = g2.derivative(static_cast<std::size_t>(s));
            if (inserted.is_zero()) continue;
            std::vector<int> w_low = key1.weights;
            w_low.erase(w_low.begin() + static_cast<std::ptrdiff_t>(idx));
            auto w_out = multiset_union(w_low, key2.weights);
            Rational mult = multiset_split_count(w_out, key2.weights);
            RingElement base = g1 * inserted * RingElement::constant(R, mult);
            if (base.is_zero()) continue;
            for (const auto& riffle : signed_interleavings(key1.elements, key2.elements)) {
              out.add_entry(level1 - 1 + level2,
                            CochainKey{riffle.merged, w_out},
                            riffle.sign > 0 ? base : -base);
            }
          }
        }
      }
    }
  }
  return out;
}

Cochain poisson_bracket(const Cochain& omega, const Cochain& eta) {
  require_same_algebra(omega, eta, "poisson_bracket");
  require_invertible_form(omega.algebra(), "poisson_bracket");
  const int p = omega.degree(), q = eta.degree();

  Cochain out = diamond(omega, eta);
  out += bullet(omega, eta);
  Cochain reversed = diamond(eta, omega);
  if ((p * q) % 2 == 0)
    out -= reversed;
  else
    out += reversed;

  if (auto check = validate(out); !check.ok)
    throw std::logic_error("poisson_bracket: result failed admissibility: " + check.violation);
  return out;
}

bool hamiltonian_check(const AlgebraPtr& algebra, int trials, std::uint64_t seed) {
  require_invertible_form(algebra, "hamiltonian_check");
  const Cochain canonical = theta(algebra);
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const int degree = t % 5;
    Cochain omega = random_valid_cochain(rng, algebra, degree, 1, 2);
    Cochain lhs = differential(omega, /*validate_output=*/false);
    Cochain rhs = -poisson_bracket(canonical, omega);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

Cochain maurer_cartan_defect(const AlgebraPtr& algebra) {
  require_invertible_form(algebra, "maurer_cartan_defect");
  const Cochain canonical = theta(algebra);
  return poisson_bracket(canonical, canonical);
}

bool maurer_cartan_check(const AlgebraPtr& algebra) {
  require_invertible_form(algebra, "maurer_cartan_check");
  try {
    return maurer_cartan_defect(algebra).is_zero();
  } catch (const std::invalid_argument&) {
    // The canonical cochain is not admissible, so the structure
    // certainly fails the identities the defect would measure.
    return false;
  }
}

RingElement iterated_bracket(const Cochain& omega, const std::vector<ModuleElement>& e_list,
                             const std::vector<RingElement>& f_list) {
  const auto& a = omega.algebra();
  require_invertible_form(a, "iterated_bracket");
  const int p = omega.degree();
  const std::size_t k = f_list.size();
  if (2 * k > static_cast<std::size_t>(p) ||
      e_list.size() != static_cast<std::size_t>(p) - 2 * k)
    throw std::invalid_argument(
        "iterated_bracket: need degree - 2*(ring arguments) module arguments");

  Cochain current = omega;
  for (const auto& e : e_list)
    current = poisson_bracket(current, Cochain::from_covector(a, a->module()->flat(e)));
  for (const auto& f : f_list)
    current = poisson_bracket(current, Cochain::from_scalar(a, f));

  RingElement value = current.scalar_value();
  const std::size_t n = e_list.size();
  if ((n * (n - 1) / 2) % 2 != 0) value = -value;
  return value;
}

std::optional<Cochain> rescale_obstruction(const AlgebraPtr& algebra, int coefficient_bound) {
  return is_coboundary(theta(algebra), coefficient_bound);
}

}  // namespace cordal
