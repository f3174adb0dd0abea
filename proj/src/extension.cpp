#include "cordal/extension.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace cordal {

namespace {

// phi(e, f) = (e, f + lambda(e)) expressed on coordinates: the first n
// stay, the last one absorbs the pairing of lambda with the first n.
ModuleElement shift_element(const ModulePtr& target, const Covector& lambda,
                            const ModuleElement& e) {
  const std::size_t n1 = target->rank();
  std::vector<RingElement> coords;
  coords.reserve(n1);
  RingElement last = e.coord(n1 - 1);
  for (std::size_t k = 0; k + 1 < n1; ++k) {
    coords.push_back(e.coord(k));
    last += e.coord(k) * lambda.coords()[k];
  }
  coords.push_back(last);
  return target->element(coords);
}

}  // namespace

AlgebraPtr central_extension(const Cochain& omega, const std::string& central_name) {
  const AlgebraPtr& base = omega.algebra();
  if (omega.degree() != 2)
    throw std::invalid_argument("central_extension requires a degree-2 cochain");
  CochainCheck check = validate(omega);
  if (!check.ok)
    throw std::invalid_argument("central_extension: cochain is not admissible: " +
                                check.violation);
  if (!differential(omega, false).is_zero())
    throw std::invalid_argument("central_extension: cochain is not closed");

  const auto& module = base->module();
  const RingSpecPtr& R = base->ring();
  const std::size_t n = base->rank();
  for (std::size_t i = 0; i < n; ++i)
    if (module->basis_name(i) == central_name)
      throw std::invalid_argument("central_extension: central generator name collides");

  std::vector<std::string> names;
  names.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) names.push_back(module->basis_name(i));
  names.push_back(central_name);

  RingMatrix gram(n + 1, std::vector<RingElement>(n + 1, RingElement::zero(R)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = module->gram_entry(i, j);
  ModulePtr ext_module = FreeMetricModule::create(R, names, gram);

  auto lift = [&](const ModuleElement& e, RingElement last) {
    std::vector<RingElement> coords;
    coords.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) coords.push_back(e.coord(k));
    coords.push_back(std::move(last));
    return ext_module->element(coords);
  };

  // derivation table: the old image plus the negated derivation-level
  // value of the cochain
  std::vector<ModuleElement> partial;
  partial.reserve(base->var_count());
  for (std::size_t s = 0; s < base->var_count(); ++s) {
    RingElement top = omega.entry(1, CochainKey{{}, {static_cast<int>(s)}});
    top.scale(make_rational(-1, 1));
    partial.push_back(lift(base->partial_generator(s), std::move(top)));
  }

  // bracket table: the old table plus the bottom value of the cochain;
  // brackets against the new generator vanish
  std::vector<std::vector<ModuleElement>> bracket(
      n + 1, std::vector<ModuleElement>(n + 1, ext_module->zero_element()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      bracket[i][j] =
          lift(base->bracket_entry(i, j),
               omega.entry(0, CochainKey{{static_cast<int>(i), static_cast<int>(j)}, {}}));

  AlgebraPtr ext = CourantDorfmanAlgebra::create(ext_module, std::move(partial), std::move(bracket));
  AxiomReport report = ext->verify_axioms(0);
  if (!report.all_passed()) {
    std::string why;
    for (const AxiomCheck& c : report.axioms)
      if (!c.passed) {
        why = c.witness;
        break;
      }
    if (why.empty() && !report.anchor_chain.passed) why = report.anchor_chain.witness;
    throw std::logic_error("central_extension produced an inconsistent structure: " + why);
  }
  return ext;
}

Cochain kac_moody_cocycle(const AlgebraPtr& algebra) {
  const RingSpecPtr& R = algebra->ring();
  if (R->family != RingFamily::laurent)
    throw std::invalid_argument("kac_moody_cocycle requires the Laurent ring");
  for (std::size_t s = 0; s < algebra->var_count(); ++s)
    if (!algebra->partial_generator(s).is_zero())
      throw std::invalid_argument("kac_moody_cocycle requires a zero derivation table");
  Cochain omega(algebra, 2);
  omega.set_entry(1, CochainKey{{}, {0}}, RingElement::constant(R, make_rational(-1, 1)));
  return omega;
}

bool extension_shift_is_morphism(const AlgebraPtr& base, const Covector& lambda,
                                 const AlgebraPtr& from_ext, const AlgebraPtr& to_ext) {
  const std::size_t n = base->rank();
  if (from_ext->rank() != n + 1 || to_ext->rank() != n + 1) return false;
  if (!(*from_ext->ring() == *to_ext->ring()) || !(*from_ext->ring() == *base->ring()))
    return false;
  const ModulePtr& target = to_ext->module();

  auto phi = [&](const ModuleElement& e) { return shift_element(target, lambda, e); };

  // pairings are untouched by the shift
  for (std::size_t i = 0; i <= n; ++i) {
    ModuleElement pi = phi(from_ext->module()->basis_element(i));
    for (std::size_t j = 0; j <= n; ++j) {
      ModuleElement pj = phi(from_ext->module()->basis_element(j));
      if (!(target->pairing(pi, pj) == from_ext->module()->gram_entry(i, j))) return false;
    }
  }
  // derivation tables correspond under the shift
  for (std::size_t s = 0; s < base->var_count(); ++s)
    if (!(phi(from_ext->partial_generator(s)) == to_ext->partial_generator(s))) return false;
  // brackets correspond under the shift
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      ModuleElement lhs = phi(from_ext->bracket_entry(i, j));
      ModuleElement rhs = to_ext->bracket_eval(phi(from_ext->module()->basis_element(i)),
                                               phi(from_ext->module()->basis_element(j)));
      if (!(lhs == rhs)) return false;
    }
  return true;
}

}  // namespace cordal
