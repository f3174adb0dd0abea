#include <stdexcept>

#include "cordal/cd_algebra.hpp"

namespace cordal {

namespace {

AlgebraPtr checked(AlgebraPtr a, const char* label, bool user_data) {
  AxiomReport report = a->verify_axioms(0);
  if (report.all_passed()) return a;
  std::string witness;
  for (int k = 1; k <= 6; ++k)
    if (!report.axiom(k).passed) {
      witness = "condition (" + std::to_string(k) + ") fails at " + report.axiom(k).witness;
      break;
    }
  if (witness.empty()) witness = "anchor chain condition fails at " + report.anchor_chain.witness;
  std::string message = std::string(label) + ": " + witness;
  if (user_data) throw std::invalid_argument(message);
  throw std::logic_error(message);
}

}  // namespace

AlgebraPtr build_q0(const RingSpecPtr& ring) {
  const std::size_t v = ring->var_count();
  if (v == 0) throw std::invalid_argument("this family needs at least one ring variable");

  std::vector<std::string> names;
  for (std::size_t i = 1; i <= 2 * v; ++i) names.push_back("e" + std::to_string(i));
  RingMatrix gram(2 * v, std::vector<RingElement>(2 * v, RingElement::zero(ring)));
  for (std::size_t s = 0; s < v; ++s) {
    gram[s][v + s] = RingElement::one(ring);
    gram[v + s][s] = RingElement::one(ring);
  }
  ModulePtr module = FreeMetricModule::create(ring, names, gram);

  std::vector<ModuleElement> partials;
  for (std::size_t s = 0; s < v; ++s) partials.push_back(module->basis_element(v + s));
  std::vector<std::vector<ModuleElement>> table(
      2 * v, std::vector<ModuleElement>(2 * v, module->zero_element()));
  return checked(CourantDorfmanAlgebra::create(module, std::move(partials), std::move(table)),
                 "hyperbolic double", false);
}

AlgebraPtr build_q0(const std::vector<std::string>& variables) {
  return build_q0(RingSpec::make_polynomial(variables));
}

AlgebraPtr build_quadratic_lie(const RingSpecPtr& ring, const std::vector<std::string>& basis_names,
                               const std::vector<std::vector<std::vector<Rational>>>& structure_constants,
                               const std::vector<std::vector<Rational>>& gram) {
  const std::size_t n = basis_names.size();
  if (structure_constants.size() != n)
    throw std::invalid_argument("structure constants must be a cube of the rank");
  for (const auto& plane : structure_constants) {
    if (plane.size() != n) throw std::invalid_argument("structure constants must be a cube of the rank");
    for (const auto& line : plane)
      if (line.size() != n)
        throw std::invalid_argument("structure constants must be a cube of the rank");
  }
  if (gram.size() != n) throw std::invalid_argument("gram matrix must be square of the rank");
  for (const auto& row : gram)
    if (row.size() != n) throw std::invalid_argument("gram matrix must be square of the rank");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (structure_constants[i][j][k] != -structure_constants[j][i][k])
          throw std::invalid_argument(
              "structure constants are not antisymmetric at (" + basis_names[i] + ", " +
              basis_names[j] + ", " + basis_names[k] + ")");

  RingMatrix g(n, std::vector<RingElement>(n, RingElement::zero(ring)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = RingElement::constant(ring, gram[i][j]);
  ModulePtr module = FreeMetricModule::create(ring, basis_names, g);

  std::vector<ModuleElement> partials(ring->var_count(), module->zero_element());
  std::vector<std::vector<ModuleElement>> table(n,
                                                std::vector<ModuleElement>(n, module->zero_element()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& c = structure_constants[i][j][k];
        if (c != 0)
          table[i][j].set_coord(k, table[i][j].coord(k) + RingElement::constant(ring, c));
      }
  return checked(CourantDorfmanAlgebra::create(module, std::move(partials), std::move(table)),
                 "quadratic Lie data", true);
}

namespace {

std::vector<std::vector<std::vector<Rational>>> so3_constants() {
  std::vector<std::vector<std::vector<Rational>>> c(
      3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3, Rational(0))));
  c[0][1][2] = 1;
  c[1][2][0] = 1;
  c[2][0][1] = 1;
  c[1][0][2] = -1;
  c[2][1][0] = -1;
  c[0][2][1] = -1;
  return c;
}

std::vector<std::vector<Rational>> identity_rationals(std::size_t n) {
  std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) g[i][i] = 1;
  return g;
}

}  // namespace

AlgebraPtr build_so3() {
  return build_quadratic_lie(RingSpec::make_rationals(), {"u1", "u2", "u3"}, so3_constants(),
                             identity_rationals(3));
}

AlgebraPtr build_loop_so3() {
  return build_quadratic_lie(RingSpec::make_laurent("z"), {"u1", "u2", "u3"}, so3_constants(),
                             identity_rationals(3));
}

AlgebraPtr build_bloch_so3() {
  auto ring = RingSpec::make_laurent("z");
  RingMatrix gram(4, std::vector<RingElement>(4, RingElement::zero(ring)));
  for (std::size_t i = 0; i < 3; ++i) gram[i][i] = RingElement::one(ring);
  ModulePtr module = FreeMetricModule::create(ring, {"u1", "u2", "u3", "w"}, gram);

  std::vector<ModuleElement> partials{module->basis_element(3)};
  std::vector<std::vector<ModuleElement>> table(4,
                                                std::vector<ModuleElement>(4, module->zero_element()));
  auto c = so3_constants();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        if (c[i][j][k] != 0)
          table[i][j].set_coord(k, RingElement::constant(ring, c[i][j][k]));
  return checked(CourantDorfmanAlgebra::create(module, std::move(partials), std::move(table)),
                 "loop extension", false);
}

}  // namespace cordal
