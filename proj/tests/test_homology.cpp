#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "cordal/cd_algebra.hpp"
#include "cordal/cochain.hpp"
#include "cordal/extension.hpp"
#include "cordal/homology.hpp"
#include "cordal/random_gen.hpp"

#include "ce_oracle.hpp"

using namespace cordal;

namespace {

RingElement qc(const RingSpecPtr& R, long num, long den = 1) {
  return RingElement::constant(R, make_rational(num, den));
}

// Rank-2 abelian structure over Q[x] with a non-constant pairing entry;
// its transposition relations couple the two levels of every table.
AlgebraPtr build_gram_x() {
  auto R = RingSpec::make_polynomial({"x"});
  RingElement one = RingElement::one(R);
  RingElement x = RingElement::variable(R, 0);
  auto module = FreeMetricModule::create(R, {"a", "b"}, {{one, x}, {x, one}});
  std::vector<ModuleElement> partial{module->zero_element()};
  std::vector<std::vector<ModuleElement>> bracket(
      2, std::vector<ModuleElement>(2, module->zero_element()));
  return CourantDorfmanAlgebra::create(module, partial, bracket);
}

// Rank-2 hyperbolic structure over Q[x] with a non-constant derivation
// table; its differential raises coefficient degree by one.
AlgebraPtr build_xb() {
  auto R = RingSpec::make_polynomial({"x"});
  RingElement zero = RingElement::zero(R);
  RingElement one = RingElement::one(R);
  RingElement x = RingElement::variable(R, 0);
  auto module = FreeMetricModule::create(R, {"a", "b"}, {{zero, one}, {one, zero}});
  std::vector<ModuleElement> partial{module->element({zero, x})};
  std::vector<std::vector<ModuleElement>> bracket(
      2, std::vector<ModuleElement>(2, module->zero_element()));
  return CourantDorfmanAlgebra::create(module, partial, bracket);
}

AlgebraPtr build_abelian3() {
  auto R = RingSpec::make_rationals();
  std::vector<std::vector<std::vector<Rational>>> constants(
      3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3, 0)));
  std::vector<std::vector<Rational>> gram{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  return build_quadratic_lie(R, {"a", "b", "c"}, constants, gram);
}

AlgebraPtr build_abelian2_isotropic() {
  auto R = RingSpec::make_rationals();
  std::vector<std::vector<std::vector<Rational>>> constants(
      2, std::vector<std::vector<Rational>>(2, std::vector<Rational>(2, 0)));
  std::vector<std::vector<Rational>> gram{{0, 0}, {0, 0}};
  return build_quadratic_lie(R, {"p", "q"}, constants, gram);
}

Covector random_covector(Rng& rng, const AlgebraPtr& a, int deg = 1) {
  std::vector<RingElement> coords;
  for (std::size_t i = 0; i < a->rank(); ++i)
    coords.push_back(rng.ring_element(a->ring(), deg, 2, true));
  return a->module()->covector(coords);
}

ce_oracle::LieData so3_oracle_data() {
  ce_oracle::LieData g;
  g.n = 3;
  g.bracket.assign(3, std::vector<std::vector<ce_oracle::Q>>(3, std::vector<ce_oracle::Q>(3, 0)));
  auto set = [&](int i, int j, int k) {
    g.bracket[i][j][k] = 1;
    g.bracket[j][i][k] = -1;
  };
  set(0, 1, 2);
  set(1, 2, 0);
  set(2, 0, 1);
  return g;
}

std::vector<long long> betti_list(const CohomologyReport& report) {
  std::vector<long long> out;
  for (const auto& d : report.degrees) out.push_back(d.betti);
  return out;
}

QMatrix matrix_product(const QMatrix& a, const QMatrix& b) {
  // a is (m x k), b is (k x n)
  const std::size_t m = a.size();
  const std::size_t k = b.size();
  const std::size_t n = k == 0 ? 0 : b[0].size();
  QMatrix out(m, QVector(n, Rational(0)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  return out;
}

bool matrix_is_zero(const QMatrix& m) {
  for (const auto& row : m)
    for (const auto& v : row)
      if (v != 0) return false;
  return true;
}

std::size_t matrix_rank_of(const QMatrix& m) {
  if (m.empty()) return 0;
  return matrix_rank(m, m[0].size());
}

}  // namespace

TEST_CASE("truncated bases enumerate the admissible cochains") {
  auto so3 = build_so3();
  const std::vector<std::size_t> expected{1, 3, 3, 1, 0};
  for (int q = 0; q <= 4; ++q) {
    CHECK(assemble(so3, q, 0).dimension() == expected[static_cast<std::size_t>(q)]);
  }
  auto ab3 = build_abelian3();
  for (int q = 0; q <= 4; ++q) {
    CHECK(assemble(ab3, q, 0).dimension() == expected[static_cast<std::size_t>(q)]);
  }

  // Shuffled enumeration spans the same space and round-trips members.
  auto shuffled = assemble(so3, 2, 0, 77u);
  CHECK(shuffled.dimension() == 3);
  for (std::size_t i = 0; i < shuffled.dimension(); ++i) {
    Cochain m = shuffled.member(i);
    CHECK(validate(m).ok);
    auto back = shuffled.coordinates_of(m);
    REQUIRE(back.has_value());
    CHECK(shuffled.combine(*back) == m);
  }

  // Non-constant gram: the two levels share coordinates through the
  // correction terms, one free pair per monomial.
  auto gx = build_gram_x();
  CHECK(assemble(gx, 2, 0).dimension() == 2);
  CHECK(assemble(gx, 2, 1).dimension() == 4);
  auto basis_gx = assemble(gx, 2, 0);
  Cochain combo(gx, 2);
  combo.set_entry(0, CochainKey{{0, 1}, {}}, qc(gx->ring(), -1));
  combo.set_entry(1, CochainKey{{}, {0}}, qc(gx->ring(), 1));
  auto coords = basis_gx.coordinates_of(combo);
  REQUIRE(coords.has_value());
  CHECK(basis_gx.combine(*coords) == combo);

  auto q01 = build_q0({"x"});
  CHECK(assemble(q01, 1, 1).dimension() == 4);
  auto xb = build_xb();
  auto basis_xb = assemble(xb, 2, 1);
  CHECK(basis_xb.dimension() == 4);
  for (std::size_t i = 0; i < basis_xb.dimension(); ++i) CHECK(validate(basis_xb.member(i)).ok);

  // Decomposition misses: outside the window, and not admissible.
  Cochain big(gx, 2);
  big.set_entry(0, CochainKey{{0, 1}, {}}, RingElement::monomial(gx->ring(), Monomial{2}, 1));
  CHECK_FALSE(assemble(gx, 2, 1).coordinates_of(big).has_value());
  Cochain lopsided(so3, 2);
  lopsided.set_entry(0, CochainKey{{0, 1}, {}}, qc(so3->ring(), 1));
  CHECK_FALSE(assemble(so3, 2, 0).coordinates_of(lopsided).has_value());

  CHECK_THROWS_AS(assemble(so3, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(assemble(so3, 2, -1), std::invalid_argument);
  CHECK_THROWS_AS(assemble(so3, Cochain::degree_cap() + 1, 0), std::invalid_argument);
}

TEST_CASE("differential matrices are exact and square to zero") {
  auto so3 = build_so3();
  auto oracle = so3_oracle_data();

  auto d0 = differential_matrix(so3, 0, 0);
  REQUIRE(d0.size() == 3);
  REQUIRE(d0[0].size() == 1);
  CHECK(matrix_is_zero(d0));

  CHECK(matrix_rank_of(differential_matrix(so3, 1, 0)) == ce_oracle::rank(ce_oracle::d_matrix(oracle, 1)));
  CHECK(matrix_rank_of(differential_matrix(so3, 1, 0)) == 3);
  CHECK(matrix_rank_of(differential_matrix(so3, 2, 0)) == ce_oracle::rank(ce_oracle::d_matrix(oracle, 2)));
  CHECK(matrix_rank_of(differential_matrix(so3, 2, 0)) == 0);

  auto ab3 = build_abelian3();
  for (int q = 0; q <= 3; ++q) CHECK(matrix_is_zero(differential_matrix(ab3, q, 0)));

  struct Fixture {
    AlgebraPtr algebra;
    int bound;
    int q_top;  // largest source degree for the square-to-zero product
  };
  std::vector<Fixture> fixtures{{so3, 0, 2},
                                {build_q0({"x"}), 1, 2},
                                {build_loop_so3(), 1, 2},
                                {build_bloch_so3(), 1, 1},
                                {build_gram_x(), 1, 2},
                                {build_xb(), 1, 2}};
  for (const auto& fx : fixtures) {
    const int s = structure_degree(fx.algebra);
    for (int q = 0; q <= fx.q_top; ++q) {
      auto first = differential_matrix(fx.algebra, q, fx.bound);
      auto second = differential_matrix(fx.algebra, q + 1, fx.bound + s);
      CHECK(matrix_is_zero(matrix_product(second, first)));
    }
  }

  // The derivation-heavy fixture raises coefficient degree: feeding it a
  // same-size target window must be reported, not silently clipped.
  auto xb = build_xb();
  CHECK(structure_degree(xb) == 1);
  auto src = assemble(xb, 1, 1);
  auto tight = assemble(xb, 2, 1);
  CHECK_THROWS_AS(differential_matrix(src, tight), std::invalid_argument);
}

TEST_CASE("cohomology over the rational base matches the exterior oracle") {
  auto so3 = build_so3();
  auto report = cohomology(so3, 3, 0);
  CHECK_FALSE(report.truncated);
  CHECK(betti_list(report) == std::vector<long long>{1, 0, 0, 1});
  CHECK(betti_list(report) == ce_oracle::betti(so3_oracle_data(), 3));
  for (const auto& d : report.degrees) {
    CHECK(d.betti == static_cast<long long>(d.kernel_dimension) -
                         static_cast<long long>(d.image_dimension));
    for (const auto& rep : d.representatives) CHECK(is_cocycle(rep));
  }

  // The top class is the canonical cocycle, up to a nonzero scalar.
  REQUIRE(report.degrees[3].representatives.size() == 1);
  const Cochain& top = report.degrees[3].representatives[0];
  Rational c = top.entry(0, CochainKey{{0, 1, 2}, {}}).coefficient(Monomial{});
  CHECK(c != 0);
  Cochain scaled = theta(so3);
  scaled.scale(RingElement::constant(so3->ring(), c));
  CHECK(top == scaled);

  auto ab3 = build_abelian3();
  auto flat = cohomology(ab3, 3, 0);
  CHECK(betti_list(flat) == std::vector<long long>{1, 3, 3, 1});
  ce_oracle::LieData zero;
  zero.n = 3;
  zero.bracket.assign(3, std::vector<std::vector<ce_oracle::Q>>(
                             3, std::vector<ce_oracle::Q>(3, 0)));
  CHECK(betti_list(flat) == ce_oracle::betti(zero, 3));
}

TEST_CASE("truncated cohomology over loop coefficients") {
  auto loop = build_loop_so3();
  auto report = cohomology(loop, 2, 1);
  CHECK(report.truncated);
  CHECK(report.structure_degree == 0);
  CHECK(betti_list(report) == std::vector<long long>{3, 0, 3});
  for (const auto& rep : report.degrees[2].representatives) {
    CHECK(is_cocycle(rep));
    CHECK_FALSE(is_coboundary(rep, 1).has_value());
    CHECK_FALSE(rep.level(1).empty());
  }

  // Betti numbers do not depend on the coordinate enumeration order.
  auto shuffled = cohomology(loop, 2, 1, 424242u);
  CHECK(betti_list(shuffled) == betti_list(report));

  auto wider = cohomology(loop, 2, 2);
  CHECK(betti_list(wider) == std::vector<long long>{5, 0, 5});
}

TEST_CASE("cocycle tests and bounded primitive searches") {
  auto so3 = build_so3();
  auto q01 = build_q0({"x"});
  auto loop = build_loop_so3();
  auto bloch = build_bloch_so3();
  auto xb = build_xb();

  for (const auto& a : {so3, q01, loop, bloch, xb}) CHECK(is_cocycle(theta(a)));

  // A covector with nonvanishing bracket pairing is not closed.
  Covector lam(so3->module(), {qc(so3->ring(), 1), qc(so3->ring(), 0), qc(so3->ring(), 0)});
  CHECK_FALSE(is_cocycle(Cochain::from_covector(so3, lam)));

  // Inadmissible inputs are rejected, not analyzed.
  Cochain bad(so3, 2);
  bad.set_entry(0, CochainKey{{0, 1}, {}}, qc(so3->ring(), 1));
  CHECK_THROWS_AS(is_cocycle(bad), std::invalid_argument);
  CHECK_THROWS_AS(is_coboundary(bad, 1), std::invalid_argument);

  // The canonical cocycle of the hyperbolic double has a primitive in
  // the smallest window; the quadratic Lie example has none at all.
  auto prim = is_coboundary(theta(q01), 1);
  REQUIRE(prim.has_value());
  CHECK(validate(*prim).ok);
  CHECK(differential(*prim) == theta(q01));
  for (int bound = 0; bound <= 2; ++bound) CHECK_FALSE(is_coboundary(theta(so3), bound).has_value());

  // Zero is a coboundary with the zero primitive.
  auto ab3 = build_abelian3();
  auto zero_prim = is_coboundary(theta(ab3), 0);
  REQUIRE(zero_prim.has_value());
  CHECK(zero_prim->is_zero());

  // The residue-pairing class survives every tested window.
  Cochain km = kac_moody_cocycle(loop);
  CHECK(is_cocycle(km));
  for (int bound = 1; bound <= 3; ++bound) CHECK_FALSE(is_coboundary(km, bound).has_value());

  // Constructed coboundaries are recovered within their window.
  Rng rng(915);
  for (int trial = 0; trial < 3; ++trial) {
    Cochain eta = random_valid_cochain(rng, loop, 1, 1, 2);
    Cochain w = differential(eta);
    auto found = is_coboundary(w, 1);
    REQUIRE(found.has_value());
    CHECK(differential(*found) == w);
  }
  Cochain eta2 = random_valid_cochain(rng, q01, 2, 1, 2);
  Cochain w2 = differential(eta2);
  auto found2 = is_coboundary(w2, 1);
  REQUIRE(found2.has_value());
  CHECK(differential(*found2) == w2);
}

TEST_CASE("degree-2 classes map to central extensions") {
  auto so3 = build_so3();
  CHECK(classify_extensions(so3, 0).empty());

  // Fully isotropic abelian rank-2: one alternating class, and its
  // extension is a rank-3 Lie-type algebra with a central generator.
  auto flat = build_abelian2_isotropic();
  auto classes = classify_extensions(flat, 0);
  REQUIRE(classes.size() == 1);
  const auto& [rep, ext] = classes[0];
  CHECK(is_cocycle(rep));
  CHECK(ext->rank() == 3);
  CHECK(ext->verify_axioms(10).all_passed());
  CHECK(ext->bracket_entry(0, 1).coord(2) == rep.entry(0, CochainKey{{0, 1}, {}}));
  CHECK(ext->bracket_entry(0, 1).coord(0).is_zero());
  CHECK(ext->bracket_entry(0, 1).coord(1).is_zero());

  // Loop coefficients: three classes in the unit window, each giving a
  // rank-4 extension; shifting a representative by a coboundary gives an
  // isomorphic extension through the central-coordinate shift.
  auto loop = build_loop_so3();
  auto loop_classes = classify_extensions(loop, 1);
  REQUIRE(loop_classes.size() == 3);
  Rng rng(4711);
  for (const auto& [cocycle, extension] : loop_classes) {
    CHECK(is_cocycle(cocycle));
    CHECK(extension->rank() == 4);
    Covector lam = random_covector(rng, loop);
    Cochain shift = differential(Cochain::from_covector(loop, lam));
    if (shift.is_zero()) continue;
    Cochain moved = cocycle + shift;
    auto moved_ext = central_extension(moved);
    CHECK(extension_shift_is_morphism(loop, lam, moved_ext, extension));
  }
}
