#include "cordal/cd_algebra.hpp"

#include <stdexcept>
#include <utility>

namespace cordal {

namespace {

std::string tuple_witness(std::initializer_list<std::string> parts) {
  std::string out = "(";
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out += ", ";
    out += p;
    first = false;
  }
  return out + ")";
}

}  // namespace

bool AxiomReport::all_passed() const {
  for (const auto& a : axioms)
    if (!a.passed) return false;
  return anchor_chain.passed;
}

CourantDorfmanAlgebra::CourantDorfmanAlgebra(ModulePtr module,
                                             std::vector<ModuleElement> partial_table,
                                             std::vector<std::vector<ModuleElement>> bracket_table)
    : module_(std::move(module)),
      partial_(std::move(partial_table)),
      bracket_(std::move(bracket_table)) {}

AlgebraPtr CourantDorfmanAlgebra::create(ModulePtr module,
                                         std::vector<ModuleElement> partial_table,
                                         std::vector<std::vector<ModuleElement>> bracket_table) {
  if (!module) throw std::invalid_argument("algebra requires a module");
  const std::size_t n = module->rank();
  const std::size_t v = module->ring()->var_count();
  if (partial_table.size() != v)
    throw std::invalid_argument("derivation table must have one entry per ring variable");
  for (const auto& e : partial_table) require_module(module, e);
  if (bracket_table.size() != n)
    throw std::invalid_argument("bracket table must be square of the module rank");
  for (const auto& row : bracket_table) {
    if (row.size() != n)
      throw std::invalid_argument("bracket table must be square of the module rank");
    for (const auto& e : row) require_module(module, e);
  }

  std::shared_ptr<CourantDorfmanAlgebra> a(new CourantDorfmanAlgebra(
      std::move(module), std::move(partial_table), std::move(bracket_table)));

  // Anchor matrix and structure statistics.
  const RingSpecPtr& R = a->module_->ring();
  a->anchor_.assign(n, std::vector<RingElement>(v, RingElement::zero(R)));
  int deg = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < v; ++s)
      a->anchor_[i][s] = a->module_->pairing(a->module_->basis_element(i), a->partial_[s]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      deg = std::max(deg, a->module_->gram_entry(i, j).degree_measure());
      for (const auto& c : a->bracket_[i][j].coords()) {
        if (!c.is_constant()) a->bracket_constant_ = false;
        deg = std::max(deg, c.degree_measure());
      }
    }
  for (const auto& p : a->partial_) {
    for (const auto& c : p.coords()) {
      if (!c.is_constant()) a->partial_constant_ = false;
      deg = std::max(deg, c.degree_measure());
    }
  }
  a->structure_degree_ = deg;
  return a;
}

ModuleElement CourantDorfmanAlgebra::partial_of(const RingElement& f) const {
  require_spec(ring(), f);
  ModuleElement out(module_);
  for (std::size_t s = 0; s < var_count(); ++s) {
    RingElement df = f.derivative(s);
    if (!df.is_zero()) out.add_scaled(partial_[s], df);
  }
  return out;
}

ModuleElement CourantDorfmanAlgebra::coanchor(const KahlerForm& alpha) const {
  if (alpha.degree() != 1) throw std::invalid_argument("coanchor expects a one-form");
  if (*alpha.spec() != *ring()) throw std::invalid_argument("form is over a different ring");
  ModuleElement out(module_);
  for (const auto& [key, value] : alpha.components())
    out.add_scaled(partial_.at(static_cast<std::size_t>(key[0])), value);
  return out;
}

VectorField CourantDorfmanAlgebra::anchor(const ModuleElement& e) const {
  require_module(module_, e);
  VectorField out(ring());
  for (std::size_t s = 0; s < var_count(); ++s) {
    RingElement comp = RingElement::zero(ring());
    for (std::size_t i = 0; i < rank(); ++i) {
      if (e.coord(i).is_zero() || anchor_[i][s].is_zero()) continue;
      comp += e.coord(i) * anchor_[i][s];
    }
    out.set_component(s, std::move(comp));
  }
  return out;
}

RingElement CourantDorfmanAlgebra::anchor_apply(const ModuleElement& e, const RingElement& f) const {
  return anchor(e).apply(f);
}

ModuleElement CourantDorfmanAlgebra::bracket_eval(const ModuleElement& e1,
                                                  const ModuleElement& e2) const {
  require_module(module_, e1);
  require_module(module_, e2);
  const RingSpecPtr& R = ring();
  const std::size_t n = rank();
  const std::size_t v = var_count();

  // Nonzero left coordinates with their derivation images.
  std::vector<std::size_t> left;
  std::vector<ModuleElement> left_partial;
  for (std::size_t i = 0; i < n; ++i) {
    if (e1.coord(i).is_zero()) continue;
    left.push_back(i);
    left_partial.push_back(partial_of(e1.coord(i)));
  }
  // Derivation coefficients of e1 per variable.
  std::vector<RingElement> rho1(v, RingElement::zero(R));
  for (std::size_t s = 0; s < v; ++s)
    for (std::size_t i : left)
      if (!anchor_[i][s].is_zero()) rho1[s] += e1.coord(i) * anchor_[i][s];

  ModuleElement out(module_);
  for (std::size_t j = 0; j < n; ++j) {
    const RingElement& gj = e2.coord(j);
    if (!gj.is_zero()) {
      // Bracket of e1 against the j-th basis element, expanded leftward.
      ModuleElement acc(module_);
      for (std::size_t t = 0; t < left.size(); ++t) {
        const std::size_t i = left[t];
        const RingElement& fi = e1.coord(i);
        acc.add_scaled(bracket_[i][j], fi);
        RingElement h = RingElement::zero(R);
        for (std::size_t s = 0; s < v; ++s) {
          if (anchor_[j][s].is_zero()) continue;
          RingElement df = fi.derivative(s);
          if (!df.is_zero()) h += df * anchor_[j][s];
        }
        if (!h.is_zero()) acc.set_coord(i, acc.coord(i) - h);
        const RingElement& gij = module_->gram_entry(i, j);
        if (!gij.is_zero()) acc.add_scaled(left_partial[t], gij);
      }
      out.add_scaled(acc, gj);
    }
    // Scaling correction for the right slot.
    RingElement h2 = RingElement::zero(R);
    for (std::size_t s = 0; s < v; ++s) {
      if (rho1[s].is_zero()) continue;
      RingElement dg = gj.derivative(s);
      if (!dg.is_zero()) h2 += rho1[s] * dg;
    }
    if (!h2.is_zero()) out.set_coord(j, out.coord(j) + h2);
  }
  return out;
}

ModuleElement CourantDorfmanAlgebra::courant_bracket(const ModuleElement& e1,
                                                     const ModuleElement& e2) const {
  ModuleElement out = bracket_eval(e1, e2);
  out -= bracket_eval(e2, e1);
  out.scale(RingElement::constant(ring(), make_rational(1, 2)));
  return out;
}

AxiomReport CourantDorfmanAlgebra::verify_axioms(int fuzz_trials, std::uint64_t seed) const {
  AxiomReport report;
  report.fuzz_trials = fuzz_trials;
  const std::size_t n = rank();
  const std::size_t v = var_count();
  const RingSpecPtr& R = ring();

  std::vector<ModuleElement> basis;
  basis.reserve(n);
  for (std::size_t i = 0; i < n; ++i) basis.push_back(module_->basis_element(i));
  auto name = [&](std::size_t i) { return module_->basis_name(i); };
  auto var = [&](std::size_t s) { return R->variables[s]; };
  auto fail = [&](int axiom, std::string witness) {
    AxiomCheck& c = report.axioms[static_cast<std::size_t>(axiom - 1)];
    if (c.passed) {
      c.passed = false;
      c.witness = std::move(witness);
    }
  };

  // Condition (1): right-slot scaling rule on basis pairs and variables.
  for (std::size_t i = 0; i < n && report.axioms[0].passed; ++i)
    for (std::size_t j = 0; j < n && report.axioms[0].passed; ++j)
      for (std::size_t s = 0; s < v; ++s) {
        RingElement xs = RingElement::variable(R, s);
        ModuleElement scaled = basis[j];
        scaled.scale(xs);
        ModuleElement lhs = bracket_eval(basis[i], scaled);
        ModuleElement rhs = bracket_[i][j];
        rhs.scale(xs);
        rhs.add_scaled(basis[j], anchor_[i][s]);
        if (lhs != rhs) {
          fail(1, tuple_witness({name(i), var(s), name(j)}));
          break;
        }
      }

  // Condition (2): invariance of the pairing under the bracket action.
  for (std::size_t i = 0; i < n && report.axioms[1].passed; ++i)
    for (std::size_t j = 0; j < n && report.axioms[1].passed; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        RingElement lhs = module_->pairing(basis[i], partial_of(module_->gram_entry(j, k)));
        RingElement rhs = module_->pairing(bracket_[i][j], basis[k]) +
                          module_->pairing(basis[j], bracket_[i][k]);
        if (lhs != rhs) {
          fail(2, tuple_witness({name(i), name(j), name(k)}));
          break;
        }
      }

  // Condition (3): the symmetrized bracket is the derivation of the pairing.
  for (std::size_t i = 0; i < n && report.axioms[2].passed; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ModuleElement lhs = bracket_[i][j] + bracket_[j][i];
      if (lhs != partial_of(module_->gram_entry(i, j))) {
        fail(3, tuple_witness({name(i), name(j)}));
        break;
      }
    }

  // Condition (4): left-invariance of the bracket.
  for (std::size_t i = 0; i < n && report.axioms[3].passed; ++i)
    for (std::size_t j = 0; j < n && report.axioms[3].passed; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        ModuleElement lhs = bracket_eval(basis[i], bracket_[j][k]);
        ModuleElement rhs = bracket_eval(bracket_[i][j], basis[k]);
        rhs += bracket_eval(basis[j], bracket_[i][k]);
        if (lhs != rhs) {
          fail(4, tuple_witness({name(i), name(j), name(k)}));
          break;
        }
      }

  // Condition (5): derivation images bracket trivially from the left.
  for (std::size_t s = 0; s < v && report.axioms[4].passed; ++s)
    for (std::size_t i = 0; i < n; ++i) {
      if (!bracket_eval(partial_[s], basis[i]).is_zero()) {
        fail(5, tuple_witness({var(s), name(i)}));
        break;
      }
    }

  // Condition (6): derivation images are isotropic.
  for (std::size_t s = 0; s < v && report.axioms[5].passed; ++s)
    for (std::size_t t = s; t < v; ++t) {
      if (!module_->pairing(partial_[s], partial_[t]).is_zero()) {
        fail(6, tuple_witness({var(s), var(t)}));
        break;
      }
    }

  // Chain condition: the anchor kills every derivation image.
  for (std::size_t s = 0; s < v; ++s) {
    if (!anchor(partial_[s]).is_zero()) {
      report.anchor_chain.passed = false;
      report.anchor_chain.witness = tuple_witness({var(s)});
      break;
    }
  }

  // Randomized instances of all six conditions on general elements.
  Rng rng(seed);
  for (int trial = 0; trial < fuzz_trials; ++trial) {
    ModuleElement e1 = random_module_element(rng, module_, 2, 2);
    ModuleElement e2 = random_module_element(rng, module_, 2, 2);
    ModuleElement e3 = random_module_element(rng, module_, 2, 2);
    RingElement f = rng.ring_element(R, 2, 2, true);
    RingElement g = rng.ring_element(R, 2, 2, true);
    auto describe = [&](const char* extra) {
      std::string w = "randomized trial " + std::to_string(trial) + ": e1 = " +
                      element_to_string(e1) + ", e2 = " + element_to_string(e2) +
                      ", e3 = " + element_to_string(e3);
      if (extra && *extra)
        w += std::string(", ") + extra + ": f = " + f.to_string() + ", g = " + g.to_string();
      return w;
    };

    if (report.axioms[0].passed) {
      ModuleElement scaled = e2;
      scaled.scale(f);
      ModuleElement lhs = bracket_eval(e1, scaled);
      ModuleElement rhs = bracket_eval(e1, e2);
      rhs.scale(f);
      rhs.add_scaled(e2, module_->pairing(e1, partial_of(f)));
      if (lhs != rhs) fail(1, describe("scalars"));
    }
    if (report.axioms[1].passed) {
      RingElement lhs = module_->pairing(e1, partial_of(module_->pairing(e2, e3)));
      RingElement rhs = module_->pairing(bracket_eval(e1, e2), e3) +
                        module_->pairing(e2, bracket_eval(e1, e3));
      if (lhs != rhs) fail(2, describe(""));
    }
    if (report.axioms[2].passed) {
      ModuleElement lhs = bracket_eval(e1, e2) + bracket_eval(e2, e1);
      if (lhs != partial_of(module_->pairing(e1, e2))) fail(3, describe(""));
    }
    if (report.axioms[3].passed) {
      ModuleElement lhs = bracket_eval(e1, bracket_eval(e2, e3));
      ModuleElement rhs = bracket_eval(bracket_eval(e1, e2), e3);
      rhs += bracket_eval(e2, bracket_eval(e1, e3));
      if (lhs != rhs) fail(4, describe(""));
    }
    if (report.axioms[4].passed) {
      if (!bracket_eval(partial_of(f), e1).is_zero()) fail(5, describe("scalars"));
    }
    if (report.axioms[5].passed) {
      if (!module_->pairing(partial_of(f), partial_of(g)).is_zero()) fail(6, describe("scalars"));
    }
  }
  return report;
}

TangentComplex CourantDorfmanAlgebra::tangent_complex() const {
  TangentComplex tc;
  tc.module = module_;
  const std::size_t n = rank();
  const std::size_t v = var_count();
  tc.delta.assign(n, std::vector<RingElement>(v, RingElement::zero(ring())));
  tc.rho = anchor_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < v; ++s) tc.delta[i][s] = partial_[s].coord(i);

  tc.chain_condition_ok = true;
  for (std::size_t s = 0; s < v; ++s)
    if (!anchor(partial_[s]).is_zero()) tc.chain_condition_ok = false;

  tc.pairing_delta_invariant = true;
  for (std::size_t i = 0; i < n && tc.pairing_delta_invariant; ++i)
    for (std::size_t s = 0; s < v; ++s) {
      KahlerForm dxs(ring(), 1);
      dxs.add_term({static_cast<int>(s)}, RingElement::one(ring()));
      RingElement lhs = module_->pairing(module_->basis_element(i), partial_[s]);
      RingElement rhs = dxs.iota(anchor(module_->basis_element(i))).component({});
      if (lhs != rhs) {
        tc.pairing_delta_invariant = false;
        break;
      }
    }
  return tc;
}

bool CourantDorfmanAlgebra::is_split_exact(const TangentSplitting& splitting) const {
  const std::size_t n = rank();
  const std::size_t v = var_count();
  const RingSpecPtr& R = ring();
  if (splitting.section.size() != n)
    throw std::invalid_argument("section matrix must have one row per basis element");
  for (const auto& row : splitting.section)
    if (row.size() != v) throw std::invalid_argument("section matrix must have one column per variable");
  if (splitting.retraction.size() != v)
    throw std::invalid_argument("retraction matrix must have one row per variable");
  for (const auto& row : splitting.retraction)
    if (row.size() != n)
      throw std::invalid_argument("retraction matrix must have one column per basis element");

  TangentComplex tc = tangent_complex();
  if (!tc.chain_condition_ok || !tc.pairing_delta_invariant) return false;

  auto delta_of = [&](std::size_t s, std::size_t i) { return tc.delta[i][s]; };
  auto kron = [&](std::size_t a, std::size_t b) {
    return a == b ? RingElement::one(R) : RingElement::zero(R);
  };

  // Anchor after section is the identity on vector fields.
  for (std::size_t s = 0; s < v; ++s)
    for (std::size_t t = 0; t < v; ++t) {
      RingElement acc = RingElement::zero(R);
      for (std::size_t i = 0; i < n; ++i)
        if (!splitting.section[i][s].is_zero() && !anchor_[i][t].is_zero())
          acc += splitting.section[i][s] * anchor_[i][t];
      if (acc != kron(s, t)) return false;
    }

  // Retraction after the coanchor is the identity on one-forms.
  for (std::size_t s = 0; s < v; ++s)
    for (std::size_t t = 0; t < v; ++t) {
      RingElement acc = RingElement::zero(R);
      for (std::size_t i = 0; i < n; ++i)
        if (!splitting.retraction[t][i].is_zero() && !delta_of(s, i).is_zero())
          acc += splitting.retraction[t][i] * delta_of(s, i);
      if (acc != kron(s, t)) return false;
    }

  // Coanchor-retraction plus section-anchor is the identity on the module.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RingElement acc = RingElement::zero(R);
      for (std::size_t s = 0; s < v; ++s) {
        if (!splitting.retraction[s][i].is_zero() && !delta_of(s, j).is_zero())
          acc += splitting.retraction[s][i] * delta_of(s, j);
        if (!anchor_[i][s].is_zero() && !splitting.section[j][s].is_zero())
          acc += anchor_[i][s] * splitting.section[j][s];
      }
      if (acc != kron(i, j)) return false;
    }
  return true;
}

AlgebraPtr CourantDorfmanAlgebra::twist(const KahlerForm& psi) const {
  if (psi.degree() != 3) throw std::invalid_argument("twist expects a three-form");
  if (*psi.spec() != *ring()) throw std::invalid_argument("form is over a different ring");
  if (!psi.de_rham().is_zero()) throw std::invalid_argument("twist requires a closed three-form");

  const std::size_t n = rank();
  std::vector<VectorField> anchors;
  anchors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) anchors.push_back(anchor(module_->basis_element(i)));

  std::vector<std::vector<ModuleElement>> table = bracket_;
  for (std::size_t i = 0; i < n; ++i) {
    KahlerForm inner = psi.iota(anchors[i]);
    if (inner.is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      KahlerForm alpha = inner.iota(anchors[j]);
      if (!alpha.is_zero()) table[i][j] += coanchor(alpha);
    }
  }
  return create(module_, partial_, std::move(table));
}

BTransform CourantDorfmanAlgebra::b_transform(KahlerForm beta) const {
  return BTransform(shared_from_this(), std::move(beta));
}

Decision CourantDorfmanAlgebra::is_dirac(const std::vector<ModuleElement>& generators) const {
  for (const auto& g : generators) require_module(module_, g);
  for (std::size_t a = 0; a < generators.size(); ++a)
    for (std::size_t b = a; b < generators.size(); ++b)
      if (!module_->pairing(generators[a], generators[b]).is_zero()) return Decision::no;

  std::vector<std::vector<RingElement>> columns;
  columns.reserve(generators.size());
  for (const auto& g : generators) columns.push_back(g.coords());

  bool unknown_seen = false;
  for (std::size_t a = 0; a < generators.size(); ++a)
    for (std::size_t b = 0; b < generators.size(); ++b) {
      ModuleElement t = bracket_eval(generators[a], generators[b]);
      if (t.is_zero()) continue;
      SpanSolve res = solve_in_span(ring(), columns, t.coords());
      if (!res.consistent) return Decision::no;
      if (!res.ring_solution) {
        if (res.unique) return Decision::no;
        unknown_seen = true;
      }
    }
  return unknown_seen ? Decision::unknown : Decision::yes;
}

bool CourantDorfmanAlgebra::kernel_generators_check(
    const std::vector<ModuleElement>& generators) const {
  for (const auto& g : generators) {
    require_module(module_, g);
    if (!anchor(g).is_zero()) return false;
  }
  for (std::size_t a = 0; a < generators.size(); ++a)
    for (std::size_t b = 0; b < generators.size(); ++b) {
      ModuleElement t = bracket_eval(generators[a], generators[b]);
      for (std::size_t s = 0; s < var_count(); ++s)
        if (!module_->pairing(t, partial_[s]).is_zero()) return false;
    }
  return true;
}

BTransform::BTransform(AlgebraPtr algebra, KahlerForm beta)
    : algebra_(std::move(algebra)), beta_(std::move(beta)) {
  if (beta_.degree() != 2) throw std::invalid_argument("transform expects a two-form");
  if (*beta_.spec() != *algebra_->ring())
    throw std::invalid_argument("form is over a different ring");
}

ModuleElement BTransform::apply(const ModuleElement& e) const {
  KahlerForm alpha = beta_.iota(algebra_->anchor(e));
  ModuleElement out = e;
  if (!alpha.is_zero()) out -= algebra_->coanchor(alpha);
  return out;
}

bool BTransform::is_automorphism() const {
  if (!beta_.de_rham().is_zero()) return false;
  const std::size_t n = algebra_->rank();
  const auto& module = algebra_->module();
  std::vector<ModuleElement> image;
  image.reserve(n);
  for (std::size_t i = 0; i < n; ++i) image.push_back(apply(module->basis_element(i)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (module->pairing(image[i], image[j]) != module->gram_entry(i, j)) return false;
      if (apply(algebra_->bracket_entry(i, j)) != algebra_->bracket_eval(image[i], image[j]))
        return false;
    }
  for (std::size_t s = 0; s < algebra_->var_count(); ++s)
    if (apply(algebra_->partial_generator(s)) != algebra_->partial_generator(s)) return false;
  return true;
}

bool BTransform::intertwines_twists(const KahlerForm& psi) const {
  AlgebraPtr source = algebra_->twist(psi);
  AlgebraPtr target = algebra_->twist(psi + beta_.de_rham());
  const std::size_t n = algebra_->rank();
  const auto& module = algebra_->module();
  std::vector<ModuleElement> image;
  image.reserve(n);
  for (std::size_t i = 0; i < n; ++i) image.push_back(apply(module->basis_element(i)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (module->pairing(image[i], image[j]) != module->gram_entry(i, j)) return false;
      if (apply(source->bracket_entry(i, j)) != target->bracket_eval(image[i], image[j]))
        return false;
    }
  return true;
}

}  // namespace cordal
