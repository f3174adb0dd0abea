/*
 * Metric modules carrying a derivation into the module and a bilinear
 * bracket on it, with the six defining identities checked exactly.
 *
 * The structure data is a table of bracket values on basis pairs plus
 * the image of each ring variable under the derivation; evaluation on
 * general elements expands the right slot by the scaling rule
 *   [e, f e'] = f [e, e'] + <e, del f> e'
 * and the left slot by the rule derived from it and the symmetrized
 * identity,
 *   [f e, e'] = f [e, e'] - <e', del f> e + <e, e'> del f.
 * Around the algebra live the anchor (elements acting as derivations
 * of the ring), the coanchor (one-forms mapped back into the module),
 * twists of the bracket by closed three-forms, two-form transforms,
 * isotropic bracket-closed submodules, and builders for the standard
 * example families.
 */
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cordal/forms.hpp"
#include "cordal/metric_module.hpp"
#include "cordal/ring_matrix.hpp"

namespace cordal {

class CourantDorfmanAlgebra;
using AlgebraPtr = std::shared_ptr<const CourantDorfmanAlgebra>;

enum class Decision { yes, no, unknown };

struct AxiomCheck {
  bool passed = true;
  std::string witness;  // human-readable counterexample when failed
};

struct AxiomReport {
  std::array<AxiomCheck, 6> axioms;  // index 0 holds condition (1), and so on
  AxiomCheck anchor_chain;           // anchor composed with coanchor vanishes
  int fuzz_trials = 0;

  const AxiomCheck& axiom(int number) const { return axioms.at(static_cast<std::size_t>(number - 1)); }
  bool all_passed() const;
};

// Candidate splitting of the three-term complex (one-forms -> module ->
// vector fields): `section` sends the coordinate vector field d/dx_s to
// the element with coordinates section[.][s]; `retraction` sends basis
// element i to the one-form with dx_s coefficient retraction[s][i].
struct TangentSplitting {
  std::vector<std::vector<RingElement>> section;     // rank x var_count
  std::vector<std::vector<RingElement>> retraction;  // var_count x rank
};

struct TangentComplex {
  ModulePtr module;
  std::vector<std::vector<RingElement>> delta;  // rank x var_count, column s = image of dx_s
  std::vector<std::vector<RingElement>> rho;    // rank x var_count, [i][s] = action of basis i on x_s
  bool chain_condition_ok = false;       // rho after delta is zero
  bool pairing_delta_invariant = false;  // <e, delta(alpha)> equals the contraction of alpha
};

class BTransform;

class CourantDorfmanAlgebra : public std::enable_shared_from_this<CourantDorfmanAlgebra> {
 public:
  // Validates shapes (table dimensions and ring membership) only; the
  // defining identities are checked separately by verify_axioms, so
  // deliberately broken structures can be represented and examined.
  static AlgebraPtr create(ModulePtr module, std::vector<ModuleElement> partial_table,
                           std::vector<std::vector<ModuleElement>> bracket_table);

  const ModulePtr& module() const { return module_; }
  const RingSpecPtr& ring() const { return module_->ring(); }
  std::size_t rank() const { return module_->rank(); }
  std::size_t var_count() const { return partial_.size(); }
  const ModuleElement& partial_generator(std::size_t var) const { return partial_.at(var); }
  const ModuleElement& bracket_entry(std::size_t i, std::size_t j) const {
    return bracket_.at(i).at(j);
  }
  // anchor_matrix()[i][s] = value of the derivation attached to basis
  // element i on the variable x_s.
  const RingMatrix& anchor_matrix() const { return anchor_; }

  // Image of a ring element under the derivation into the module.
  ModuleElement partial_of(const RingElement& f) const;
  // R-linear extension of dx_s -> partial_generator(s) to one-forms.
  ModuleElement coanchor(const KahlerForm& alpha) const;
  VectorField anchor(const ModuleElement& e) const;
  RingElement anchor_apply(const ModuleElement& e, const RingElement& f) const;

  ModuleElement bracket_eval(const ModuleElement& e1, const ModuleElement& e2) const;
  // Antisymmetrized bracket: half the difference of the two orders.
  ModuleElement courant_bracket(const ModuleElement& e1, const ModuleElement& e2) const;

  // Checks the six defining identities on every basis tuple and ring
  // variable, the chain condition, and fuzz_trials randomized instances.
  AxiomReport verify_axioms(int fuzz_trials = 0, std::uint64_t seed = 2026) const;

  TangentComplex tangent_complex() const;
  bool is_split_exact(const TangentSplitting& splitting) const;

  // New algebra with the bracket shifted by a closed three-form; the
  // pairing and derivation are unchanged.  Throws unless psi is closed.
  AlgebraPtr twist(const KahlerForm& psi) const;
  BTransform b_transform(KahlerForm beta) const;

  // Whether the span of the generators is isotropic and closed under
  // the bracket.  Membership is decided by exact elimination; when the
  // system is underdetermined and the particular solution does not lie
  // in the ring, the outcome is reported as unknown.
  Decision is_dirac(const std::vector<ModuleElement>& generators) const;

  // Generators claimed to span (part of) the anchor kernel: checks that
  // they are killed by the anchor and that their brackets pair to zero
  // with every coanchor generator.
  bool kernel_generators_check(const std::vector<ModuleElement>& generators) const;

  // Largest degree measure appearing in the gram, derivation, and
  // bracket tables; bounds how much a single operation can raise degrees.
  int structure_degree() const { return structure_degree_; }
  bool partial_is_constant() const { return partial_constant_; }
  bool bracket_is_constant() const { return bracket_constant_; }

 private:
  CourantDorfmanAlgebra(ModulePtr module, std::vector<ModuleElement> partial_table,
                        std::vector<std::vector<ModuleElement>> bracket_table);

  ModulePtr module_;
  std::vector<ModuleElement> partial_;
  std::vector<std::vector<ModuleElement>> bracket_;
  RingMatrix anchor_;
  bool partial_constant_ = true;
  bool bracket_constant_ = true;
  int structure_degree_ = 0;
};

// The map e -> e - coanchor(contraction of beta along the anchor of e)
// attached to a two-form beta.
class BTransform {
 public:
  BTransform(AlgebraPtr algebra, KahlerForm beta);

  const KahlerForm& beta() const { return beta_; }
  ModuleElement apply(const ModuleElement& e) const;

  // For closed beta: bracket and pairing preservation on all basis pairs.
  bool is_automorphism() const;
  // The map carries the psi-twisted bracket to the bracket twisted by
  // psi plus the exterior derivative of beta; checked on basis pairs.
  bool intertwines_twists(const KahlerForm& psi) const;

 private:
  AlgebraPtr algebra_;
  KahlerForm beta_;
};

// Example families.  Each builder returns a structure passing verify_axioms.
AlgebraPtr build_q0(const RingSpecPtr& ring);
AlgebraPtr build_q0(const std::vector<std::string>& variables);
AlgebraPtr build_quadratic_lie(const RingSpecPtr& ring, const std::vector<std::string>& basis_names,
                               const std::vector<std::vector<std::vector<Rational>>>& structure_constants,
                               const std::vector<std::vector<Rational>>& gram);
AlgebraPtr build_so3();
AlgebraPtr build_loop_so3();
AlgebraPtr build_bloch_so3();

}  // namespace cordal
