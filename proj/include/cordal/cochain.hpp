/*
 * Graded cochains over a Courant-Dorfman algebra.
 *
 * A degree-p cochain is a family of sparse tables, one for each level
 * k = 0..floor(p/2).  The level-k table assigns a ring element to each
 * pair (ordered tuple of p-2k basis indices, sorted multiset of k
 * variable indices); the tuple positions stand for module arguments and
 * the multiset entries for derivation slots filled with the coordinate
 * generators.  Values on non-basis arguments are defined by peeling
 * scalar coefficients off the rightmost module slot (which is linear
 * over the ring) and, for the other slots, adding pairing-weighted
 * correction terms one level up; `evaluate` implements exactly that
 * recursion.  A table family is admissible when every adjacent
 * transposition of two module slots flips the value up to a correction
 * by the derivative of the gram entry of the transposed pair, read from
 * the level above; `validate` checks each stored instance of that
 * relation and reports the first failure.
 *
 * The algebra structure: `product` is the shuffle product on module
 * slots combined with the multiset merge on derivation slots;
 * `differential` raises degree by one using the structure tables
 * (anchor row, derivation generators, bracket coefficients) and
 * certifies its output through `validate` unless asked not to.
 * Contractions with a module element, a scalar, or a one-form lower
 * the degree, and the associated transport operators are the graded
 * commutators of those contractions with the differential.
 */
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cordal/cd_algebra.hpp"
#include "cordal/random_gen.hpp"

namespace cordal {

struct CochainKey {
  std::vector<int> elements;  // ordered basis indices of the module
  std::vector<int> weights;   // sorted multiset of variable indices
  friend auto operator<=>(const CochainKey&, const CochainKey&) = default;
};

using CochainTable = std::map<CochainKey, RingElement>;

class Cochain {
 public:
  Cochain(AlgebraPtr algebra, int degree);

  static Cochain from_scalar(AlgebraPtr algebra, RingElement value);
  static Cochain from_covector(AlgebraPtr algebra, const Covector& lambda);

  // Largest degree the library will materialize; guards table sizes.
  static int degree_cap();
  static void set_degree_cap(int cap);

  const AlgebraPtr& algebra() const { return algebra_; }
  int degree() const { return degree_; }
  std::size_t level_count() const { return levels_.size(); }
  const CochainTable& level(std::size_t k) const;
  RingElement entry(std::size_t k, const CochainKey& key) const;
  // Stores (or accumulates into) one table entry; zero results are erased.
  void set_entry(std::size_t k, CochainKey key, RingElement value);
  void add_entry(std::size_t k, const CochainKey& key, const RingElement& value);

  bool is_zero() const;
  RingElement scalar_value() const;  // degree 0 only

  Cochain operator-() const;
  Cochain& operator+=(const Cochain& other);
  Cochain& operator-=(const Cochain& other);
  void scale(const RingElement& c);
  Cochain& add_scaled(const Cochain& other, const RingElement& c);
  bool operator==(const Cochain& other) const;

  // Value on arbitrary module elements and one-forms; the number of
  // forms selects the level and the element count must match it.
  RingElement evaluate(const std::vector<ModuleElement>& e_args,
                       const std::vector<KahlerForm>& alpha_args) const;

 private:
  AlgebraPtr algebra_;
  int degree_ = 0;
  std::vector<CochainTable> levels_;

  void check_key(std::size_t k, const CochainKey& key) const;
  RingElement eval_rec(std::size_t k, const RingElement& coeff,
                       const std::vector<ModuleElement>& pending,
                       const std::vector<int>& suffix,
                       const std::vector<int>& weights) const;
};

Cochain operator+(Cochain a, const Cochain& b);
Cochain operator-(Cochain a, const Cochain& b);

struct CochainCheck {
  bool ok = true;
  std::string violation;  // human-readable first failure, empty when ok
};

// Checks every stored (and correction-implied) adjacent-transposition
// relation; reports the first violated one.
CochainCheck validate(const Cochain& omega);

// Shuffle product; degrees add.
Cochain product(const Cochain& omega, const Cochain& eta);

// Degree-raising differential built from the structure tables.  With
// validate_output the result is certified admissible (throws
// std::logic_error otherwise); raw mode skips the certificate.
Cochain differential(const Cochain& omega, bool validate_output = true);

// Contractions.  iota_e inserts a module element into the first slot
// (degree -1); iota_alpha fills one derivation slot with a one-form and
// iota_f with the exact form of a scalar (degree -2).  Degrees below
// the floor give the zero cochain of degree 0.
Cochain iota_e(const ModuleElement& e, const Cochain& omega);
Cochain iota_f(const RingElement& f, const Cochain& omega);
Cochain iota_alpha(const KahlerForm& alpha, const Cochain& omega);

// Transport operators: graded commutators of the contractions with the
// differential.
Cochain lie_e(const ModuleElement& e, const Cochain& omega);
Cochain lie_f(const RingElement& f, const Cochain& omega);

// The degree-3 cochain packaging the bracket pairings and the negated
// anchor rows.  Its admissibility is equivalent to the pairing-
// invariance and symmetric-part conditions of the structure; a failure
// is reported as std::invalid_argument.
Cochain theta(const AlgebraPtr& algebra);

// Pullback of a differential form along the anchor: level zero is the
// iterated contraction with the anchors of the arguments (first
// argument innermost), higher levels vanish.
Cochain rho_star(const AlgebraPtr& algebra, const KahlerForm& form);

// Level filtration: true when every level above i is zero.
bool in_C(const Cochain& omega, std::size_t i);
// Vanishing filtration: member of level filtration i whose level-k
// tables kill any i-k+1 arguments taken from the derivation images.
bool in_F(const Cochain& omega, std::size_t i);
// Ideal of cochains vanishing when all module arguments are derivation
// images (for even degree the top level must vanish identically).
bool in_I(const Cochain& omega);

struct FiltrationTag {
  std::size_t c_level = 0;             // smallest level-filtration index containing the cochain
  std::optional<std::size_t> f_level;  // smallest vanishing-filtration index containing it
  bool in_ideal = false;
};
FiltrationTag filtration_tag(const Cochain& omega);

// Top-level table of a level-filtration member, certified alternating.
CochainTable gr_component(const Cochain& omega, std::size_t i);

// Signed average over permutations of the module slots; the result is
// alternating by construction and is returned as raw tables keyed by
// strictly increasing tuples.
struct AlternatingTables {
  int degree = 0;
  std::vector<CochainTable> levels;
};
AlternatingTables symmetrize(const Cochain& omega);

// Level-zero table viewed as a multilinear cochain of the bracket
// algebra on the module.
CochainTable lp_projection(const Cochain& omega);

// Value of the bottom component on arbitrary module elements.
using Omega0Oracle = std::function<RingElement(const std::vector<ModuleElement>&)>;

// Rebuilds the full cochain from its bottom component using a pairing
// witness that sums to one; validates the result.
Cochain reconstruct_from_omega0(const AlgebraPtr& algebra, const Omega0Oracle& omega0,
                                int degree, const FullnessWitness& witness);

// Random admissible cochain: free values on strictly increasing keys,
// completed level by level through the transposition relation.
Cochain random_valid_cochain(Rng& rng, const AlgebraPtr& algebra, int degree,
                             int coeff_degree, int terms_per_level);

}  // namespace cordal
