/*
 * Degree -2 bracket on the cochain algebra of a structure whose
 * bilinear form is invertible over the ring.
 *
 * Each cochain level determines, after raising an index with the
 * inverse form, a table of module elements (`sharp_lift`).  The
 * bracket of two cochains combines two raw operations: `bullet` pairs
 * the raised last slots of the factors through the form, and `diamond`
 * inserts the scalar value of one factor into a derivation slot of the
 * other.  Their signed combination `poisson_bracket` lands two degrees
 * down, is admissible whenever the inputs are, and reproduces the
 * differential as bracketing against the canonical degree-3 cochain
 * (with a minus sign).  Bracketing the canonical cochain with itself
 * measures exactly the failure of the structure identities that the
 * differential's square does, level by level: the module bracket's
 * Leibniz identity at level zero, brackets against derivation images
 * at level one, and pairings of derivation images at level two.
 *
 * `iterated_bracket` peels a cochain down to a single coefficient by
 * bracketing against flats of module elements and then against ring
 * elements; with the sign fixed here it recovers the table values.
 * `rescale_obstruction` searches for a degree-2 primitive of the
 * canonical cochain within a coefficient-degree window; it uses the
 * differential directly, so it also works when the form is degenerate.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cordal/cochain.hpp"

namespace cordal {

// One level of the index-raised view of a degree-p cochain: the
// level-k table maps (ordered tuple of p-2k-1 basis indices, sorted
// size-k multiset of variable indices) to the module element obtained
// by applying the inverse bilinear form to the covector that the last
// module slot defines.  Zero elements are omitted.  Levels with
// p-2k-1 < 0 carry no table and are not listed.
struct SharpComponent {
  std::size_t level = 0;
  std::map<CochainKey, ModuleElement> table;
};

// Index-raised view of every level; requires an invertible form.
// Pairing each table value back against the basis elements recovers
// the original entries.
std::vector<SharpComponent> sharp_lift(const Cochain& omega);

// Pairing part of the bracket: contracts the raised last slots of the
// two factors through the bilinear form, riffles the remaining module
// slots with sign, and splits the derivation slots without sign.  The
// result is a degree p+q-2 table family carrying an overall sign that
// depends on the second factor's degree; it is not admissible on its
// own in general.  Degrees below zero collapse to the zero scalar.
Cochain bullet(const Cochain& omega, const Cochain& eta);

// Composition part of the bracket: for each way of feeding the scalar
// value of a level of the second factor into one derivation slot of a
// level of the first (differentiating by the slot's variable), riffles
// the module slots with sign and splits the remaining derivation slots
// without.  Same degree and admissibility caveats as `bullet`.
Cochain diamond(const Cochain& omega, const Cochain& eta);

// The degree -2 bracket: diamond both ways (the reversed copy signed
// by the product of the degrees) plus the pairing part.  Requires an
// invertible form; the output is certified admissible.
Cochain poisson_bracket(const Cochain& omega, const Cochain& eta);

// Checks that the differential agrees with bracketing against the
// negated canonical degree-3 cochain on a deterministic sample of
// admissible cochains of degrees 0 through 4.
bool hamiltonian_check(const AlgebraPtr& algebra, int trials = 10,
                       std::uint64_t seed = 2026);

// The bracket of the canonical degree-3 cochain with itself; zero
// exactly when the structure identities beyond admissibility hold.
Cochain maurer_cartan_defect(const AlgebraPtr& algebra);

// True when the self-bracket of the canonical cochain vanishes.  A
// structure whose canonical cochain is not even admissible reports
// false rather than throwing.
bool maurer_cartan_check(const AlgebraPtr& algebra);

// Nested bracketing against the flats of e_list, then against the
// members of f_list, scaled by the parity of the reversal of the
// module arguments.  Requires |f_list| = k with p-2k = |e_list|; the
// result equals the cochain's value on those arguments (with the
// derivation slots filled by the exact one-forms of f_list).
RingElement iterated_bracket(const Cochain& omega, const std::vector<ModuleElement>& e_list,
                             const std::vector<RingElement>& f_list);

// Bounded search for a degree-2 primitive of the canonical cochain:
// solves d(omega) = Theta over cochains with coefficients inside the
// given degree window.  Returns a certified primitive, or nullopt when
// none exists within the window (which is not evidence that the class
// is nonzero).  Works for degenerate forms as well.
std::optional<Cochain> rescale_obstruction(const AlgebraPtr& algebra, int coefficient_bound);

}  // namespace cordal
