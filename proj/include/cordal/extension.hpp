/*
 * Central extensions of Courant-Dorfman algebras by their base ring.
 *
 * A closed degree-2 cochain induces a structure on E + R*eps: the
 * pairing extends by zero on the new generator, the derivation gains a
 * component given by the negated top table of the cochain, and the
 * bracket gains the bottom table.  Cochains differing by an exact term
 * give isomorphic extensions, witnessed by an explicit covector shift.
 */
#pragma once

#include "cordal/cd_algebra.hpp"
#include "cordal/cochain.hpp"

namespace cordal {

// Builds the extension of omega's algebra by a rank-1 summand named
// `central_name`.  Requires omega valid, of degree 2, and closed;
// throws std::invalid_argument otherwise.  The result is certified
// against the defining identities.
AlgebraPtr central_extension(const Cochain& omega, const std::string& central_name = "eps");

// The residue-pairing 2-cocycle of a loop-style algebra: a quadratic
// structure over the univariate Laurent ring with zero derivation
// table.  Its bottom table is empty and its derivation-level value is
// -1, so evaluation produces <d/dz of the first argument, second
// argument>.  Closed, and exact for no covector since the derivation
// vanishes.
Cochain kac_moody_cocycle(const AlgebraPtr& algebra);

// Verifies that shifting the central coordinate by lambda is a strict
// morphism of extensions from `from_ext` to `to_ext` over `base`:
// (e, f) -> (e, f + lambda(e)).  This holds exactly when the defining
// cochains differ by the image of lambda.
bool extension_shift_is_morphism(const AlgebraPtr& base, const Covector& lambda,
                                 const AlgebraPtr& from_ext, const AlgebraPtr& to_ext);

}  // namespace cordal
