/*
 * Dense matrices of ring elements: exact determinants and inverses.
 *
 * Matrices are small (module ranks), so the determinant uses a
 * subset-sum dynamic program over column masks, which avoids the
 * intermediate expression swell of naive Laplace recursion while
 * staying division-free.  Inverses go through the adjugate and are
 * only defined when the determinant is a unit of the ring.
 */
#pragma once

#include <optional>
#include <vector>

#include "cordal/ring.hpp"

namespace cordal {

using RingMatrix = std::vector<std::vector<RingElement>>;

// Throws std::invalid_argument unless m is square with entries over spec.
void require_square_matrix(const RingSpecPtr& spec, const RingMatrix& m);

RingMatrix identity_matrix(const RingSpecPtr& spec, std::size_t n);

RingElement ring_matrix_determinant(const RingSpecPtr& spec, const RingMatrix& m);

// Returns the inverse when the determinant is a unit, std::nullopt otherwise.
std::optional<RingMatrix> ring_matrix_inverse(const RingSpecPtr& spec, const RingMatrix& m);

RingMatrix ring_matrix_product(const RingSpecPtr& spec, const RingMatrix& a, const RingMatrix& b);

// Outcome of solving  sum_j x_j * columns[j] = target  for ring coefficients.
// Fraction-free elimination decides solvability over the fraction field
// exactly; a particular solution (free unknowns set to zero) is reported as a
// ring solution when every entry divides back into the ring.  With `unique`
// set, the absence of a ring solution is conclusive; otherwise another
// solution might exist in the ring and the question stays open.
struct SpanSolve {
  bool consistent = false;  // solvable over the fraction field
  bool unique = false;      // the fraction-field solution is unique
  std::optional<std::vector<RingElement>> ring_solution;
};

SpanSolve solve_in_span(const RingSpecPtr& spec,
                        const std::vector<std::vector<RingElement>>& columns,
                        const std::vector<RingElement>& target);

}  // namespace cordal
