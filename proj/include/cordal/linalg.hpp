/*
 * Exact rational linear algebra on dense matrices, sized for truncated
 * cochain spaces.  The single workhorse is a fraction-free (Bareiss)
 * forward elimination on denominator-cleared integer rows followed by a
 * cheap rational normalization pass; rank, nullspace, linear solving,
 * and span extension are all read off that one reduced echelon form.
 * No floating point anywhere.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cordal/scalar.hpp"

namespace cordal {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

struct EchelonForm {
  QMatrix rows;                     // reduced rows; each pivot entry equals one
  std::vector<std::size_t> pivots;  // pivot column of each reduced row, increasing
  std::size_t column_count = 0;
  std::size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form of the given rows (each of length
// column_count).  Zero rows are dropped.
EchelonForm reduced_row_echelon(QMatrix rows, std::size_t column_count);

std::size_t matrix_rank(const QMatrix& rows, std::size_t column_count);

struct NullspaceBasis {
  QMatrix vectors;                        // one basis vector per free column
  std::vector<std::size_t> free_columns;  // vectors[i][free_columns[i]] == 1
};
// Basis of {x : rows * x = 0}; the vectors carry the identity pattern
// on the free columns, so coefficients can be read off directly.
NullspaceBasis nullspace_basis(const QMatrix& rows, std::size_t column_count);

// Solves sum_j x_j * columns[j] = rhs exactly; nullopt when the system
// is inconsistent.  Free variables are set to zero.
std::optional<QVector> solve_columns(const QMatrix& columns, const QVector& rhs);

// Indices (into candidate_columns) of the candidates that enlarge the
// span of the base columns, scanned left to right.
std::vector<std::size_t> independent_columns(const QMatrix& base_columns,
                                             const QMatrix& candidate_columns);

}  // namespace cordal
