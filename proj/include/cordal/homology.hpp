/*
 * Exact cohomology of the graded cochain complex, truncated by
 * coefficient degree.  A truncated basis enumerates the (level, key,
 * monomial) coordinates of one degree whose coefficients stay inside a
 * total-degree window, then solves the adjacent-transposition relations
 * once and for all: its members parameterize every admissible cochain
 * in the window, and arbitrary admissible cochains decompose uniquely
 * against it.  Differential matrices, kernel and image dimensions,
 * representative cocycles, bounded primitive searches, and the
 * dictionary from degree-2 classes to central extensions are all read
 * off those bases with fraction-free rational elimination.  Over the
 * rational base the reported dimensions are exact; over function
 * coefficients they are truncated and labeled as such, with the window
 * growing per degree by the measured coefficient growth of the
 * structure tables.
 */
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cordal/cochain.hpp"
#include "cordal/linalg.hpp"

namespace cordal {

struct CochainCoordinate {
  std::size_t level = 0;
  CochainKey key;
  Monomial monomial;
  friend auto operator<=>(const CochainCoordinate&, const CochainCoordinate&) = default;
};

// Basis of the admissible cochains of one degree with coefficient
// degree inside the window; vectors are expressed over the listed
// ambient coordinates and carry an identity pattern on free_columns.
struct TruncatedBasis {
  AlgebraPtr algebra;
  int degree = 0;
  int coefficient_bound = 0;  // normalized to 0 for the rational base
  std::vector<CochainCoordinate> coordinates;
  QMatrix vectors;
  std::vector<std::size_t> free_columns;

  std::size_t ambient_dimension() const { return coordinates.size(); }
  std::size_t dimension() const { return vectors.size(); }

  Cochain member(std::size_t index) const;
  Cochain combine(const QVector& coefficients) const;
  // Coordinates of a cochain over the ambient list; throws
  // std::invalid_argument when a table entry falls outside the window.
  QVector ambient(const Cochain& omega) const;
  // Decomposition against the basis; nullopt when the cochain is not in
  // the spanned space (outside the window or not admissible).
  std::optional<QVector> coordinates_of(const Cochain& omega) const;
};

// Largest possible coefficient-degree growth of one application of the
// differential, measured from the structure tables (zero for the
// rational base).
int structure_degree(const AlgebraPtr& algebra);

// Ambient coordinate list of one degree and window, without relations.
std::vector<CochainCoordinate> enumerate_coordinates(const AlgebraPtr& algebra, int degree,
                                                     int coefficient_bound);

// Solves the transposition relations over the ambient coordinates.  A
// nonzero shuffle_seed permutes the coordinate enumeration first; the
// computed dimensions are independent of that order.
TruncatedBasis assemble(const AlgebraPtr& algebra, int degree, int coefficient_bound,
                        unsigned shuffle_seed = 0);

// Matrix of the differential between two truncated bases (rows indexed
// by the target basis, columns by the source basis).  Reports a bound
// overflow as std::invalid_argument when the image leaves the target
// window.
QMatrix differential_matrix(const TruncatedBasis& source, const TruncatedBasis& target);
// Convenience form: source window = coefficient_bound, target window =
// coefficient_bound + structure_degree(algebra).
QMatrix differential_matrix(const AlgebraPtr& algebra, int degree, int coefficient_bound);

struct DegreeSummary {
  int degree = 0;
  int coefficient_bound = 0;  // window used at this degree
  std::size_t space_dimension = 0;
  std::size_t kernel_dimension = 0;
  std::size_t image_dimension = 0;
  long long betti = 0;
  std::vector<Cochain> representatives;  // cocycles spanning kernel modulo image
};

struct CohomologyReport {
  int q_max = 0;
  int coefficient_bound = 0;
  int structure_degree = 0;
  bool truncated = false;  // true over function coefficients
  std::vector<DegreeSummary> degrees;
};

// Kernel and image dimensions per degree up to q_max, with
// representative cocycles.  Windows grow per degree by the measured
// structure growth so that every image is computed without clipping.
CohomologyReport cohomology(const AlgebraPtr& algebra, int q_max, int coefficient_bound,
                            unsigned shuffle_seed = 0);

// Exact closedness of an admissible cochain (throws
// std::invalid_argument when the input fails validation).
bool is_cocycle(const Cochain& omega);

// Bounded primitive search: a certified eta with d(eta) = omega whose
// coefficients stay within the bound, or nullopt ("none up to the
// bound" — never a claim about unbounded exactness).
std::optional<Cochain> is_coboundary(const Cochain& omega, int coefficient_bound);

// Basis of the truncated degree-2 cohomology mapped through the central
// extension construction: one (representative, extension) pair per
// class.
std::vector<std::pair<Cochain, AlgebraPtr>> classify_extensions(const AlgebraPtr& algebra,
                                                                int coefficient_bound);

}  // namespace cordal
