/*
 * Symmetric multiderivations of a coefficient ring: arity-k operators
 * that act as a derivation in each argument, determined by their values
 * on multisets of ring variables.  Provides the shuffle product, the
 * insertion composite (kept as an exact operator, since inserting one
 * multiderivation into another is second order in general), and the
 * canonical odd Poisson bracket, which does close on multiderivations.
 */
#pragma once

#include <map>
#include <vector>

#include "cordal/forms.hpp"
#include "cordal/ring.hpp"

namespace cordal {

class MultiDerivation {
 public:
  // Keys are sorted variable-index multisets of length equal to the
  // arity; values are ring elements.  Zero values are never stored.
  using Table = std::map<std::vector<int>, RingElement>;

  MultiDerivation(RingSpecPtr spec, int arity);
  static MultiDerivation zero(RingSpecPtr spec, int arity) { return MultiDerivation(std::move(spec), arity); }
  static MultiDerivation scalar(const RingElement& f);                // arity 0
  static MultiDerivation from_vector_field(const VectorField& v);     // arity 1
  static MultiDerivation coordinate(RingSpecPtr spec, std::size_t j); // d/dx_j

  const RingSpecPtr& spec() const { return spec_; }
  int arity() const { return arity_; }
  bool is_zero() const { return table_.empty(); }
  const Table& table() const { return table_; }

  void add_term(std::vector<int> multiset, RingElement value);
  RingElement table_value(const std::vector<int>& multiset) const;

  // Action on arbitrary ring elements, expanded multilinearly through
  // the partial derivatives of the arguments.
  RingElement apply(const std::vector<RingElement>& args) const;

  MultiDerivation& operator+=(const MultiDerivation& other);
  MultiDerivation& add_scaled(const MultiDerivation& other, const RingElement& c);
  MultiDerivation operator-() const;
  bool operator==(const MultiDerivation& other) const {
    return arity_ == other.arity_ && table_ == other.table_;
  }
  bool operator!=(const MultiDerivation& other) const { return !(*this == other); }

 private:
  RingSpecPtr spec_;
  int arity_;
  Table table_;
};

// Symmetric shuffle product; arities add.
MultiDerivation xi_product(const MultiDerivation& h, const MultiDerivation& k);

// Exact composite "insert k into the first slot of h".  The result is a
// second-order operator in general, so both factors are retained and the
// action on arbitrary arguments is computed exactly.  tabulated() gives
// the multiset table of the action on ring variables, which coincides
// with the operator itself exactly when the composite happens to be a
// multiderivation.
class XiInsertion {
 public:
  XiInsertion(MultiDerivation outer, MultiDerivation inner);
  int arity() const { return outer_.arity() + inner_.arity() - 1; }
  const MultiDerivation& outer() const { return outer_; }
  const MultiDerivation& inner() const { return inner_; }
  RingElement apply(const std::vector<RingElement>& args) const;
  MultiDerivation tabulated() const;

 private:
  MultiDerivation outer_, inner_;
};

// Throws std::invalid_argument when h has arity zero.
XiInsertion xi_insert(const MultiDerivation& h, const MultiDerivation& k);

// Commutator of insertions.  This does close on multiderivations; the
// result is tabulated on generator multisets.  An arity-zero operand
// contributes nothing to its side of the commutator.
MultiDerivation xi_poisson(const MultiDerivation& h, const MultiDerivation& k);

}  // namespace cordal
