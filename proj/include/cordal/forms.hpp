/*
 * Vector fields and differential forms over a coefficient ring.
 * Vector fields are derivations of the ring written in the coordinate
 * basis; forms are skew multilinear objects stored on strictly
 * increasing index keys.  The exterior derivative, wedge product,
 * interior product, Lie derivative and the Laurent residue live here.
 */
#pragma once

#include <map>
#include <vector>

#include "cordal/ring.hpp"

namespace cordal {

class VectorField {
 public:
  explicit VectorField(RingSpecPtr spec);
  static VectorField coordinate(RingSpecPtr spec, std::size_t var);

  const RingSpecPtr& spec() const { return spec_; }
  const RingElement& component(std::size_t var) const { return comps_[var]; }
  void set_component(std::size_t var, RingElement value);
  bool is_zero() const;

  // Action on a ring element as a derivation.
  RingElement apply(const RingElement& f) const;
  // Commutator of derivations.
  VectorField commutator(const VectorField& other) const;

  VectorField& operator+=(const VectorField& other);
  VectorField& add_scaled(const VectorField& other, const RingElement& c);
  bool operator==(const VectorField& other) const { return comps_ == other.comps_; }

 private:
  RingSpecPtr spec_;
  std::vector<RingElement> comps_;  // one per ring variable
};

class KahlerForm {
 public:
  // Keys are strictly increasing variable-index vectors of length equal
  // to the form degree; values are ring elements.  Degrees above the
  // variable count are representable but necessarily zero.
  using ComponentMap = std::map<std::vector<int>, RingElement>;

  KahlerForm(RingSpecPtr spec, int degree);
  static KahlerForm zero(RingSpecPtr spec, int degree) { return KahlerForm(std::move(spec), degree); }
  static KahlerForm d0(const RingElement& f);  // exterior derivative of a ring element

  const RingSpecPtr& spec() const { return spec_; }
  int degree() const { return degree_; }
  bool is_zero() const { return comps_.empty(); }
  const ComponentMap& components() const { return comps_; }
  RingElement component(const std::vector<int>& key) const;

  // Adds value * dx_{key}; the key is sorted with the corresponding
  // sign, and keys with a repeated index are dropped as zero.
  void add_term(std::vector<int> key, RingElement value);

  KahlerForm operator-() const;
  KahlerForm& operator+=(const KahlerForm& other);
  KahlerForm& operator-=(const KahlerForm& other);
  KahlerForm& add_scaled(const KahlerForm& other, const RingElement& c);
  KahlerForm scaled(const RingElement& c) const;
  bool operator==(const KahlerForm& other) const {
    return degree_ == other.degree_ && comps_ == other.comps_;
  }
  bool operator!=(const KahlerForm& other) const { return !(*this == other); }

  KahlerForm wedge(const KahlerForm& other) const;
  KahlerForm de_rham() const;
  KahlerForm iota(const VectorField& v) const;
  // Cartan formula: contraction and exterior derivative anticommutator.
  KahlerForm lie(const VectorField& v) const;

  // Rational coefficient of z^{-1} dz; only for degree-one forms in the
  // Laurent family.  Returned as a constant ring element.
  RingElement residue() const;

 private:
  RingSpecPtr spec_;
  int degree_;
  ComponentMap comps_;
};

KahlerForm operator+(KahlerForm a, const KahlerForm& b);
KahlerForm operator-(KahlerForm a, const KahlerForm& b);

}  // namespace cordal
