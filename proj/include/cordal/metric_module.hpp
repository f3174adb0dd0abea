/*
 * Free modules of finite rank equipped with a symmetric bilinear form.
 *
 * A module is created once (with its ring, basis names, and Gram
 * matrix) and shared immutably.  Elements and covectors are coordinate
 * vectors over the ring; the flat map sends an element to the covector
 * it pairs against, and when the Gram determinant is a unit the sharp
 * map inverts it exactly.
 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cordal/random_gen.hpp"
#include "cordal/ring.hpp"
#include "cordal/ring_matrix.hpp"

namespace cordal {

class FreeMetricModule;
using ModulePtr = std::shared_ptr<const FreeMetricModule>;

class ModuleElement {
 public:
  explicit ModuleElement(ModulePtr module);  // zero element
  ModuleElement(ModulePtr module, std::vector<RingElement> coords);

  const ModulePtr& module() const { return module_; }
  const std::vector<RingElement>& coords() const { return coords_; }
  const RingElement& coord(std::size_t i) const { return coords_.at(i); }
  void set_coord(std::size_t i, RingElement value);

  bool is_zero() const;
  ModuleElement operator-() const;
  ModuleElement& operator+=(const ModuleElement& other);
  ModuleElement& operator-=(const ModuleElement& other);
  ModuleElement& scale(const RingElement& f);
  ModuleElement& add_scaled(const ModuleElement& other, const RingElement& f);

  bool operator==(const ModuleElement& other) const;
  bool operator!=(const ModuleElement& other) const { return !(*this == other); }

 private:
  ModulePtr module_;
  std::vector<RingElement> coords_;
};

ModuleElement operator+(ModuleElement a, const ModuleElement& b);
ModuleElement operator-(ModuleElement a, const ModuleElement& b);
ModuleElement operator*(const RingElement& f, ModuleElement e);

class Covector {
 public:
  explicit Covector(ModulePtr module);  // zero covector
  Covector(ModulePtr module, std::vector<RingElement> coords);

  const ModulePtr& module() const { return module_; }
  // coords()[i] is the value of the covector on the i-th basis element.
  const std::vector<RingElement>& coords() const { return coords_; }
  const RingElement& coord(std::size_t i) const { return coords_.at(i); }
  void set_coord(std::size_t i, RingElement value);

  RingElement apply(const ModuleElement& e) const;

  bool is_zero() const;
  Covector operator-() const;
  Covector& operator+=(const Covector& other);
  Covector& operator-=(const Covector& other);
  Covector& scale(const RingElement& f);
  Covector& add_scaled(const Covector& other, const RingElement& f);

  bool operator==(const Covector& other) const;
  bool operator!=(const Covector& other) const { return !(*this == other); }

 private:
  ModulePtr module_;
  std::vector<RingElement> coords_;
};

Covector operator+(Covector a, const Covector& b);
Covector operator-(Covector a, const Covector& b);
Covector operator*(const RingElement& f, Covector c);

// Pairs (a_i, b_i) whose pairings sum to one; certifies that the image
// of the bilinear form generates the whole ring.
struct FullnessWitness {
  std::vector<std::pair<ModuleElement, ModuleElement>> pairs;
};

class FreeMetricModule : public std::enable_shared_from_this<FreeMetricModule> {
 public:
  // Validates symmetry and dimensions; precomputes the Gram determinant
  // and, when that determinant is a unit, the inverse Gram matrix.
  static ModulePtr create(RingSpecPtr ring, std::vector<std::string> basis_names, RingMatrix gram);

  const RingSpecPtr& ring() const { return ring_; }
  std::size_t rank() const { return basis_names_.size(); }
  const std::vector<std::string>& basis_names() const { return basis_names_; }
  const std::string& basis_name(std::size_t i) const { return basis_names_.at(i); }
  const RingMatrix& gram() const { return gram_; }
  const RingElement& gram_entry(std::size_t i, std::size_t j) const { return gram_.at(i).at(j); }
  const RingElement& gram_determinant() const { return det_; }

  ModuleElement zero_element() const;
  ModuleElement basis_element(std::size_t i) const;
  ModuleElement element(std::vector<RingElement> coords) const;
  Covector zero_covector() const;
  Covector basis_covector(std::size_t i) const;
  Covector covector(std::vector<RingElement> coords) const;

  RingElement pairing(const ModuleElement& e1, const ModuleElement& e2) const;
  Covector flat(const ModuleElement& e) const;
  ModuleElement sharp(const Covector& lambda) const;  // requires non-degeneracy
  RingElement inverse_pairing(const Covector& lambda, const Covector& mu) const;

  bool is_nondegenerate() const { return det_.is_unit(); }
  const RingMatrix& inverse_gram() const;  // throws when degenerate

  // With a user witness: validates the sum-to-one condition (throwing on
  // failure).  Without one: searches for a unit Gram entry and builds a
  // single-pair witness from it, or reports none.
  std::optional<FullnessWitness> fullness_witness(
      const std::optional<FullnessWitness>& user = std::nullopt) const;

  bool operator==(const FreeMetricModule& other) const;
  bool operator!=(const FreeMetricModule& other) const { return !(*this == other); }

 private:
  FreeMetricModule(RingSpecPtr ring, std::vector<std::string> basis_names, RingMatrix gram);

  RingSpecPtr ring_;
  std::vector<std::string> basis_names_;
  RingMatrix gram_;
  RingElement det_;
  std::optional<RingMatrix> inverse_gram_;
};

// Throws std::invalid_argument when the two values live over different modules.
void require_same_module(const ModuleElement& a, const ModuleElement& b);
void require_same_module(const Covector& a, const Covector& b);
void require_module(const ModulePtr& m, const ModuleElement& e);
void require_module(const ModulePtr& m, const Covector& c);

ModuleElement random_module_element(Rng& rng, const ModulePtr& module, int max_degree,
                                    int max_terms, bool allow_zero = false);

// Renders an element as a sum of named basis terms, e.g. "x*e1 + (y + 1)*e2".
std::string element_to_string(const ModuleElement& e);

}  // namespace cordal
