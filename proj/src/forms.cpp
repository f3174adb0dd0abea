#include "cordal/forms.hpp"

#include <algorithm>
#include <stdexcept>

namespace cordal {

VectorField::VectorField(RingSpecPtr spec) : spec_(std::move(spec)) {
  if (!spec_) throw std::invalid_argument("null ring specification");
  comps_.assign(spec_->var_count(), RingElement(spec_));
}

VectorField VectorField::coordinate(RingSpecPtr spec, std::size_t var) {
  VectorField v(std::move(spec));
  v.set_component(var, RingElement::one(v.spec_));
  return v;
}

void VectorField::set_component(std::size_t var, RingElement value) {
  if (var >= comps_.size()) throw std::invalid_argument("variable index out of range");
  require_spec(spec_, value);
  comps_[var] = std::move(value);
}

bool VectorField::is_zero() const {
  for (const auto& c : comps_)
    if (!c.is_zero()) return false;
  return true;
}

RingElement VectorField::apply(const RingElement& f) const {
  require_spec(spec_, f);
  RingElement out(spec_);
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    if (comps_[j].is_zero()) continue;
    out += comps_[j] * f.derivative(j);
  }
  return out;
}

VectorField VectorField::commutator(const VectorField& other) const {
  if (*spec_ != *other.spec_) throw std::invalid_argument("vector fields over different rings");
  VectorField out(spec_);
  for (std::size_t j = 0; j < comps_.size(); ++j)
    out.comps_[j] = apply(other.comps_[j]) - other.apply(comps_[j]);
  return out;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  if (*spec_ != *other.spec_) throw std::invalid_argument("vector fields over different rings");
  for (std::size_t j = 0; j < comps_.size(); ++j) comps_[j] += other.comps_[j];
  return *this;
}

VectorField& VectorField::add_scaled(const VectorField& other, const RingElement& c) {
  if (*spec_ != *other.spec_) throw std::invalid_argument("vector fields over different rings");
  for (std::size_t j = 0; j < comps_.size(); ++j) comps_[j] += c * other.comps_[j];
  return *this;
}

namespace {

// Sorts the key in place and returns the sign of the sorting
// permutation, or 0 when an index repeats.
int normalize_key(std::vector<int>& key) {
  int sign = 1;
  for (std::size_t i = 1; i < key.size(); ++i) {
    for (std::size_t j = i; j > 0 && key[j - 1] >= key[j]; --j) {
      if (key[j - 1] == key[j]) return 0;
      std::swap(key[j - 1], key[j]);
      sign = -sign;
    }
  }
  return sign;
}

}  // namespace

KahlerForm::KahlerForm(RingSpecPtr spec, int degree) : spec_(std::move(spec)), degree_(degree) {
  if (!spec_) throw std::invalid_argument("null ring specification");
  if (degree < 0) throw std::invalid_argument("negative form degree");
}

KahlerForm KahlerForm::d0(const RingElement& f) {
  KahlerForm out(f.spec(), 1);
  for (std::size_t j = 0; j < f.spec()->var_count(); ++j) {
    RingElement d = f.derivative(j);
    if (!d.is_zero()) out.add_term({static_cast<int>(j)}, std::move(d));
  }
  return out;
}

RingElement KahlerForm::component(const std::vector<int>& key) const {
  auto it = comps_.find(key);
  return it == comps_.end() ? RingElement(spec_) : it->second;
}

void KahlerForm::add_term(std::vector<int> key, RingElement value) {
  if (static_cast<int>(key.size()) != degree_)
    throw std::invalid_argument("form key length does not match the degree");
  require_spec(spec_, value);
  for (int k : key)
    if (k < 0 || k >= static_cast<int>(spec_->var_count()))
      throw std::invalid_argument("form key index out of range");
  if (value.is_zero()) return;
  int sign = normalize_key(key);
  if (sign == 0) return;
  if (sign < 0) value.scale(-1);
  auto it = comps_.find(key);
  if (it == comps_.end()) {
    comps_.emplace(std::move(key), std::move(value));
  } else {
    it->second += value;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

KahlerForm KahlerForm::operator-() const {
  KahlerForm out(spec_, degree_);
  for (const auto& [k, v] : comps_) out.comps_.emplace(k, -v);
  return out;
}

KahlerForm& KahlerForm::operator+=(const KahlerForm& other) {
  return add_scaled(other, RingElement::one(spec_));
}

KahlerForm& KahlerForm::operator-=(const KahlerForm& other) {
  return add_scaled(other, RingElement::constant(spec_, -1));
}

KahlerForm& KahlerForm::add_scaled(const KahlerForm& other, const RingElement& c) {
  if (*spec_ != *other.spec_ || degree_ != other.degree_)
    throw std::invalid_argument("incompatible forms");
  for (const auto& [k, v] : other.comps_) {
    auto it = comps_.find(k);
    if (it == comps_.end()) {
      RingElement val = c * v;
      if (!val.is_zero()) comps_.emplace(k, std::move(val));
    } else {
      it->second += c * v;
      if (it->second.is_zero()) comps_.erase(it);
    }
  }
  return *this;
}

KahlerForm KahlerForm::scaled(const RingElement& c) const {
  KahlerForm out(spec_, degree_);
  out.add_scaled(*this, c);
  return out;
}

KahlerForm operator+(KahlerForm a, const KahlerForm& b) {
  a += b;
  return a;
}

KahlerForm operator-(KahlerForm a, const KahlerForm& b) {
  a -= b;
  return a;
}

KahlerForm KahlerForm::wedge(const KahlerForm& other) const {
  if (*spec_ != *other.spec_) throw std::invalid_argument("forms over different rings");
  KahlerForm out(spec_, degree_ + other.degree_);
  std::vector<int> key;
  for (const auto& [ka, va] : comps_) {
    for (const auto& [kb, vb] : other.comps_) {
      key = ka;
      key.insert(key.end(), kb.begin(), kb.end());
      out.add_term(key, va * vb);
    }
  }
  return out;
}

KahlerForm KahlerForm::de_rham() const {
  KahlerForm out(spec_, degree_ + 1);
  std::vector<int> key;
  for (const auto& [k, v] : comps_) {
    for (std::size_t j = 0; j < spec_->var_count(); ++j) {
      RingElement d = v.derivative(j);
      if (d.is_zero()) continue;
      key.clear();
      key.push_back(static_cast<int>(j));
      key.insert(key.end(), k.begin(), k.end());
      out.add_term(key, std::move(d));
    }
  }
  return out;
}

KahlerForm KahlerForm::iota(const VectorField& v) const {
  if (*spec_ != *v.spec()) throw std::invalid_argument("mismatched ring specifications");
  if (degree_ == 0) return KahlerForm(spec_, 0);
  KahlerForm out(spec_, degree_ - 1);
  for (const auto& [k, val] : comps_) {
    for (std::size_t s = 0; s < k.size(); ++s) {
      const RingElement& vc = v.component(k[s]);
      if (vc.is_zero()) continue;
      std::vector<int> rest;
      rest.reserve(k.size() - 1);
      for (std::size_t t = 0; t < k.size(); ++t)
        if (t != s) rest.push_back(k[t]);
      RingElement term = vc * val;
      if (s % 2 == 1) term.scale(-1);
      out.add_term(std::move(rest), std::move(term));
    }
  }
  return out;
}

KahlerForm KahlerForm::lie(const VectorField& v) const {
  return de_rham().iota(v) + iota(v).de_rham();
}

RingElement KahlerForm::residue() const {
  if (spec_->family != RingFamily::laurent)
    throw std::invalid_argument("residue requires the Laurent family");
  if (degree_ != 1) throw std::invalid_argument("residue requires a degree-one form");
  RingElement g = component({0});
  return RingElement::constant(spec_, g.coefficient({-1}));
}

}  // namespace cordal
