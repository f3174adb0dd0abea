#include "cordal/metric_module.hpp"

#include <set>
#include <stdexcept>

namespace cordal {

namespace {

bool same_module(const ModulePtr& a, const ModulePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace

void require_same_module(const ModuleElement& a, const ModuleElement& b) {
  if (!same_module(a.module(), b.module()))
    throw std::invalid_argument("module elements belong to different modules");
}

void require_same_module(const Covector& a, const Covector& b) {
  if (!same_module(a.module(), b.module()))
    throw std::invalid_argument("covectors belong to different modules");
}

void require_module(const ModulePtr& m, const ModuleElement& e) {
  if (!same_module(m, e.module()))
    throw std::invalid_argument("module element belongs to a different module");
}

void require_module(const ModulePtr& m, const Covector& c) {
  if (!same_module(m, c.module()))
    throw std::invalid_argument("covector belongs to a different module");
}

ModuleElement::ModuleElement(ModulePtr module)
    : module_(std::move(module)),
      coords_(module_->rank(), RingElement::zero(module_->ring())) {}

ModuleElement::ModuleElement(ModulePtr module, std::vector<RingElement> coords)
    : module_(std::move(module)), coords_(std::move(coords)) {
  if (coords_.size() != module_->rank())
    throw std::invalid_argument("coordinate vector length differs from module rank");
  for (const auto& c : coords_) require_spec(module_->ring(), c);
}

void ModuleElement::set_coord(std::size_t i, RingElement value) {
  require_spec(module_->ring(), value);
  coords_.at(i) = std::move(value);
}

bool ModuleElement::is_zero() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

ModuleElement ModuleElement::operator-() const {
  ModuleElement out = *this;
  for (auto& c : out.coords_) c = -c;
  return out;
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& other) {
  require_same_module(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& other) {
  require_same_module(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

ModuleElement& ModuleElement::scale(const RingElement& f) {
  for (auto& c : coords_) c *= f;
  return *this;
}

ModuleElement& ModuleElement::add_scaled(const ModuleElement& other, const RingElement& f) {
  require_same_module(*this, other);
  if (f.is_zero()) return *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!other.coords_[i].is_zero()) coords_[i] += other.coords_[i] * f;
  }
  return *this;
}

bool ModuleElement::operator==(const ModuleElement& other) const {
  require_same_module(*this, other);
  return coords_ == other.coords_;
}

ModuleElement operator+(ModuleElement a, const ModuleElement& b) { return a += b; }
ModuleElement operator-(ModuleElement a, const ModuleElement& b) { return a -= b; }
ModuleElement operator*(const RingElement& f, ModuleElement e) { return e.scale(f); }

Covector::Covector(ModulePtr module)
    : module_(std::move(module)),
      coords_(module_->rank(), RingElement::zero(module_->ring())) {}

Covector::Covector(ModulePtr module, std::vector<RingElement> coords)
    : module_(std::move(module)), coords_(std::move(coords)) {
  if (coords_.size() != module_->rank())
    throw std::invalid_argument("coordinate vector length differs from module rank");
  for (const auto& c : coords_) require_spec(module_->ring(), c);
}

void Covector::set_coord(std::size_t i, RingElement value) {
  require_spec(module_->ring(), value);
  coords_.at(i) = std::move(value);
}

RingElement Covector::apply(const ModuleElement& e) const {
  require_module(module_, e);
  RingElement out = RingElement::zero(module_->ring());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i].is_zero() || e.coord(i).is_zero()) continue;
    out += coords_[i] * e.coord(i);
  }
  return out;
}

bool Covector::is_zero() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

Covector Covector::operator-() const {
  Covector out = *this;
  for (auto& c : out.coords_) c = -c;
  return out;
}

Covector& Covector::operator+=(const Covector& other) {
  require_same_module(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Covector& Covector::operator-=(const Covector& other) {
  require_same_module(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Covector& Covector::scale(const RingElement& f) {
  for (auto& c : coords_) c *= f;
  return *this;
}

Covector& Covector::add_scaled(const Covector& other, const RingElement& f) {
  require_same_module(*this, other);
  if (f.is_zero()) return *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!other.coords_[i].is_zero()) coords_[i] += other.coords_[i] * f;
  }
  return *this;
}

bool Covector::operator==(const Covector& other) const {
  require_same_module(*this, other);
  return coords_ == other.coords_;
}

Covector operator+(Covector a, const Covector& b) { return a += b; }
Covector operator-(Covector a, const Covector& b) { return a -= b; }
Covector operator*(const RingElement& f, Covector c) { return c.scale(f); }

FreeMetricModule::FreeMetricModule(RingSpecPtr ring, std::vector<std::string> basis_names,
                                   RingMatrix gram)
    : ring_(std::move(ring)),
      basis_names_(std::move(basis_names)),
      gram_(std::move(gram)),
      det_(RingElement::zero(ring_)) {}

ModulePtr FreeMetricModule::create(RingSpecPtr ring, std::vector<std::string> basis_names,
                                   RingMatrix gram) {
  if (!ring) throw std::invalid_argument("module requires a ring");
  if (basis_names.empty()) throw std::invalid_argument("module rank must be positive");
  std::set<std::string> seen;
  for (const auto& name : basis_names) {
    if (name.empty()) throw std::invalid_argument("basis names must be non-empty");
    if (!seen.insert(name).second)
      throw std::invalid_argument("duplicate basis name: " + name);
  }
  if (gram.size() != basis_names.size())
    throw std::invalid_argument("Gram matrix size differs from module rank");
  require_square_matrix(ring, gram);
  for (std::size_t i = 0; i < gram.size(); ++i)
    for (std::size_t j = i + 1; j < gram.size(); ++j)
      if (gram[i][j] != gram[j][i])
        throw std::invalid_argument("Gram matrix is not symmetric");

  std::shared_ptr<FreeMetricModule> m(
      new FreeMetricModule(std::move(ring), std::move(basis_names), std::move(gram)));
  m->det_ = ring_matrix_determinant(m->ring_, m->gram_);
  if (m->det_.is_unit()) m->inverse_gram_ = ring_matrix_inverse(m->ring_, m->gram_);
  return m;
}

ModuleElement FreeMetricModule::zero_element() const { return ModuleElement(shared_from_this()); }

ModuleElement FreeMetricModule::basis_element(std::size_t i) const {
  if (i >= rank()) throw std::invalid_argument("basis index out of range");
  ModuleElement e(shared_from_this());
  e.set_coord(i, RingElement::one(ring_));
  return e;
}

ModuleElement FreeMetricModule::element(std::vector<RingElement> coords) const {
  return ModuleElement(shared_from_this(), std::move(coords));
}

Covector FreeMetricModule::zero_covector() const { return Covector(shared_from_this()); }

Covector FreeMetricModule::basis_covector(std::size_t i) const {
  if (i >= rank()) throw std::invalid_argument("basis index out of range");
  Covector c(shared_from_this());
  c.set_coord(i, RingElement::one(ring_));
  return c;
}

Covector FreeMetricModule::covector(std::vector<RingElement> coords) const {
  return Covector(shared_from_this(), std::move(coords));
}

RingElement FreeMetricModule::pairing(const ModuleElement& e1, const ModuleElement& e2) const {
  require_module(shared_from_this(), e1);
  require_module(shared_from_this(), e2);
  RingElement out = RingElement::zero(ring_);
  for (std::size_t i = 0; i < rank(); ++i) {
    if (e1.coord(i).is_zero()) continue;
    for (std::size_t j = 0; j < rank(); ++j) {
      if (gram_[i][j].is_zero() || e2.coord(j).is_zero()) continue;
      out += e1.coord(i) * gram_[i][j] * e2.coord(j);
    }
  }
  return out;
}

Covector FreeMetricModule::flat(const ModuleElement& e) const {
  require_module(shared_from_this(), e);
  Covector out(shared_from_this());
  for (std::size_t i = 0; i < rank(); ++i) {
    RingElement entry = RingElement::zero(ring_);
    for (std::size_t j = 0; j < rank(); ++j) {
      if (gram_[i][j].is_zero() || e.coord(j).is_zero()) continue;
      entry += gram_[i][j] * e.coord(j);
    }
    out.set_coord(i, std::move(entry));
  }
  return out;
}

const RingMatrix& FreeMetricModule::inverse_gram() const {
  if (!inverse_gram_)
    throw std::runtime_error("metric is degenerate: the Gram determinant is not a unit");
  return *inverse_gram_;
}

ModuleElement FreeMetricModule::sharp(const Covector& lambda) const {
  require_module(shared_from_this(), lambda);
  const RingMatrix& inv = inverse_gram();
  ModuleElement out(shared_from_this());
  for (std::size_t i = 0; i < rank(); ++i) {
    RingElement entry = RingElement::zero(ring_);
    for (std::size_t j = 0; j < rank(); ++j) {
      if (inv[i][j].is_zero() || lambda.coord(j).is_zero()) continue;
      entry += inv[i][j] * lambda.coord(j);
    }
    out.set_coord(i, std::move(entry));
  }
  return out;
}

RingElement FreeMetricModule::inverse_pairing(const Covector& lambda, const Covector& mu) const {
  require_module(shared_from_this(), lambda);
  require_module(shared_from_this(), mu);
  const RingMatrix& inv = inverse_gram();
  RingElement out = RingElement::zero(ring_);
  for (std::size_t i = 0; i < rank(); ++i) {
    if (lambda.coord(i).is_zero()) continue;
    for (std::size_t j = 0; j < rank(); ++j) {
      if (inv[i][j].is_zero() || mu.coord(j).is_zero()) continue;
      out += lambda.coord(i) * inv[i][j] * mu.coord(j);
    }
  }
  return out;
}

std::optional<FullnessWitness> FreeMetricModule::fullness_witness(
    const std::optional<FullnessWitness>& user) const {
  if (user) {
    RingElement sum = RingElement::zero(ring_);
    for (const auto& [a, b] : user->pairs) {
      require_module(shared_from_this(), a);
      require_module(shared_from_this(), b);
      sum += pairing(a, b);
    }
    if (sum != RingElement::one(ring_))
      throw std::invalid_argument("fullness witness pairings do not sum to one");
    return user;
  }
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j)
      if (gram_[i][j].is_unit()) {
        FullnessWitness w;
        ModuleElement second = basis_element(j);
        second.scale(gram_[i][j].inverse_of_unit());
        w.pairs.emplace_back(basis_element(i), std::move(second));
        return w;
      }
  return std::nullopt;
}

bool FreeMetricModule::operator==(const FreeMetricModule& other) const {
  if (this == &other) return true;
  if (*ring_ != *other.ring_) return false;
  if (basis_names_ != other.basis_names_) return false;
  return gram_ == other.gram_;
}

std::string element_to_string(const ModuleElement& e) {
  const auto& module = *e.module();
  std::string out;
  for (std::size_t i = 0; i < module.rank(); ++i) {
    const RingElement& c = e.coord(i);
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    if (c == RingElement::one(module.ring())) {
      out += module.basis_name(i);
    } else {
      std::string cs = c.to_string();
      bool needs_parens = c.terms().size() > 1;
      out += needs_parens ? "(" + cs + ")" : cs;
      out += "*" + module.basis_name(i);
    }
  }
  return out.empty() ? "0" : out;
}

ModuleElement random_module_element(Rng& rng, const ModulePtr& module, int max_degree,
                                    int max_terms, bool allow_zero) {
  ModuleElement out(module);
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (std::size_t i = 0; i < module->rank(); ++i)
      out.set_coord(i, rng.ring_element(module->ring(), max_degree, max_terms, true));
    if (allow_zero || !out.is_zero()) return out;
  }
  out.set_coord(0, RingElement::one(module->ring()));
  return out;
}

}  // namespace cordal
