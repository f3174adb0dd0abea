#include "cordal/cochain.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "cordal/multiset_util.hpp"

namespace cordal {

namespace {

std::atomic<int> g_degree_cap{8};

std::vector<int> tuple_insert(const std::vector<int>& t, std::size_t pos, int value) {
  std::vector<int> out;
  out.reserve(t.size() + 1);
  out.insert(out.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(pos));
  out.push_back(value);
  out.insert(out.end(), t.begin() + static_cast<std::ptrdiff_t>(pos), t.end());
  return out;
}

std::vector<int> tuple_erase(const std::vector<int>& t, std::size_t pos) {
  std::vector<int> out;
  out.reserve(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (i != pos) out.push_back(t[i]);
  return out;
}

std::string tuple_to_string(const AlgebraPtr& a, const CochainKey& key) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < key.elements.size(); ++i) {
    if (i) os << ", ";
    os << a->module()->basis_name(static_cast<std::size_t>(key.elements[i]));
  }
  os << "; {";
  for (std::size_t i = 0; i < key.weights.size(); ++i) {
    if (i) os << ", ";
    os << a->ring()->variables[static_cast<std::size_t>(key.weights[i])];
  }
  os << "})";
  return os.str();
}

// Derivative of the gram entry (i, j) with respect to variable s.
RingElement gram_derivative(const AlgebraPtr& a, int i, int j, std::size_t s) {
  return a->module()->gram_entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j))
      .derivative(s);
}

}  // namespace

Cochain::Cochain(AlgebraPtr algebra, int degree)
    : algebra_(std::move(algebra)), degree_(degree) {
  if (!algebra_) throw std::invalid_argument("cochain requires an algebra");
  if (degree < 0) throw std::invalid_argument("cochain degree must be non-negative");
  if (degree > degree_cap())
    throw std::invalid_argument("cochain degree exceeds the configured cap");
  levels_.resize(static_cast<std::size_t>(degree / 2) + 1);
}

Cochain Cochain::from_scalar(AlgebraPtr algebra, RingElement value) {
  Cochain out(std::move(algebra), 0);
  require_spec(out.algebra_->ring(), value);
  out.set_entry(0, CochainKey{}, std::move(value));
  return out;
}

Cochain Cochain::from_covector(AlgebraPtr algebra, const Covector& lambda) {
  Cochain out(std::move(algebra), 1);
  require_module(out.algebra_->module(), lambda);
  for (std::size_t i = 0; i < out.algebra_->rank(); ++i)
    out.set_entry(0, CochainKey{{static_cast<int>(i)}, {}}, lambda.coord(i));
  return out;
}

int Cochain::degree_cap() { return g_degree_cap.load(); }

void Cochain::set_degree_cap(int cap) {
  if (cap < 0) throw std::invalid_argument("degree cap must be non-negative");
  g_degree_cap.store(cap);
}

const CochainTable& Cochain::level(std::size_t k) const {
  if (k >= levels_.size()) throw std::invalid_argument("cochain level out of range");
  return levels_[k];
}

RingElement Cochain::entry(std::size_t k, const CochainKey& key) const {
  if (k >= levels_.size()) return RingElement::zero(algebra_->ring());
  auto it = levels_[k].find(key);
  if (it == levels_[k].end()) return RingElement::zero(algebra_->ring());
  return it->second;
}

void Cochain::check_key(std::size_t k, const CochainKey& key) const {
  if (k >= levels_.size()) throw std::invalid_argument("cochain level out of range");
  if (key.elements.size() != static_cast<std::size_t>(degree_) - 2 * k)
    throw std::invalid_argument("cochain key has the wrong number of module slots");
  if (key.weights.size() != k)
    throw std::invalid_argument("cochain key has the wrong number of derivation slots");
  const int n = static_cast<int>(algebra_->rank());
  for (int e : key.elements)
    if (e < 0 || e >= n) throw std::invalid_argument("cochain key: basis index out of range");
  const int v = static_cast<int>(algebra_->var_count());
  for (int w : key.weights)
    if (w < 0 || w >= v) throw std::invalid_argument("cochain key: variable index out of range");
  if (!std::is_sorted(key.weights.begin(), key.weights.end()))
    throw std::invalid_argument("cochain key: derivation multiset must be sorted");
}

void Cochain::set_entry(std::size_t k, CochainKey key, RingElement value) {
  check_key(k, key);
  require_spec(algebra_->ring(), value);
  if (value.is_zero()) {
    levels_[k].erase(key);
  } else {
    levels_[k].insert_or_assign(std::move(key), std::move(value));
  }
}

void Cochain::add_entry(std::size_t k, const CochainKey& key, const RingElement& value) {
  if (value.is_zero()) return;
  check_key(k, key);
  require_spec(algebra_->ring(), value);
  auto [it, inserted] = levels_[k].try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) levels_[k].erase(it);
  }
}

bool Cochain::is_zero() const {
  for (const auto& table : levels_)
    if (!table.empty()) return false;
  return true;
}

RingElement Cochain::scalar_value() const {
  if (degree_ != 0) throw std::invalid_argument("scalar_value requires a degree-0 cochain");
  return entry(0, CochainKey{});
}

Cochain Cochain::operator-() const {
  Cochain out(algebra_, degree_);
  for (std::size_t k = 0; k < levels_.size(); ++k)
    for (const auto& [key, value] : levels_[k]) out.levels_[k].emplace(key, -value);
  return out;
}

Cochain& Cochain::operator+=(const Cochain& other) {
  return add_scaled(other, RingElement::one(algebra_->ring()));
}

Cochain& Cochain::operator-=(const Cochain& other) {
  return add_scaled(other, RingElement::constant(algebra_->ring(), -1));
}

void Cochain::scale(const RingElement& c) {
  require_spec(algebra_->ring(), c);
  if (c.is_zero()) {
    for (auto& table : levels_) table.clear();
    return;
  }
  for (auto& table : levels_)
    for (auto it = table.begin(); it != table.end();) {
      it->second = it->second * c;
      if (it->second.is_zero()) {
        it = table.erase(it);
      } else {
        ++it;
      }
    }
}

Cochain& Cochain::add_scaled(const Cochain& other, const RingElement& c) {
  if (degree_ != other.degree_)
    throw std::invalid_argument("cochain degrees differ");
  if (*algebra_->ring() != *other.algebra_->ring() ||
      *algebra_->module() != *other.algebra_->module())
    throw std::invalid_argument("cochains live over different algebras");
  require_spec(algebra_->ring(), c);
  if (c.is_zero()) return *this;
  for (std::size_t k = 0; k < levels_.size(); ++k)
    for (const auto& [key, value] : other.levels_[k]) add_entry(k, key, value * c);
  return *this;
}

bool Cochain::operator==(const Cochain& other) const {
  if (degree_ != other.degree_) return false;
  if (*algebra_->ring() != *other.algebra_->ring() ||
      *algebra_->module() != *other.algebra_->module())
    return false;
  return levels_ == other.levels_;
}

Cochain operator+(Cochain a, const Cochain& b) {
  a += b;
  return a;
}

Cochain operator-(Cochain a, const Cochain& b) {
  a -= b;
  return a;
}

RingElement Cochain::eval_rec(std::size_t k, const RingElement& coeff,
                              const std::vector<ModuleElement>& pending,
                              const std::vector<int>& suffix,
                              const std::vector<int>& weights) const {
  const auto& R = algebra_->ring();
  if (coeff.is_zero() || k >= levels_.size()) return RingElement::zero(R);
  if (pending.empty()) return coeff * entry(k, CochainKey{suffix, weights});

  std::vector<ModuleElement> rest(pending.begin(), pending.end() - 1);
  const ModuleElement& last = pending.back();
  RingElement acc = RingElement::zero(R);
  const std::size_t var_count = algebra_->var_count();
  for (std::size_t t = 0; t < algebra_->rank(); ++t) {
    const RingElement& f = last.coord(t);
    if (f.is_zero()) continue;
    acc += eval_rec(k, coeff * f, rest, tuple_insert(suffix, 0, static_cast<int>(t)), weights);
    if (suffix.empty()) continue;  // rightmost slot: linear over the ring
    for (std::size_t q = 0; q < suffix.size(); ++q) {
      RingElement g = algebra_->module()->gram_entry(t, static_cast<std::size_t>(suffix[q]));
      if (g.is_zero()) continue;
      if (q % 2 == 0) g = -g;  // transposition parity of the paired slot
      for (std::size_t s = 0; s < var_count; ++s) {
        RingElement df = f.derivative(s);
        if (df.is_zero()) continue;
        acc += eval_rec(k + 1, coeff * g * df, rest, tuple_erase(suffix, q),
                        multiset_insert(weights, static_cast<int>(s)));
      }
    }
  }
  return acc;
}

RingElement Cochain::evaluate(const std::vector<ModuleElement>& e_args,
                              const std::vector<KahlerForm>& alpha_args) const {
  const auto& R = algebra_->ring();
  const std::size_t k = alpha_args.size();
  if (2 * k > static_cast<std::size_t>(degree_) ||
      e_args.size() != static_cast<std::size_t>(degree_) - 2 * k)
    throw std::invalid_argument("cochain evaluation: argument arity mismatch");
  for (const auto& e : e_args) require_module(algebra_->module(), e);
  for (const auto& alpha : alpha_args) {
    if (*alpha.spec() != *R)
      throw std::invalid_argument("cochain evaluation: form over a different ring");
    if (alpha.degree() != 1)
      throw std::invalid_argument("cochain evaluation: derivation slots take one-forms");
  }

  // Expand the forms over the coordinate generators; the derivation
  // slots are linear over the ring, so this is exact.
  std::map<std::vector<int>, RingElement> weight_tasks;
  weight_tasks.emplace(std::vector<int>{}, RingElement::one(R));
  for (const auto& alpha : alpha_args) {
    std::map<std::vector<int>, RingElement> next;
    for (const auto& [w, c] : weight_tasks) {
      for (std::size_t s = 0; s < algebra_->var_count(); ++s) {
        RingElement comp = alpha.component({static_cast<int>(s)});
        if (comp.is_zero()) continue;
        auto key = multiset_insert(w, static_cast<int>(s));
        auto [it, inserted] = next.try_emplace(key, c * comp);
        if (!inserted) it->second += c * comp;
      }
    }
    weight_tasks = std::move(next);
  }

  RingElement out = RingElement::zero(R);
  for (const auto& [w, c] : weight_tasks) {
    if (c.is_zero()) continue;
    out += eval_rec(k, c, e_args, {}, w);
  }
  return out;
}

CochainCheck validate(const Cochain& omega) {
  const auto& a = omega.algebra();

  // One relation instance per (level, tuple, adjacent position,
  // multiset); canonical representative has the smaller orientation.
  auto relation_holds = [&](std::size_t k, const std::vector<int>& u, std::size_t pos,
                            const std::vector<int>& w) -> bool {
    std::vector<int> swapped = u;
    std::swap(swapped[pos], swapped[pos + 1]);
    RingElement lhs = omega.entry(k, CochainKey{u, w});
    lhs += omega.entry(k, CochainKey{swapped, w});
    for (std::size_t s = 0; s < a->var_count(); ++s) {
      RingElement dg = gram_derivative(a, u[pos], u[pos + 1], s);
      if (dg.is_zero()) continue;
      std::vector<int> reduced = tuple_erase(tuple_erase(u, pos + 1), pos);
      lhs += dg * omega.entry(k + 1, CochainKey{reduced, multiset_insert(w, static_cast<int>(s))});
    }
    return lhs.is_zero();
  };

  std::set<std::tuple<std::size_t, std::vector<int>, std::size_t, std::vector<int>>> seen;
  auto canonical = [](std::vector<int> u, std::size_t pos) {
    std::vector<int> swapped = u;
    std::swap(swapped[pos], swapped[pos + 1]);
    return std::min(u, swapped);
  };
  auto check_instance = [&](std::size_t k, const std::vector<int>& u, std::size_t pos,
                            const std::vector<int>& w) -> std::optional<std::string> {
    auto key = std::make_tuple(k, canonical(u, pos), pos, w);
    if (!seen.insert(key).second) return std::nullopt;
    if (relation_holds(k, u, pos, w)) return std::nullopt;
    std::ostringstream os;
    os << "transposition relation fails at level " << k << ", key "
       << tuple_to_string(a, CochainKey{u, w}) << ", positions " << (pos + 1) << "-"
       << (pos + 2);
    return os.str();
  };

  // Instances visible from stored keys.
  for (std::size_t k = 0; k < omega.level_count(); ++k) {
    for (const auto& [key, value] : omega.level(k)) {
      if (key.elements.size() < 2) continue;
      for (std::size_t pos = 0; pos + 1 < key.elements.size(); ++pos) {
        if (auto err = check_instance(k, key.elements, pos, key.weights))
          return CochainCheck{false, *err};
      }
    }
  }

  // Instances whose two table terms vanish but whose correction is
  // stored one level up: reconstruct the lower key around each stored
  // upper key whenever some gram derivative can produce it.
  std::vector<std::vector<std::pair<int, int>>> gram_pairs(a->var_count());
  const int n = static_cast<int>(a->rank());
  for (std::size_t s = 0; s < a->var_count(); ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!gram_derivative(a, i, j, s).is_zero()) gram_pairs[s].emplace_back(i, j);

  for (std::size_t k = 1; k < omega.level_count(); ++k) {
    for (const auto& [key, value] : omega.level(k)) {
      for (std::size_t wi = 0; wi < key.weights.size(); ++wi) {
        if (wi > 0 && key.weights[wi] == key.weights[wi - 1]) continue;
        const int s = key.weights[wi];
        auto w_low = multiset_remove(key.weights, s);
        for (const auto& [i, j] : gram_pairs[static_cast<std::size_t>(s)]) {
          for (std::size_t pos = 0; pos <= key.elements.size(); ++pos) {
            auto u = tuple_insert(tuple_insert(key.elements, pos, j), pos, i);
            if (auto err = check_instance(k - 1, u, pos, w_low))
              return CochainCheck{false, *err};
          }
        }
      }
    }
  }
  return CochainCheck{};
}

Cochain product(const Cochain& omega, const Cochain& eta) {
  const auto& a = omega.algebra();
  if (*a->ring() != *eta.algebra()->ring() || *a->module() != *eta.algebra()->module())
    throw std::invalid_argument("cochain product: different algebras");
  const int p = omega.degree(), q = eta.degree();
  Cochain out(a, p + q);

  for (std::size_t i = 0; i < omega.level_count(); ++i) {
    for (const auto& [k1, g1] : omega.level(i)) {
      for (std::size_t j = 0; j < eta.level_count(); ++j) {
        for (const auto& [k2, g2] : eta.level(j)) {
          auto w_union = multiset_union(k1.weights, k2.weights);
          Rational mult = multiset_split_count(w_union, k1.weights);
          RingElement base = g1 * g2;
          base = base * RingElement::constant(a->ring(), mult);
          if (base.is_zero()) continue;
          for (const auto& sh : signed_interleavings(k1.elements, k2.elements)) {
            RingElement term = sh.sign > 0 ? base : -base;
            out.add_entry(i + j, CochainKey{sh.merged, w_union}, term);
          }
        }
      }
    }
  }
  return out;
}

Cochain differential(const Cochain& omega, bool validate_output) {
  const auto& a = omega.algebra();
  const auto& R = a->ring();
  const int q = omega.degree();
  Cochain out(a, q + 1);
  const int n = static_cast<int>(a->rank());
  const std::size_t vars = a->var_count();
  const auto& anchor = a->anchor_matrix();

  // Coordinates of the derivation generators and their pairings after
  // differentiation, used by the variable-coefficient routes.
  const bool partial_const = a->partial_is_constant();
  const bool bracket_const = a->bracket_is_constant();

  // pairing of d/dx_s applied to generator mu with each basis vector
  std::vector<std::vector<std::vector<RingElement>>> dpg;  // [mu][s][w]
  if (!partial_const) {
    dpg.assign(vars, std::vector<std::vector<RingElement>>(
                         vars, std::vector<RingElement>(n, RingElement::zero(R))));
    for (std::size_t mu = 0; mu < vars; ++mu) {
      const ModuleElement& gen = a->partial_generator(mu);
      for (std::size_t s = 0; s < vars; ++s) {
        ModuleElement dgen = a->module()->zero_element();
        bool any = false;
        for (int r = 0; r < n; ++r) {
          RingElement d = gen.coord(static_cast<std::size_t>(r)).derivative(s);
          if (!d.is_zero()) any = true;
          dgen.set_coord(static_cast<std::size_t>(r), d);
        }
        if (!any) continue;
        for (int w = 0; w < n; ++w)
          dpg[mu][s][static_cast<std::size_t>(w)] =
              a->module()->pairing(dgen, a->module()->basis_element(static_cast<std::size_t>(w)));
      }
    }
  }

  // bracket coefficient lists per target basis index, and pairings of
  // differentiated bracket values with each basis vector
  std::vector<std::vector<std::tuple<int, int, RingElement>>> bracket_coeff(
      static_cast<std::size_t>(n));
  std::vector<std::vector<std::vector<std::vector<RingElement>>>> dbg;  // [i][j][s][w]
  if (!bracket_const)
    dbg.assign(static_cast<std::size_t>(n),
               std::vector<std::vector<std::vector<RingElement>>>(
                   static_cast<std::size_t>(n),
                   std::vector<std::vector<RingElement>>(
                       vars, std::vector<RingElement>(static_cast<std::size_t>(n),
                                                      RingElement::zero(R)))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ModuleElement& b = a->bracket_entry(static_cast<std::size_t>(i),
                                                static_cast<std::size_t>(j));
      if (b.is_zero()) continue;
      for (int r = 0; r < n; ++r) {
        const RingElement& c = b.coord(static_cast<std::size_t>(r));
        if (!c.is_zero()) bracket_coeff[static_cast<std::size_t>(r)].emplace_back(i, j, c);
      }
      if (!bracket_const) {
        for (std::size_t s = 0; s < vars; ++s) {
          ModuleElement db = a->module()->zero_element();
          bool any = false;
          for (int r = 0; r < n; ++r) {
            RingElement d = b.coord(static_cast<std::size_t>(r)).derivative(s);
            if (!d.is_zero()) any = true;
            db.set_coord(static_cast<std::size_t>(r), d);
          }
          if (!any) continue;
          for (int w = 0; w < n; ++w)
            dbg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][s]
               [static_cast<std::size_t>(w)] = a->module()->pairing(
                   db, a->module()->basis_element(static_cast<std::size_t>(w)));
        }
      }
    }

  for (std::size_t k = 0; k < omega.level_count(); ++k) {
    for (const auto& [key, g] : omega.level(k)) {
      const auto& u = key.elements;
      const auto& w = key.weights;

      // Route 1: anchor-paired derivative of the value, one new slot.
      {
        std::vector<RingElement> dg(vars, RingElement::zero(R));
        bool any = false;
        for (std::size_t s = 0; s < vars; ++s) {
          dg[s] = g.derivative(s);
          if (!dg[s].is_zero()) any = true;
        }
        if (any) {
          for (int jb = 0; jb < n; ++jb) {
            RingElement val = RingElement::zero(R);
            for (std::size_t s = 0; s < vars; ++s) {
              if (dg[s].is_zero() || anchor[static_cast<std::size_t>(jb)][s].is_zero()) continue;
              val += anchor[static_cast<std::size_t>(jb)][s] * dg[s];
            }
            if (val.is_zero()) continue;
            for (std::size_t pos = 0; pos <= u.size(); ++pos) {
              RingElement signed_val = (pos % 2 == 0) ? val : -val;
              out.add_entry(k, CochainKey{tuple_insert(u, pos, jb), w}, signed_val);
            }
          }
        }
      }

      // Route 2: a derivation generator consumed into the leading slot,
      // one level up.
      if (!u.empty()) {
        const int r = u.front();
        std::vector<int> tail(u.begin() + 1, u.end());
        for (std::size_t mu = 0; mu < vars; ++mu) {
          const RingElement& c = a->partial_generator(mu).coord(static_cast<std::size_t>(r));
          if (c.is_zero()) continue;
          auto w_up = multiset_insert(w, static_cast<int>(mu));
          int mult = multiset_count(w, static_cast<int>(mu)) + 1;
          out.add_entry(k + 1, CochainKey{tail, w_up},
                        c * g * RingElement::constant(R, mult));
        }
      }

      // Route 2': variable-coefficient part of the generator expansion.
      if (!partial_const && !w.empty()) {
        for (std::size_t wi = 0; wi < w.size(); ++wi) {
          if (wi > 0 && w[wi] == w[wi - 1]) continue;
          const int s = w[wi];
          auto w_low = multiset_remove(w, s);
          for (std::size_t mu = 0; mu < vars; ++mu) {
            int mult = multiset_count(w_low, static_cast<int>(mu)) + 1;
            auto w_out = multiset_insert(w_low, static_cast<int>(mu));
            for (int wb = 0; wb < n; ++wb) {
              const RingElement& dp = dpg[mu][static_cast<std::size_t>(s)]
                                         [static_cast<std::size_t>(wb)];
              if (dp.is_zero()) continue;
              RingElement val = dp * g * RingElement::constant(R, mult);
              for (std::size_t pos = 0; pos <= u.size(); ++pos) {
                RingElement signed_val = (pos % 2 == 0) ? -val : val;
                out.add_entry(k, CochainKey{tuple_insert(u, pos, wb), w_out}, signed_val);
              }
            }
          }
        }
      }

      // Route 3: a bracket of two inserted arguments lands on a stored
      // slot.
      for (std::size_t d = 0; d < u.size(); ++d) {
        const int r = u[d];
        if (bracket_coeff[static_cast<std::size_t>(r)].empty()) continue;
        auto base = tuple_erase(u, d);
        for (const auto& [bi, bj, c] : bracket_coeff[static_cast<std::size_t>(r)]) {
          RingElement cg = c * g;
          if (cg.is_zero()) continue;
          for (std::size_t ins = 0; ins <= d; ++ins) {
            auto with_a = tuple_insert(base, ins, bi);
            auto full = tuple_insert(with_a, d + 1, bj);
            RingElement term = (ins % 2 == 0) ? -cg : cg;  // sign (-1)^{ins+1}
            out.add_entry(k, CochainKey{full, w}, term);
          }
        }
      }

      // Route 3': variable-coefficient part of the bracket expansion,
      // one level down.
      if (!bracket_const && !w.empty()) {
        for (std::size_t wi = 0; wi < w.size(); ++wi) {
          if (wi > 0 && w[wi] == w[wi - 1]) continue;
          const int s = w[wi];
          auto w_low = multiset_remove(w, s);
          const std::size_t L = u.size() + 3;
          for (int bi = 0; bi < n; ++bi)
            for (int bj = 0; bj < n; ++bj) {
              for (int wb = 0; wb < n; ++wb) {
                const RingElement& db = dbg[static_cast<std::size_t>(bi)]
                                           [static_cast<std::size_t>(bj)]
                                           [static_cast<std::size_t>(s)]
                                           [static_cast<std::size_t>(wb)];
                if (db.is_zero()) continue;
                RingElement val = db * g;
                // insert bi at p1, bj at p2, wb at p3 (1-based, ascending)
                for (std::size_t p1 = 1; p1 + 2 <= L; ++p1)
                  for (std::size_t p2 = p1 + 1; p2 + 1 <= L; ++p2)
                    for (std::size_t p3 = p2 + 1; p3 <= L; ++p3) {
                      auto t1 = tuple_insert(u, p1 - 1, bi);
                      auto t2 = tuple_insert(t1, p2 - 1, bj);
                      auto t3 = tuple_insert(t2, p3 - 1, wb);
                      const std::size_t parity = (p1 + p3 - p2) % 2;
                      out.add_entry(k - 1, CochainKey{t3, w_low},
                                    parity == 0 ? val : -val);
                    }
              }
            }
        }
      }
    }
  }

  if (validate_output) {
    auto check = validate(out);
    if (!check.ok)
      throw std::logic_error("differential output failed admissibility: " + check.violation);
  }
  return out;
}

Cochain iota_e(const ModuleElement& e, const Cochain& omega) {
  const auto& a = omega.algebra();
  require_module(a->module(), e);
  const auto& R = a->ring();
  if (omega.degree() < 1) return Cochain(a, 0);
  Cochain out(a, omega.degree() - 1);
  const int n = static_cast<int>(a->rank());
  const std::size_t vars = a->var_count();

  // Linear part: strip the leading slot.
  for (std::size_t k = 0; k < omega.level_count(); ++k) {
    for (const auto& [key, g] : omega.level(k)) {
      if (key.elements.empty()) continue;
      const RingElement& c = e.coord(static_cast<std::size_t>(key.elements.front()));
      if (c.is_zero()) continue;
      std::vector<int> tail(key.elements.begin() + 1, key.elements.end());
      out.add_entry(k, CochainKey{tail, key.weights}, c * g);
    }
  }

  // Correction: derivative coordinates paired through the metric, one
  // level down.
  std::vector<std::vector<RingElement>> eg(vars,
                                           std::vector<RingElement>(static_cast<std::size_t>(n),
                                                                    RingElement::zero(R)));
  bool any_correction = false;
  for (std::size_t s = 0; s < vars; ++s) {
    ModuleElement de = a->module()->zero_element();
    bool any = false;
    for (int r = 0; r < n; ++r) {
      RingElement d = e.coord(static_cast<std::size_t>(r)).derivative(s);
      if (!d.is_zero()) any = true;
      de.set_coord(static_cast<std::size_t>(r), d);
    }
    if (!any) continue;
    any_correction = true;
    for (int wb = 0; wb < n; ++wb)
      eg[s][static_cast<std::size_t>(wb)] =
          a->module()->pairing(de, a->module()->basis_element(static_cast<std::size_t>(wb)));
  }
  if (any_correction) {
    for (std::size_t k = 1; k < omega.level_count(); ++k) {
      for (const auto& [key, g] : omega.level(k)) {
        for (std::size_t wi = 0; wi < key.weights.size(); ++wi) {
          if (wi > 0 && key.weights[wi] == key.weights[wi - 1]) continue;
          const int s = key.weights[wi];
          auto w_low = multiset_remove(key.weights, s);
          for (int wb = 0; wb < n; ++wb) {
            const RingElement& c = eg[static_cast<std::size_t>(s)][static_cast<std::size_t>(wb)];
            if (c.is_zero()) continue;
            RingElement val = c * g;
            for (std::size_t pos = 0; pos <= key.elements.size(); ++pos) {
              RingElement signed_val = (pos % 2 == 0) ? -val : val;  // (-1)^{pos+1}
              out.add_entry(k - 1, CochainKey{tuple_insert(key.elements, pos, wb), w_low},
                            signed_val);
            }
          }
        }
      }
    }
  }
  return out;
}

Cochain iota_alpha(const KahlerForm& alpha, const Cochain& omega) {
  const auto& a = omega.algebra();
  if (*alpha.spec() != *a->ring())
    throw std::invalid_argument("contraction form is over a different ring");
  if (alpha.degree() != 1)
    throw std::invalid_argument("derivation-slot contraction takes a one-form");
  if (omega.degree() < 2) return Cochain(a, 0);
  Cochain out(a, omega.degree() - 2);
  for (std::size_t k = 1; k < omega.level_count(); ++k) {
    for (const auto& [key, g] : omega.level(k)) {
      for (std::size_t wi = 0; wi < key.weights.size(); ++wi) {
        if (wi > 0 && key.weights[wi] == key.weights[wi - 1]) continue;
        const int s = key.weights[wi];
        RingElement c = alpha.component({s});
        if (c.is_zero()) continue;
        out.add_entry(k - 1, CochainKey{key.elements, multiset_remove(key.weights, s)}, c * g);
      }
    }
  }
  return out;
}

Cochain iota_f(const RingElement& f, const Cochain& omega) {
  require_spec(omega.algebra()->ring(), f);
  if (omega.degree() < 2) return Cochain(omega.algebra(), 0);
  return iota_alpha(KahlerForm::d0(f), omega);
}

Cochain lie_e(const ModuleElement& e, const Cochain& omega) {
  Cochain first = iota_e(e, differential(omega, false));
  if (omega.degree() < 1) return first;
  Cochain second = differential(iota_e(e, omega), false);
  first += second;
  return first;
}

Cochain lie_f(const RingElement& f, const Cochain& omega) {
  Cochain first = iota_f(f, differential(omega, false));
  if (omega.degree() < 2) return first;
  Cochain second = differential(iota_f(f, omega), false);
  first -= second;
  return first;
}

Cochain theta(const AlgebraPtr& a) {
  Cochain out(a, 3);
  const int n = static_cast<int>(a->rank());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ModuleElement& b = a->bracket_entry(static_cast<std::size_t>(i),
                                                static_cast<std::size_t>(j));
      if (b.is_zero()) continue;
      for (int k = 0; k < n; ++k) {
        RingElement v = a->module()->pairing(b, a->module()->basis_element(static_cast<std::size_t>(k)));
        out.add_entry(0, CochainKey{{i, j, k}, {}}, v);
      }
    }
  const auto& anchor = a->anchor_matrix();
  for (int i = 0; i < n; ++i)
    for (std::size_t s = 0; s < a->var_count(); ++s) {
      if (anchor[static_cast<std::size_t>(i)][s].is_zero()) continue;
      out.add_entry(1, CochainKey{{i}, {static_cast<int>(s)}},
                    -anchor[static_cast<std::size_t>(i)][s]);
    }
  auto check = validate(out);
  if (!check.ok)
    throw std::invalid_argument(
        "canonical cochain is not admissible (pairing invariance or symmetric-part "
        "condition fails): " +
        check.violation);
  return out;
}

Cochain rho_star(const AlgebraPtr& a, const KahlerForm& form) {
  if (*form.spec() != *a->ring())
    throw std::invalid_argument("form is over a different ring");
  const int q = form.degree();
  if (q == 0) return Cochain::from_scalar(a, form.component({}));
  Cochain out(a, q);
  const int n = static_cast<int>(a->rank());

  std::vector<VectorField> anchors;
  anchors.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    anchors.push_back(a->anchor(a->module()->basis_element(static_cast<std::size_t>(i))));

  std::vector<int> tuple;
  auto rec = [&](auto&& self, const KahlerForm& current) -> void {
    if (static_cast<int>(tuple.size()) == q) {
      out.add_entry(0, CochainKey{tuple, {}}, current.component({}));
      return;
    }
    if (current.is_zero()) return;
    for (int i = 0; i < n; ++i) {
      tuple.push_back(i);
      self(self, current.iota(anchors[static_cast<std::size_t>(i)]));
      tuple.pop_back();
    }
  };
  rec(rec, form);
  return out;
}

bool in_C(const Cochain& omega, std::size_t i) {
  for (std::size_t k = i + 1; k < omega.level_count(); ++k)
    if (!omega.level(k).empty()) return false;
  return true;
}

namespace {

// Applies the callback to every ordered tuple drawn from [0, n)^len.
void for_each_tuple(int n, std::size_t len, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> t(len, 0);
  if (len == 0) {
    fn(t);
    return;
  }
  while (true) {
    fn(t);
    std::size_t pos = len;
    while (pos > 0) {
      --pos;
      if (++t[pos] < n) break;
      t[pos] = 0;
      if (pos == 0) return;
    }
  }
}

// Applies the callback to every sorted multiset of the given size over
// [0, v).
void for_each_multiset(int v, std::size_t size,
                       const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> m;
  auto rec = [&](auto&& self, int start) -> void {
    if (m.size() == size) {
      fn(m);
      return;
    }
    for (int s = start; s < v; ++s) {
      m.push_back(s);
      self(self, s);
      m.pop_back();
    }
  };
  if (size == 0) {
    fn(m);
    return;
  }
  rec(rec, 0);
}

// Evaluates omega at level i with trailing derivation-image arguments
// and returns false on the first nonzero value.
bool trailing_image_arguments_vanish(const Cochain& omega, std::size_t i,
                                     std::size_t image_count) {
  const auto& a = omega.algebra();
  const std::size_t L = static_cast<std::size_t>(omega.degree()) - 2 * i;
  if (image_count > L) return true;
  const int n = static_cast<int>(a->rank());
  const int v = static_cast<int>(a->var_count());
  if (v == 0) return true;

  std::vector<KahlerForm> generator_forms;
  for (int s = 0; s < v; ++s)
    generator_forms.push_back(KahlerForm::d0(RingElement::variable(a->ring(), static_cast<std::size_t>(s))));

  bool ok = true;
  for_each_multiset(v, i, [&](const std::vector<int>& w) {
    if (!ok) return;
    std::vector<KahlerForm> alpha_args;
    for (int s : w) alpha_args.push_back(generator_forms[static_cast<std::size_t>(s)]);
    for_each_tuple(n, L - image_count, [&](const std::vector<int>& prefix) {
      if (!ok) return;
      for_each_tuple(v, image_count, [&](const std::vector<int>& gens) {
        if (!ok) return;
        std::vector<ModuleElement> e_args;
        e_args.reserve(L);
        for (int b : prefix) e_args.push_back(a->module()->basis_element(static_cast<std::size_t>(b)));
        for (int s : gens) e_args.push_back(a->partial_generator(static_cast<std::size_t>(s)));
        if (!omega.evaluate(e_args, alpha_args).is_zero()) ok = false;
      });
    });
  });
  return ok;
}

}  // namespace

bool in_F(const Cochain& omega, std::size_t i) {
  if (!in_C(omega, i)) return false;
  for (std::size_t level = 0; level < omega.level_count() && level <= i; ++level) {
    const std::size_t count = i - level + 1;
    if (!trailing_image_arguments_vanish(omega, level, count)) return false;
  }
  return true;
}

bool in_I(const Cochain& omega) {
  if (omega.degree() == 0) return omega.is_zero();  // ideal lives in positive degrees
  for (std::size_t k = 0; k < omega.level_count(); ++k) {
    const std::size_t L = static_cast<std::size_t>(omega.degree()) - 2 * k;
    if (L == 0) {
      if (!omega.level(k).empty()) return false;
      continue;
    }
    if (!trailing_image_arguments_vanish(omega, k, L)) return false;
  }
  return true;
}

FiltrationTag filtration_tag(const Cochain& omega) {
  FiltrationTag tag;
  tag.c_level = 0;
  for (std::size_t k = 0; k < omega.level_count(); ++k)
    if (!omega.level(k).empty()) tag.c_level = k;
  // Membership in the vanishing filtration is monotone in the index
  // (conditions weaken as it grows), so the first member level tells
  // the whole story; beyond the degree every condition is vacuous.
  for (std::size_t k = 0; k <= static_cast<std::size_t>(omega.degree()); ++k) {
    if (in_F(omega, k)) {
      tag.f_level = k;
      break;
    }
  }
  tag.in_ideal = in_I(omega);
  return tag;
}

CochainTable gr_component(const Cochain& omega, std::size_t i) {
  if (!in_C(omega, i))
    throw std::invalid_argument("cochain has nonzero tables above the requested level");
  if (i >= omega.level_count())
    throw std::invalid_argument("level exceeds the cochain's table range");
  CochainTable table = omega.level(i);
  for (const auto& [key, value] : table) {
    for (std::size_t pos = 0; pos + 1 < key.elements.size(); ++pos) {
      if (key.elements[pos] == key.elements[pos + 1])
        throw std::logic_error("top-level table is not alternating on a repeated index");
      CochainKey swapped = key;
      std::swap(swapped.elements[pos], swapped.elements[pos + 1]);
      RingElement other = omega.entry(i, swapped);
      if (!(other + value).is_zero())
        throw std::logic_error("top-level table is not alternating under transposition");
    }
  }
  return table;
}

AlternatingTables symmetrize(const Cochain& omega) {
  AlternatingTables out;
  out.degree = omega.degree();
  out.levels.resize(omega.level_count());
  const auto& R = omega.algebra()->ring();

  for (std::size_t k = 0; k < omega.level_count(); ++k) {
    const std::size_t m = static_cast<std::size_t>(omega.degree()) - 2 * k;
    Rational fact(1);
    for (std::size_t i = 2; i <= m; ++i) fact *= Rational(static_cast<long>(i));
    Rational inv_fact = Rational(1) / fact;

    // Candidate output keys: sorted versions of stored keys.  Keys whose
    // sorted tuple repeats an index average to zero and are dropped.
    std::set<std::pair<std::vector<int>, std::vector<int>>> candidates;
    for (const auto& [key, value] : omega.level(k)) {
      std::vector<int> sorted = key.elements;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      candidates.emplace(std::move(sorted), key.weights);
    }

    for (const auto& [base, w] : candidates) {
      RingElement acc = RingElement::zero(R);
      std::vector<int> perm = base;  // strictly increasing start
      do {
        RingElement v = omega.entry(k, CochainKey{perm, w});
        if (!v.is_zero()) {
          int inversions = 0;
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
              if (perm[i] > perm[j]) ++inversions;
          acc += (inversions % 2 == 0) ? v : -v;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      acc = acc * RingElement::constant(R, inv_fact);
      if (!acc.is_zero()) out.levels[k].emplace(CochainKey{base, w}, std::move(acc));
    }
  }
  return out;
}

CochainTable lp_projection(const Cochain& omega) { return omega.level(0); }

Cochain reconstruct_from_omega0(const AlgebraPtr& a, const Omega0Oracle& omega0, int degree,
                                const FullnessWitness& witness) {
  if (witness.pairs.empty())
    throw std::invalid_argument("reconstruction requires a pairing witness");
  RingElement total = RingElement::zero(a->ring());
  for (const auto& [x, y] : witness.pairs) total += a->module()->pairing(x, y);
  if (!(total - RingElement::one(a->ring())).is_zero())
    throw std::invalid_argument("pairing witness does not sum to one");

  std::function<RingElement(const std::vector<ModuleElement>&, const std::vector<RingElement>&)>
      func = [&](const std::vector<ModuleElement>& e_args,
                 const std::vector<RingElement>& f_args) -> RingElement {
    if (f_args.empty()) return omega0(e_args);
    std::vector<RingElement> f_rest(f_args.begin(), f_args.end() - 1);
    const RingElement& f = f_args.back();
    RingElement acc = RingElement::zero(a->ring());
    for (const auto& [x, y] : witness.pairs) {
      ModuleElement fx = x;
      fx.scale(f);
      std::vector<ModuleElement> args1{fx, y};
      args1.insert(args1.end(), e_args.begin(), e_args.end());
      std::vector<ModuleElement> args2{y, fx};
      args2.insert(args2.end(), e_args.begin(), e_args.end());
      acc += func(args1, f_rest) + func(args2, f_rest);
    }
    return -acc;
  };

  Cochain out(a, degree);
  const int n = static_cast<int>(a->rank());
  const int v = static_cast<int>(a->var_count());
  for (std::size_t k = 0; k < out.level_count(); ++k) {
    const std::size_t L = static_cast<std::size_t>(degree) - 2 * k;
    for_each_multiset(v, k, [&](const std::vector<int>& w) {
      std::vector<RingElement> f_args;
      for (int s : w)
        f_args.push_back(RingElement::variable(a->ring(), static_cast<std::size_t>(s)));
      for_each_tuple(n, L, [&](const std::vector<int>& t) {
        std::vector<ModuleElement> e_args;
        for (int b : t) e_args.push_back(a->module()->basis_element(static_cast<std::size_t>(b)));
        RingElement value = func(e_args, f_args);
        if (!value.is_zero()) out.set_entry(k, CochainKey{t, w}, std::move(value));
      });
    });
  }

  auto check = validate(out);
  if (!check.ok)
    throw std::invalid_argument("bottom component is inconsistent: " + check.violation);
  return out;
}

Cochain random_valid_cochain(Rng& rng, const AlgebraPtr& a, int degree, int coeff_degree,
                             int terms_per_level) {
  Cochain out(a, degree);
  const int n = static_cast<int>(a->rank());
  const int v = static_cast<int>(a->var_count());
  const auto& R = a->ring();

  // Materializing a level scans every key it can hold; refuse sizes
  // that would make that scan unreasonable.
  double total_keys = 0;
  for (std::size_t k = 0; k < out.level_count(); ++k) {
    const std::size_t L = static_cast<std::size_t>(degree) - 2 * k;
    double count = 1;
    for (std::size_t i = 0; i < L; ++i) count *= n;
    for (std::size_t i = 0; i < k; ++i) count *= (v + static_cast<double>(i)) / (i + 1);
    total_keys += count;
  }
  if (total_keys > 500000)
    throw std::invalid_argument("random cochain would materialize too many keys");

  // Free values on strictly increasing tuples.
  std::vector<CochainTable> seeds(out.level_count());
  for (std::size_t k = 0; k < out.level_count(); ++k) {
    const std::size_t L = static_cast<std::size_t>(degree) - 2 * k;
    if (L > static_cast<std::size_t>(n)) continue;
    if (v == 0 && k > 0) continue;
    for (int attempt = 0; attempt < terms_per_level; ++attempt) {
      std::vector<int> pool(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
      for (std::size_t i = 0; i < L; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
      }
      std::vector<int> t(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(L));
      std::sort(t.begin(), t.end());
      std::vector<int> w;
      for (std::size_t i = 0; i < k; ++i)
        w.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(v))));
      std::sort(w.begin(), w.end());
      RingElement value = rng.ring_element(R, coeff_degree, 2, false);
      seeds[k].insert_or_assign(CochainKey{t, w}, std::move(value));
    }
  }

  // Complete the tables level by level from the top down: the value on
  // any tuple follows from sorted tuples through adjacent swaps, with
  // gram-derivative corrections read one level up.
  std::vector<CochainTable> memo(out.level_count());
  std::function<RingElement(std::size_t, const std::vector<int>&, const std::vector<int>&)> value =
      [&](std::size_t k, const std::vector<int>& t, const std::vector<int>& w) -> RingElement {
    if (k >= out.level_count()) return RingElement::zero(R);
    CochainKey key{t, w};
    auto it = memo[k].find(key);
    if (it != memo[k].end()) return it->second;

    RingElement result = RingElement::zero(R);
    std::size_t descent = t.size();
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      if (t[i] >= t[i + 1]) {
        descent = i;
        break;
      }
    if (descent == t.size()) {
      auto seed = seeds[k].find(key);
      result = (seed != seeds[k].end()) ? seed->second : RingElement::zero(R);
    } else {
      RingElement correction = RingElement::zero(R);
      for (std::size_t s = 0; s < static_cast<std::size_t>(v); ++s) {
        RingElement dg = gram_derivative(a, t[descent], t[descent + 1], s);
        if (dg.is_zero()) continue;
        auto reduced = tuple_erase(tuple_erase(t, descent + 1), descent);
        correction += dg * value(k + 1, reduced, multiset_insert(w, static_cast<int>(s)));
      }
      if (t[descent] == t[descent + 1]) {
        correction.scale(make_rational(-1, 2));
        result = correction;
      } else {
        std::vector<int> swapped = t;
        std::swap(swapped[descent], swapped[descent + 1]);
        result = -value(k, swapped, w) - correction;
      }
    }
    memo[k].emplace(std::move(key), result);
    return result;
  };

  for (std::size_t k = out.level_count(); k-- > 0;) {
    const std::size_t L = static_cast<std::size_t>(degree) - 2 * k;
    for_each_multiset(v, k, [&](const std::vector<int>& w) {
      for_each_tuple(n, L, [&](const std::vector<int>& t) {
        RingElement val = value(k, t, w);
        if (!val.is_zero()) out.set_entry(k, CochainKey{t, w}, std::move(val));
      });
    });
  }
  return out;
}

}  // namespace cordal
