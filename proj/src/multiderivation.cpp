#include "cordal/multiderivation.hpp"

#include <algorithm>
#include <stdexcept>

#include "cordal/multiset_util.hpp"

namespace cordal {

MultiDerivation::MultiDerivation(RingSpecPtr spec, int arity)
    : spec_(std::move(spec)), arity_(arity) {
  if (!spec_) throw std::invalid_argument("null ring specification");
  if (arity < 0) throw std::invalid_argument("negative arity");
}

MultiDerivation MultiDerivation::scalar(const RingElement& f) {
  MultiDerivation d(f.spec(), 0);
  d.add_term({}, f);
  return d;
}

MultiDerivation MultiDerivation::from_vector_field(const VectorField& v) {
  MultiDerivation d(v.spec(), 1);
  for (std::size_t j = 0; j < v.spec()->var_count(); ++j)
    d.add_term({static_cast<int>(j)}, v.component(j));
  return d;
}

MultiDerivation MultiDerivation::coordinate(RingSpecPtr spec, std::size_t j) {
  MultiDerivation d(std::move(spec), 1);
  d.add_term({static_cast<int>(j)}, RingElement::one(d.spec()));
  return d;
}

void MultiDerivation::add_term(std::vector<int> multiset, RingElement value) {
  if (static_cast<int>(multiset.size()) != arity_)
    throw std::invalid_argument("multiset length does not match the arity");
  require_spec(spec_, value);
  for (int k : multiset)
    if (k < 0 || k >= static_cast<int>(spec_->var_count()))
      throw std::invalid_argument("variable index out of range");
  if (value.is_zero()) return;
  std::sort(multiset.begin(), multiset.end());
  auto it = table_.find(multiset);
  if (it == table_.end()) {
    table_.emplace(std::move(multiset), std::move(value));
  } else {
    it->second += value;
    if (it->second.is_zero()) table_.erase(it);
  }
}

RingElement MultiDerivation::table_value(const std::vector<int>& multiset) const {
  std::vector<int> key = multiset;
  std::sort(key.begin(), key.end());
  auto it = table_.find(key);
  return it == table_.end() ? RingElement(spec_) : it->second;
}

RingElement MultiDerivation::apply(const std::vector<RingElement>& args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw std::invalid_argument("argument count does not match the arity");
  for (const auto& a : args) require_spec(spec_, a);
  RingElement out(spec_);
  if (table_.empty()) return out;
  if (arity_ == 0) return table_value({});
  // Expand multilinearly: sum over ordered assignments of a variable to
  // each slot, weighting by the partial derivatives of the arguments.
  std::vector<std::vector<std::pair<int, RingElement>>> partials(args.size());
  for (std::size_t s = 0; s < args.size(); ++s) {
    for (std::size_t j = 0; j < spec_->var_count(); ++j) {
      RingElement d = args[s].derivative(j);
      if (!d.is_zero()) partials[s].emplace_back(static_cast<int>(j), std::move(d));
    }
    if (partials[s].empty()) return out;  // constant argument kills every term
  }
  std::vector<std::size_t> choice(args.size(), 0);
  std::vector<int> key(args.size());
  while (true) {
    RingElement coeff = RingElement::one(spec_);
    for (std::size_t s = 0; s < args.size(); ++s) {
      key[s] = partials[s][choice[s]].first;
      coeff *= partials[s][choice[s]].second;
    }
    RingElement val = table_value(key);
    if (!val.is_zero()) out += coeff * val;
    std::size_t s = 0;
    for (; s < args.size(); ++s) {
      if (++choice[s] < partials[s].size()) break;
      choice[s] = 0;
    }
    if (s == args.size()) break;
  }
  return out;
}

MultiDerivation& MultiDerivation::operator+=(const MultiDerivation& other) {
  return add_scaled(other, RingElement::one(spec_));
}

MultiDerivation& MultiDerivation::add_scaled(const MultiDerivation& other, const RingElement& c) {
  if (*spec_ != *other.spec_ || arity_ != other.arity_)
    throw std::invalid_argument("incompatible multiderivations");
  for (const auto& [k, v] : other.table_) {
    auto it = table_.find(k);
    if (it == table_.end()) {
      RingElement val = c * v;
      if (!val.is_zero()) table_.emplace(k, std::move(val));
    } else {
      it->second += c * v;
      if (it->second.is_zero()) table_.erase(it);
    }
  }
  return *this;
}

MultiDerivation MultiDerivation::operator-() const {
  MultiDerivation out(spec_, arity_);
  for (const auto& [k, v] : table_) out.table_.emplace(k, -v);
  return out;
}

MultiDerivation xi_product(const MultiDerivation& h, const MultiDerivation& k) {
  if (*h.spec() != *k.spec()) throw std::invalid_argument("mismatched ring specifications");
  MultiDerivation out(h.spec(), h.arity() + k.arity());
  std::vector<int> key;
  for (const auto& [mh, vh] : h.table()) {
    for (const auto& [mk, vk] : k.table()) {
      key.clear();
      key.reserve(mh.size() + mk.size());
      key.insert(key.end(), mh.begin(), mh.end());
      key.insert(key.end(), mk.begin(), mk.end());
      std::sort(key.begin(), key.end());
      Rational mult = multiset_split_count(key, mh);
      RingElement val = vh * vk;
      val.scale(mult);
      out.add_term(key, std::move(val));
    }
  }
  return out;
}

XiInsertion::XiInsertion(MultiDerivation outer, MultiDerivation inner)
    : outer_(std::move(outer)), inner_(std::move(inner)) {
  if (*outer_.spec() != *inner_.spec())
    throw std::invalid_argument("mismatched ring specifications");
  if (outer_.arity() == 0)
    throw std::invalid_argument("insertion needs an operator with at least one slot");
}

XiInsertion xi_insert(const MultiDerivation& h, const MultiDerivation& k) {
  return XiInsertion(h, k);
}

RingElement XiInsertion::apply(const std::vector<RingElement>& args) const {
  if (static_cast<int>(args.size()) != arity())
    throw std::invalid_argument("argument count does not match the arity");
  const std::size_t j = static_cast<std::size_t>(inner_.arity());
  RingElement out(outer_.spec());
  // Sum over position subsets: feed each size-j subset to the inner
  // operator and the rest, behind its value, to the outer one.
  std::vector<std::size_t> idx(j);
  std::vector<RingElement> inner_args(j, RingElement(outer_.spec()));
  std::vector<RingElement> outer_args;
  std::vector<char> taken(args.size(), 0);
  // Enumerate subsets of positions {0..args.size()-1} of size j.
  std::vector<std::size_t> subset;
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (subset.size() == j) {
      for (std::size_t t = 0; t < j; ++t) inner_args[t] = args[subset[t]];
      RingElement g = inner_.apply(inner_args);
      if (!g.is_zero()) {
        std::fill(taken.begin(), taken.end(), 0);
        for (std::size_t t : subset) taken[t] = 1;
        outer_args.clear();
        outer_args.push_back(std::move(g));
        for (std::size_t t = 0; t < args.size(); ++t)
          if (!taken[t]) outer_args.push_back(args[t]);
        out += outer_.apply(outer_args);
      }
      return;
    }
    for (std::size_t i = start; i + (j - subset.size()) <= args.size(); ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

MultiDerivation XiInsertion::tabulated() const {
  const RingSpecPtr& spec = outer_.spec();
  MultiDerivation out(spec, arity());
  if (arity() == 0) {
    std::vector<RingElement> no_args;
    out.add_term({}, apply(no_args));
    return out;
  }
  // Evaluate on every variable multiset of the right size.
  std::vector<int> multiset(arity());
  std::vector<RingElement> args(arity(), RingElement(spec));
  const int n = static_cast<int>(spec->var_count());
  auto recurse = [&](auto&& self, int pos, int min_var) -> void {
    if (pos == arity()) {
      for (int s = 0; s < arity(); ++s)
        args[s] = RingElement::variable(spec, static_cast<std::size_t>(multiset[s]));
      out.add_term(multiset, apply(args));
      return;
    }
    for (int v = min_var; v < n; ++v) {
      multiset[pos] = v;
      self(self, pos + 1, v);
    }
  };
  recurse(recurse, 0, 0);
  return out;
}

MultiDerivation xi_poisson(const MultiDerivation& h, const MultiDerivation& k) {
  if (*h.spec() != *k.spec()) throw std::invalid_argument("mismatched ring specifications");
  int arity = h.arity() + k.arity() - 1;
  if (arity < 0) return MultiDerivation(h.spec(), 0);
  MultiDerivation out(h.spec(), arity);
  if (h.arity() > 0) out += xi_insert(h, k).tabulated();
  if (k.arity() > 0) out.add_scaled(xi_insert(k, h).tabulated(), RingElement::constant(h.spec(), -1));
  return out;
}

}  // namespace cordal
