/*
 * Small combinatorial helpers on sorted integer multisets: position
 * counts of submultiset splits, enumeration of submultisets, multiset
 * difference and union.  Used by the shuffle-style products.
 */
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "cordal/scalar.hpp"

namespace cordal {

// Number of ways to pick "part" out of "whole" by positions: the product
// over values of binomial(mult in whole, mult in part).  Zero when part
// is not a submultiset.  Both inputs must be sorted.
inline Rational multiset_split_count(const std::vector<int>& whole, const std::vector<int>& part) {
  Rational count(1);
  std::size_t i = 0, j = 0;
  while (i < whole.size()) {
    int v = whole[i];
    std::size_t wi = i;
    while (i < whole.size() && whole[i] == v) ++i;
    std::size_t pj = j;
    while (j < part.size() && part[j] == v) ++j;
    unsigned long n = static_cast<unsigned long>(i - wi);
    unsigned long k = static_cast<unsigned long>(j - pj);
    if (k > n) return Rational(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    count *= Rational(b);
  }
  return j == part.size() ? count : Rational(0);
}

// All sorted submultisets of the given size (each distinct value pattern
// listed once).  Input must be sorted.
inline std::vector<std::vector<int>> submultisets(const std::vector<int>& whole, std::size_t size) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (current.size() == size) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = start; i < whole.size(); ++i) {
      if (i > start && whole[i] == whole[i - 1]) continue;
      if (whole.size() - i < size - current.size()) break;
      current.push_back(whole[i]);
      self(self, i + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

// whole minus part, both sorted, part a submultiset of whole.
inline std::vector<int> multiset_difference(const std::vector<int>& whole, const std::vector<int>& part) {
  std::vector<int> rest;
  rest.reserve(whole.size() - part.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (j < part.size() && whole[i] == part[j]) {
      ++j;
    } else {
      rest.push_back(whole[i]);
    }
  }
  return rest;
}

// Sorted union (concatenation as multisets).
inline std::vector<int> multiset_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Inserts one value, keeping the multiset sorted.
inline std::vector<int> multiset_insert(const std::vector<int>& a, int v) {
  std::vector<int> out;
  out.reserve(a.size() + 1);
  auto it = std::upper_bound(a.begin(), a.end(), v);
  out.insert(out.end(), a.begin(), it);
  out.push_back(v);
  out.insert(out.end(), it, a.end());
  return out;
}

// Removes one copy of a value (which must be present).
inline std::vector<int> multiset_remove(const std::vector<int>& a, int v) {
  std::vector<int> out;
  out.reserve(a.size() - 1);
  bool removed = false;
  for (int x : a) {
    if (!removed && x == v) {
      removed = true;
      continue;
    }
    out.push_back(x);
  }
  return out;
}

// Multiplicity of a value.
inline int multiset_count(const std::vector<int>& a, int v) {
  auto lo = std::lower_bound(a.begin(), a.end(), v);
  auto hi = std::upper_bound(a.begin(), a.end(), v);
  return static_cast<int>(hi - lo);
}

// One way of riffling two ordered tuples together, with the sign of the
// permutation that unriffles the result back into the two blocks.
struct Interleaving {
  std::vector<int> merged;
  int sign = 1;  // +1 or -1
};

// All interleavings of u1 and u2 that keep the internal order of each
// block; the sign counts (mod 2) how many first-block entries end up
// after each second-block entry.
inline std::vector<Interleaving> signed_interleavings(const std::vector<int>& u1,
                                                      const std::vector<int>& u2) {
  std::vector<Interleaving> out;
  std::vector<int> current;
  current.reserve(u1.size() + u2.size());
  auto rec = [&](auto&& self, std::size_t i, std::size_t j, int inversions) -> void {
    if (i == u1.size() && j == u2.size()) {
      out.push_back({current, inversions % 2 == 0 ? 1 : -1});
      return;
    }
    if (i < u1.size()) {
      current.push_back(u1[i]);
      // placing a first-block element after j second-block elements
      self(self, i + 1, j, inversions + static_cast<int>(j));
      current.pop_back();
    }
    if (j < u2.size()) {
      current.push_back(u2[j]);
      self(self, i, j + 1, inversions);
      current.pop_back();
    }
  };
  rec(rec, 0, 0, 0);
  return out;
}

}  // namespace cordal
