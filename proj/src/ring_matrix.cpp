#include "cordal/ring_matrix.hpp"

#include <bit>
#include <stdexcept>

namespace cordal {

void require_square_matrix(const RingSpecPtr& spec, const RingMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
    for (const auto& entry : row) require_spec(spec, entry);
  }
}

RingMatrix identity_matrix(const RingSpecPtr& spec, std::size_t n) {
  RingMatrix out(n, std::vector<RingElement>(n, RingElement::zero(spec)));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = RingElement::one(spec);
  return out;
}

RingElement ring_matrix_determinant(const RingSpecPtr& spec, const RingMatrix& m) {
  require_square_matrix(spec, m);
  const std::size_t n = m.size();
  if (n == 0) return RingElement::one(spec);
  if (n > 16) throw std::invalid_argument("determinant supported up to size 16");

  // memo[mask] = determinant of the first popcount(mask) rows restricted to
  // the column set encoded by mask, expanded along the last of those rows.
  const std::size_t full = std::size_t{1} << n;
  std::vector<RingElement> memo(full, RingElement::zero(spec));
  memo[0] = RingElement::one(spec);
  for (std::size_t mask = 1; mask < full; ++mask) {
    const int r = std::popcount(mask) - 1;
    RingElement acc = RingElement::zero(spec);
    int pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const RingElement& entry = m[static_cast<std::size_t>(r)][j];
      if (!entry.is_zero()) {
        RingElement term = entry * memo[mask ^ (std::size_t{1} << j)];
        if ((r + pos) % 2 == 0)
          acc += term;
        else
          acc -= term;
      }
      ++pos;
    }
    memo[mask] = std::move(acc);
  }
  return memo[full - 1];
}

namespace {

RingMatrix submatrix_without(const RingMatrix& m, std::size_t row, std::size_t col) {
  RingMatrix out;
  out.reserve(m.size() - 1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == row) continue;
    std::vector<RingElement> line;
    line.reserve(m.size() - 1);
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j == col) continue;
      line.push_back(m[i][j]);
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace

std::optional<RingMatrix> ring_matrix_inverse(const RingSpecPtr& spec, const RingMatrix& m) {
  require_square_matrix(spec, m);
  const std::size_t n = m.size();
  RingElement det = ring_matrix_determinant(spec, m);
  if (!det.is_unit()) return std::nullopt;
  RingElement inv_det = det.inverse_of_unit();

  RingMatrix out(n, std::vector<RingElement>(n, RingElement::zero(spec)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      RingElement cof = ring_matrix_determinant(spec, submatrix_without(m, j, i));
      if ((i + j) % 2 == 1) cof.scale(make_rational(-1));
      out[i][j] = cof * inv_det;
    }
  }
  return out;
}

namespace {

// Exact fraction of ring elements; denominators are never zero.
struct Frac {
  RingElement num;
  RingElement den;
};

Frac frac_sub_scaled(const RingSpecPtr& spec, const Frac& a, const RingElement& c, const Frac& x) {
  // a - c*x
  RingElement num = a.num * x.den - c * x.num * a.den;
  if (num.is_zero()) return {num, RingElement::one(spec)};
  return {std::move(num), a.den * x.den};
}

}  // namespace

SpanSolve solve_in_span(const RingSpecPtr& spec,
                        const std::vector<std::vector<RingElement>>& columns,
                        const std::vector<RingElement>& target) {
  const std::size_t n = target.size();
  const std::size_t m = columns.size();
  for (const auto& col : columns) {
    if (col.size() != n) throw std::invalid_argument("span column length mismatch");
    for (const auto& entry : col) require_spec(spec, entry);
  }
  for (const auto& entry : target) require_spec(spec, entry);

  // Augmented matrix, fraction-free forward elimination.
  std::vector<std::vector<RingElement>> M(n, std::vector<RingElement>(m + 1, RingElement::zero(spec)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) M[i][j] = columns[j][i];
    M[i][m] = target[i];
  }

  RingElement prev = RingElement::one(spec);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, column)
  std::vector<char> used(m, 0);
  std::size_t r = 0;
  while (r < n) {
    // Prefer a unit pivot: divisions in back-substitution then stay inside
    // the ring, so more memberships get certified instead of left open.
    std::size_t pivot_row = n, pivot_col = m;
    for (std::size_t c = 0; c < m && pivot_col == m; ++c) {
      if (used[c]) continue;
      for (std::size_t p = r; p < n; ++p)
        if (M[p][c].is_unit()) {
          pivot_row = p;
          pivot_col = c;
          break;
        }
    }
    for (std::size_t c = 0; c < m && pivot_col == m; ++c) {
      if (used[c]) continue;
      for (std::size_t p = r; p < n; ++p)
        if (!M[p][c].is_zero()) {
          pivot_row = p;
          pivot_col = c;
          break;
        }
    }
    if (pivot_col == m) break;
    std::swap(M[pivot_row], M[r]);
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t j = 0; j <= m; ++j) {
        if (j == pivot_col) continue;
        RingElement num = M[i][j] * M[r][pivot_col] - M[i][pivot_col] * M[r][j];
        if (num.is_zero()) {
          M[i][j] = RingElement::zero(spec);
          continue;
        }
        auto q = num.divide_exact(prev);
        if (!q) throw std::logic_error("fraction-free elimination division failed");
        M[i][j] = std::move(*q);
      }
      M[i][pivot_col] = RingElement::zero(spec);
    }
    prev = M[r][pivot_col];
    used[pivot_col] = 1;
    pivots.emplace_back(r, pivot_col);
    ++r;
  }

  SpanSolve out;
  for (std::size_t i = r; i < n; ++i) {
    if (!M[i][m].is_zero()) return out;  // inconsistent over the fraction field
  }
  out.consistent = true;
  out.unique = (pivots.size() == m);

  // Back-substitution with free unknowns pinned to zero.
  std::vector<Frac> x(m, Frac{RingElement::zero(spec), RingElement::one(spec)});
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const auto [row, col] = pivots[k];
    Frac acc{M[row][m], RingElement::one(spec)};
    for (std::size_t j = 0; j < m; ++j) {
      if (j == col || M[row][j].is_zero() || x[j].num.is_zero()) continue;
      acc = frac_sub_scaled(spec, acc, M[row][j], x[j]);
    }
    acc.den = acc.den * M[row][col];
    x[col] = std::move(acc);
  }

  std::vector<RingElement> solution;
  solution.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (x[j].num.is_zero()) {
      solution.push_back(RingElement::zero(spec));
      continue;
    }
    auto q = x[j].num.divide_exact(x[j].den);
    if (!q) return out;  // no ring solution along this particular solution
    solution.push_back(std::move(*q));
  }

  // Safety: recombine and compare against the target.
  for (std::size_t i = 0; i < n; ++i) {
    RingElement acc = RingElement::zero(spec);
    for (std::size_t j = 0; j < m; ++j) {
      if (solution[j].is_zero() || columns[j][i].is_zero()) continue;
      acc += solution[j] * columns[j][i];
    }
    if (acc != target[i]) throw std::logic_error("span solution failed verification");
  }
  out.ring_solution = std::move(solution);
  return out;
}

RingMatrix ring_matrix_product(const RingSpecPtr& spec, const RingMatrix& a, const RingMatrix& b) {
  require_square_matrix(spec, a);
  require_square_matrix(spec, b);
  if (a.size() != b.size()) throw std::invalid_argument("matrix size mismatch");
  const std::size_t n = a.size();
  RingMatrix out(n, std::vector<RingElement>(n, RingElement::zero(spec)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[k][j].is_zero()) continue;
        out[i][j] += a[i][k] * b[k][j];
      }
    }
  return out;
}

}  // namespace cordal
