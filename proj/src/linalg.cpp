#include "cordal/linalg.hpp"

#include <gmpxx.h>

#include <stdexcept>
#include <utility>

namespace cordal {

namespace {

// Denominator-cleared, content-reduced integer copies of the nonzero rows.
std::vector<std::vector<mpz_class>> integer_rows(const QMatrix& rows, std::size_t ncols) {
  std::vector<std::vector<mpz_class>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != ncols) throw std::invalid_argument("row length does not match column count");
    mpz_class lcm_den = 1;
    bool nonzero = false;
    for (const auto& c : row) {
      if (c == 0) continue;
      nonzero = true;
      mpz_class den = c.get_den();
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
    }
    if (!nonzero) continue;
    std::vector<mpz_class> scaled(ncols);
    mpz_class content = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      scaled[j] = row[j].get_num() * (lcm_den / row[j].get_den());
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), scaled[j].get_mpz_t());
    }
    if (content > 1)
      for (auto& v : scaled) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), content.get_mpz_t());
    out.push_back(std::move(scaled));
  }
  return out;
}

}  // namespace

EchelonForm reduced_row_echelon(QMatrix rows, std::size_t column_count) {
  auto m = integer_rows(rows, column_count);
  rows.clear();

  // Fraction-free forward elimination: after each step the entries stay
  // integral because the previous pivot divides the two-by-two minors.
  std::vector<std::size_t> pivots;
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < column_count && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      for (std::size_t j = c + 1; j < column_count; ++j) {
        mpz_class t = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    pivots.push_back(c);
    ++r;
  }

  EchelonForm out;
  out.column_count = column_count;
  out.pivots = pivots;
  out.rows.assign(pivots.size(), QVector(column_count, Rational(0)));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    Rational lead(m[i][pivots[i]]);
    for (std::size_t j = pivots[i]; j < column_count; ++j) {
      if (m[i][j] == 0) continue;
      out.rows[i][j] = Rational(m[i][j]) / lead;
    }
  }
  // Clear the entries above each pivot, bottom row first.
  for (std::size_t i = pivots.size(); i-- > 0;) {
    for (std::size_t i2 = 0; i2 < i; ++i2) {
      Rational f = out.rows[i2][pivots[i]];
      if (f == 0) continue;
      for (std::size_t j = pivots[i]; j < column_count; ++j)
        out.rows[i2][j] -= f * out.rows[i][j];
    }
  }
  return out;
}

std::size_t matrix_rank(const QMatrix& rows, std::size_t column_count) {
  return reduced_row_echelon(rows, column_count).rank();
}

NullspaceBasis nullspace_basis(const QMatrix& rows, std::size_t column_count) {
  auto ech = reduced_row_echelon(rows, column_count);
  std::vector<bool> is_pivot(column_count, false);
  for (auto p : ech.pivots) is_pivot[p] = true;

  NullspaceBasis out;
  for (std::size_t f = 0; f < column_count; ++f) {
    if (is_pivot[f]) continue;
    QVector v(column_count, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < ech.pivots.size(); ++i) v[ech.pivots[i]] = -ech.rows[i][f];
    out.free_columns.push_back(f);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

std::optional<QVector> solve_columns(const QMatrix& columns, const QVector& rhs) {
  const std::size_t nrows = rhs.size();
  const std::size_t ncols = columns.size();
  for (const auto& col : columns)
    if (col.size() != nrows) throw std::invalid_argument("column length does not match the right-hand side");

  QMatrix rows(nrows, QVector(ncols + 1, Rational(0)));
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) rows[i][j] = columns[j][i];
    rows[i][ncols] = rhs[i];
  }
  auto ech = reduced_row_echelon(std::move(rows), ncols + 1);
  for (auto p : ech.pivots)
    if (p == ncols) return std::nullopt;
  QVector x(ncols, Rational(0));
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) x[ech.pivots[i]] = ech.rows[i][ncols];
  return x;
}

std::vector<std::size_t> independent_columns(const QMatrix& base_columns,
                                             const QMatrix& candidate_columns) {
  std::size_t nrows = 0;
  if (!base_columns.empty())
    nrows = base_columns.front().size();
  else if (!candidate_columns.empty())
    nrows = candidate_columns.front().size();
  const std::size_t nb = base_columns.size();
  const std::size_t nc = candidate_columns.size();
  for (const auto& col : base_columns)
    if (col.size() != nrows) throw std::invalid_argument("ragged base columns");
  for (const auto& col : candidate_columns)
    if (col.size() != nrows) throw std::invalid_argument("ragged candidate columns");

  QMatrix rows(nrows, QVector(nb + nc, Rational(0)));
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < nb; ++j) rows[i][j] = base_columns[j][i];
    for (std::size_t j = 0; j < nc; ++j) rows[i][nb + j] = candidate_columns[j][i];
  }
  auto ech = reduced_row_echelon(std::move(rows), nb + nc);
  std::vector<std::size_t> picked;
  for (auto p : ech.pivots)
    if (p >= nb) picked.push_back(p - nb);
  return picked;
}

}  // namespace cordal
