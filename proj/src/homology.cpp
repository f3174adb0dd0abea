#include "cordal/homology.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cordal/extension.hpp"
#include "cordal/multiset_util.hpp"

namespace cordal {

namespace {

bool rational_base(const AlgebraPtr& a) {
  return a->ring()->family == RingFamily::rationals;
}

// All monomials of the coefficient ring within the degree window.
std::vector<Monomial> monomial_window(const RingSpecPtr& ring, int bound) {
  std::vector<Monomial> out;
  switch (ring->family) {
    case RingFamily::rationals:
      out.push_back(Monomial{});
      break;
    case RingFamily::laurent:
      for (int e = -bound; e <= bound; ++e) out.push_back(Monomial{e});
      break;
    case RingFamily::polynomial: {
      const std::size_t vars = ring->var_count();
      Monomial current(vars, 0);
      auto rec = [&](auto&& self, std::size_t pos, int budget) -> void {
        if (pos == vars) {
          out.push_back(current);
          return;
        }
        for (int e = 0; e <= budget; ++e) {
          current[pos] = e;
          self(self, pos + 1, budget - e);
        }
        current[pos] = 0;
      };
      rec(rec, 0, bound);
      break;
    }
  }
  return out;
}

Monomial monomial_sum(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

// Sorted multisets of the given size over the variable indices.
std::vector<std::vector<int>> weight_multisets(std::size_t vars, std::size_t size) {
  std::vector<std::vector<int>> out;
  if (size == 0) {
    out.push_back({});
    return out;
  }
  if (vars == 0) return out;
  std::vector<int> current;
  auto rec = [&](auto&& self, int from, std::size_t left) -> void {
    if (left == 0) {
      out.push_back(current);
      return;
    }
    for (int v = from; v < static_cast<int>(vars); ++v) {
      current.push_back(v);
      self(self, v, left - 1);
      current.pop_back();
    }
  };
  rec(rec, 0, size);
  return out;
}

// All ordered tuples of the given length over the basis indices.
std::vector<std::vector<int>> ordered_tuples(int rank, std::size_t length) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(length, 0);
  if (length == 0) {
    out.push_back(current);
    return out;
  }
  if (rank == 0) return out;
  while (true) {
    out.push_back(current);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (++current[pos] < rank) break;
      current[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

std::vector<int> tuple_without(const std::vector<int>& u, std::size_t pos) {
  std::vector<int> out;
  out.reserve(u.size() - 1);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (i != pos) out.push_back(u[i]);
  return out;
}

RingElement gram_entry_derivative(const AlgebraPtr& a, int i, int j, std::size_t s) {
  return a->module()
      ->pairing(a->module()->basis_element(static_cast<std::size_t>(i)),
                a->module()->basis_element(static_cast<std::size_t>(j)))
      .derivative(s);
}

using CoordinateIndex = std::map<CochainCoordinate, std::size_t>;

CoordinateIndex build_index(const std::vector<CochainCoordinate>& coords) {
  CoordinateIndex idx;
  for (std::size_t i = 0; i < coords.size(); ++i) idx.emplace(coords[i], i);
  return idx;
}

// Ambient coordinates of a cochain over an enumerated list; entries
// outside the list report a window overflow.
QVector ambient_vector(const std::vector<CochainCoordinate>& coords, const CoordinateIndex& idx,
                       const Cochain& omega) {
  QVector out(coords.size(), Rational(0));
  for (std::size_t k = 0; k < omega.level_count(); ++k) {
    for (const auto& [key, value] : omega.level(k)) {
      for (const auto& [m, c] : value.terms()) {
        auto it = idx.find(CochainCoordinate{k, key, m});
        if (it == idx.end())
          throw std::invalid_argument(
              "cochain entry falls outside the coefficient window of the truncated basis");
        out[it->second] = c;
      }
    }
  }
  return out;
}

// One dense relation row per output monomial of each transposition
// instance: omega_k(u) + omega_k(u with the adjacent pair swapped) plus
// the gram-derivative corrections one level up must vanish identically.
QMatrix relation_rows(const AlgebraPtr& a, int degree, int bound,
                      const std::vector<CochainCoordinate>& coords, const CoordinateIndex& idx) {
  const auto mons = monomial_window(a->ring(), bound);
  const int n = static_cast<int>(a->rank());
  const std::size_t vars = a->var_count();

  QMatrix rows;
  auto flush_instance = [&](const std::map<Monomial, std::map<std::size_t, Rational>>& cells) {
    for (const auto& [m, entries] : cells) {
      QVector row(coords.size(), Rational(0));
      bool nonzero = false;
      for (const auto& [col, v] : entries) {
        if (v == 0) continue;
        row[col] = v;
        nonzero = true;
      }
      if (nonzero) rows.push_back(std::move(row));
    }
  };

  for (std::size_t k = 0; 2 * k + 2 <= static_cast<std::size_t>(degree); ++k) {
    if (k > 0 && vars == 0) break;
    const std::size_t length = static_cast<std::size_t>(degree) - 2 * k;
    for (const auto& w : weight_multisets(vars, k)) {
      for (const auto& u : ordered_tuples(n, length)) {
        for (std::size_t pos = 0; pos + 1 < length; ++pos) {
          if (u[pos] > u[pos + 1]) continue;  // the swapped instance is the same relation
          std::map<Monomial, std::map<std::size_t, Rational>> cells;
          auto add_term = [&](std::size_t level, const CochainKey& key, const RingElement& coeff) {
            for (const auto& m : mons) {
              auto it = idx.find(CochainCoordinate{level, key, m});
              if (it == idx.end())
                throw std::logic_error("relation references a coordinate outside the enumeration");
              for (const auto& [mu, q] : coeff.terms()) cells[monomial_sum(m, mu)][it->second] += q;
            }
          };
          const RingElement unit = RingElement::one(a->ring());
          add_term(k, CochainKey{u, w}, unit);
          std::vector<int> swapped = u;
          std::swap(swapped[pos], swapped[pos + 1]);
          add_term(k, CochainKey{swapped, w}, unit);
          for (std::size_t s = 0; s < vars; ++s) {
            RingElement dg = gram_entry_derivative(a, u[pos], u[pos + 1], s);
            if (dg.is_zero()) continue;
            auto reduced = tuple_without(tuple_without(u, pos + 1), pos);
            add_term(k + 1, CochainKey{reduced, multiset_insert(w, static_cast<int>(s))}, dg);
          }
          flush_instance(cells);
        }
      }
    }
  }
  return rows;
}

int cochain_degree_measure(const Cochain& omega) {
  int best = 0;
  for (std::size_t k = 0; k < omega.level_count(); ++k)
    for (const auto& [key, value] : omega.level(k)) best = std::max(best, value.degree_measure());
  return best;
}

void require_admissible(const Cochain& omega, const char* what) {
  auto check = validate(omega);
  if (!check.ok)
    throw std::invalid_argument(std::string(what) + ": input is not admissible (" +
                                check.violation + ")");
}

}  // namespace

Cochain TruncatedBasis::member(std::size_t index) const {
  QVector unit(dimension(), Rational(0));
  unit.at(index) = 1;
  return combine(unit);
}

Cochain TruncatedBasis::combine(const QVector& coefficients) const {
  if (coefficients.size() != dimension())
    throw std::invalid_argument("coefficient count does not match the basis dimension");
  Cochain out(algebra, degree);
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    if (coefficients[t] == 0) continue;
    for (std::size_t col = 0; col < coordinates.size(); ++col) {
      const Rational& v = vectors[t][col];
      if (v == 0) continue;
      out.add_entry(coordinates[col].level, coordinates[col].key,
                    RingElement::monomial(algebra->ring(), coordinates[col].monomial,
                                          v * coefficients[t]));
    }
  }
  return out;
}

QVector TruncatedBasis::ambient(const Cochain& omega) const {
  if (omega.degree() != degree)
    throw std::invalid_argument("cochain degree does not match the basis degree");
  return ambient_vector(coordinates, build_index(coordinates), omega);
}

std::optional<QVector> TruncatedBasis::coordinates_of(const Cochain& omega) const {
  QVector amb;
  try {
    amb = ambient(omega);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  QVector coeffs(dimension(), Rational(0));
  for (std::size_t i = 0; i < free_columns.size(); ++i) coeffs[i] = amb[free_columns[i]];
  if (combine(coeffs) == omega) return coeffs;
  return std::nullopt;
}

int structure_degree(const AlgebraPtr& a) {
  if (rational_base(a)) return 0;
  const int laurent_step = a->ring()->family == RingFamily::laurent ? 1 : 0;
  const int n = static_cast<int>(a->rank());
  const std::size_t vars = a->var_count();

  int gram = 0, partial = 0, bracket = 0, anchor = 0;
  bool anchor_nonzero = false, partial_nonzero = false, bracket_nonzero = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gram = std::max(gram, a->module()
                                ->pairing(a->module()->basis_element(static_cast<std::size_t>(i)),
                                          a->module()->basis_element(static_cast<std::size_t>(j)))
                                .degree_measure());
      const ModuleElement& b = a->bracket_entry(static_cast<std::size_t>(i),
                                                static_cast<std::size_t>(j));
      for (int r = 0; r < n; ++r) {
        const RingElement& c = b.coord(static_cast<std::size_t>(r));
        if (c.is_zero()) continue;
        bracket_nonzero = true;
        bracket = std::max(bracket, c.degree_measure());
      }
    }
  for (std::size_t mu = 0; mu < vars; ++mu) {
    const ModuleElement& gen = a->partial_generator(mu);
    for (int r = 0; r < n; ++r) {
      const RingElement& c = gen.coord(static_cast<std::size_t>(r));
      if (c.is_zero()) continue;
      partial_nonzero = true;
      partial = std::max(partial, c.degree_measure());
    }
  }
  for (int i = 0; i < n; ++i)
    for (std::size_t s = 0; s < vars; ++s) {
      const RingElement& c = a->anchor_matrix()[static_cast<std::size_t>(i)][s];
      if (c.is_zero()) continue;
      anchor_nonzero = true;
      anchor = std::max(anchor, c.degree_measure());
    }

  int growth = 0;
  if (anchor_nonzero) growth = std::max(growth, anchor + laurent_step);
  if (partial_nonzero) growth = std::max(growth, partial);
  if (!a->partial_is_constant()) growth = std::max(growth, partial + laurent_step + gram);
  if (bracket_nonzero) growth = std::max(growth, bracket);
  if (!a->bracket_is_constant()) growth = std::max(growth, bracket + laurent_step + gram);
  return growth;
}

std::vector<CochainCoordinate> enumerate_coordinates(const AlgebraPtr& a, int degree,
                                                     int coefficient_bound) {
  if (degree < 0) throw std::invalid_argument("negative cochain degree");
  if (degree > Cochain::degree_cap())
    throw std::invalid_argument("degree exceeds the cochain degree cap");
  if (coefficient_bound < 0) throw std::invalid_argument("negative coefficient bound");

  const int bound = rational_base(a) ? 0 : coefficient_bound;
  const auto mons = monomial_window(a->ring(), bound);
  const int n = static_cast<int>(a->rank());
  const std::size_t vars = a->var_count();

  std::vector<CochainCoordinate> out;
  for (std::size_t k = 0; 2 * k <= static_cast<std::size_t>(degree); ++k) {
    if (k > 0 && vars == 0) break;
    const std::size_t length = static_cast<std::size_t>(degree) - 2 * k;
    for (const auto& w : weight_multisets(vars, k))
      for (const auto& u : ordered_tuples(n, length))
        for (const auto& m : mons) out.push_back(CochainCoordinate{k, CochainKey{u, w}, m});
  }
  return out;
}

TruncatedBasis assemble(const AlgebraPtr& a, int degree, int coefficient_bound,
                        unsigned shuffle_seed) {
  TruncatedBasis basis;
  basis.algebra = a;
  basis.degree = degree;
  basis.coefficient_bound = rational_base(a) ? 0 : coefficient_bound;
  basis.coordinates = enumerate_coordinates(a, degree, coefficient_bound);
  if (shuffle_seed != 0) {
    std::mt19937_64 gen(shuffle_seed);
    std::shuffle(basis.coordinates.begin(), basis.coordinates.end(), gen);
  }
  auto idx = build_index(basis.coordinates);
  auto rows = relation_rows(a, degree, basis.coefficient_bound, basis.coordinates, idx);
  auto ns = nullspace_basis(rows, basis.coordinates.size());
  basis.vectors = std::move(ns.vectors);
  basis.free_columns = std::move(ns.free_columns);
  return basis;
}

QMatrix differential_matrix(const TruncatedBasis& source, const TruncatedBasis& target) {
  if (target.degree != source.degree + 1)
    throw std::invalid_argument("target degree must exceed the source degree by one");
  QMatrix matrix(target.dimension(), QVector(source.dimension(), Rational(0)));
  for (std::size_t j = 0; j < source.dimension(); ++j) {
    Cochain image = differential(source.member(j), /*validate_output=*/false);
    auto coeffs = target.coordinates_of(image);
    if (!coeffs)
      throw std::invalid_argument(
          "differential image leaves the target window; enlarge the target coefficient bound");
    for (std::size_t i = 0; i < target.dimension(); ++i) matrix[i][j] = (*coeffs)[i];
  }
  return matrix;
}

QMatrix differential_matrix(const AlgebraPtr& a, int degree, int coefficient_bound) {
  auto source = assemble(a, degree, coefficient_bound);
  auto target = assemble(a, degree + 1, coefficient_bound + structure_degree(a));
  return differential_matrix(source, target);
}

CohomologyReport cohomology(const AlgebraPtr& a, int q_max, int coefficient_bound,
                            unsigned shuffle_seed) {
  if (q_max < 0) throw std::invalid_argument("negative top degree");
  if (q_max + 1 > Cochain::degree_cap())
    throw std::invalid_argument("top degree must stay one below the cochain degree cap");
  const bool rat = rational_base(a);
  const int growth = structure_degree(a);

  CohomologyReport report;
  report.q_max = q_max;
  report.coefficient_bound = rat ? 0 : coefficient_bound;
  report.structure_degree = growth;
  report.truncated = !rat;

  auto window = [&](int q) { return rat ? 0 : coefficient_bound + q * growth; };

  std::vector<TruncatedBasis> bases;
  bases.reserve(static_cast<std::size_t>(q_max) + 1);
  for (int q = 0; q <= q_max; ++q)
    bases.push_back(assemble(a, q, window(q), shuffle_seed == 0 ? 0 : shuffle_seed + static_cast<unsigned>(q)));
  auto top_coords = enumerate_coordinates(a, q_max + 1, window(q_max + 1));
  auto top_index = build_index(top_coords);

  // Ambient columns of each differential, indexed by the next degree's
  // coordinates, plus kernel bases over the source basis coefficients.
  std::vector<QMatrix> image_columns(static_cast<std::size_t>(q_max) + 1);
  std::vector<QMatrix> kernel_vectors(static_cast<std::size_t>(q_max) + 1);
  for (int q = 0; q <= q_max; ++q) {
    const auto& coords = (q < q_max) ? bases[static_cast<std::size_t>(q) + 1].coordinates : top_coords;
    auto idx = (q < q_max) ? build_index(coords) : top_index;
    QMatrix columns;
    columns.reserve(bases[static_cast<std::size_t>(q)].dimension());
    for (std::size_t j = 0; j < bases[static_cast<std::size_t>(q)].dimension(); ++j) {
      Cochain image = differential(bases[static_cast<std::size_t>(q)].member(j),
                                   /*validate_output=*/false);
      columns.push_back(ambient_vector(coords, idx, image));
    }
    QMatrix rows(coords.size(), QVector(columns.size(), Rational(0)));
    for (std::size_t i = 0; i < coords.size(); ++i)
      for (std::size_t j = 0; j < columns.size(); ++j) rows[i][j] = columns[j][i];
    kernel_vectors[static_cast<std::size_t>(q)] =
        nullspace_basis(rows, columns.size()).vectors;
    image_columns[static_cast<std::size_t>(q)] = std::move(columns);
  }

  for (int q = 0; q <= q_max; ++q) {
    const auto& basis = bases[static_cast<std::size_t>(q)];
    DegreeSummary summary;
    summary.degree = q;
    summary.coefficient_bound = window(q);
    summary.space_dimension = basis.dimension();
    summary.kernel_dimension = kernel_vectors[static_cast<std::size_t>(q)].size();
    summary.image_dimension = q == 0 ? 0
                                     : bases[static_cast<std::size_t>(q) - 1].dimension() -
                                           kernel_vectors[static_cast<std::size_t>(q) - 1].size();
    summary.betti = static_cast<long long>(summary.kernel_dimension) -
                    static_cast<long long>(summary.image_dimension);

    // Representatives: kernel vectors independent of the incoming image.
    QMatrix kernel_ambient;
    for (const auto& x : kernel_vectors[static_cast<std::size_t>(q)]) {
      QVector amb(basis.ambient_dimension(), Rational(0));
      for (std::size_t t = 0; t < x.size(); ++t) {
        if (x[t] == 0) continue;
        for (std::size_t col = 0; col < basis.ambient_dimension(); ++col)
          amb[col] += x[t] * basis.vectors[t][col];
      }
      kernel_ambient.push_back(std::move(amb));
    }
    const QMatrix& incoming =
        q == 0 ? QMatrix{} : image_columns[static_cast<std::size_t>(q) - 1];
    auto picked = independent_columns(incoming, kernel_ambient);
    if (static_cast<long long>(picked.size()) != summary.betti)
      throw std::logic_error("representative count disagrees with the kernel/image dimensions");
    for (auto p : picked)
      summary.representatives.push_back(
          basis.combine(kernel_vectors[static_cast<std::size_t>(q)][p]));
    report.degrees.push_back(std::move(summary));
  }
  return report;
}

bool is_cocycle(const Cochain& omega) {
  require_admissible(omega, "is_cocycle");
  return differential(omega, /*validate_output=*/false).is_zero();
}

std::optional<Cochain> is_coboundary(const Cochain& omega, int coefficient_bound) {
  require_admissible(omega, "is_coboundary");
  const auto& a = omega.algebra();
  const int p = omega.degree();
  if (p == 0) return std::nullopt;  // no degree below zero to search
  const bool rat = rational_base(a);

  auto source = assemble(a, p - 1, rat ? 0 : coefficient_bound);
  const int target_bound =
      rat ? 0 : std::max(coefficient_bound + structure_degree(a), cochain_degree_measure(omega));
  auto target_coords = enumerate_coordinates(a, p, target_bound);
  auto target_index = build_index(target_coords);

  QMatrix columns;
  columns.reserve(source.dimension());
  for (std::size_t j = 0; j < source.dimension(); ++j)
    columns.push_back(ambient_vector(
        target_coords, target_index, differential(source.member(j), /*validate_output=*/false)));
  QVector rhs = ambient_vector(target_coords, target_index, omega);

  auto x = solve_columns(columns, rhs);
  if (!x) return std::nullopt;
  Cochain primitive = source.combine(*x);
  if (!(differential(primitive, /*validate_output=*/false) == omega))
    throw std::logic_error("primitive certificate failed to reproduce the input");
  return primitive;
}

std::vector<std::pair<Cochain, AlgebraPtr>> classify_extensions(const AlgebraPtr& a,
                                                                int coefficient_bound) {
  auto report = cohomology(a, 2, coefficient_bound);
  std::vector<std::pair<Cochain, AlgebraPtr>> out;
  for (const auto& rep : report.degrees.at(2).representatives)
    out.emplace_back(rep, central_extension(rep));
  return out;
}

}  // namespace cordal
