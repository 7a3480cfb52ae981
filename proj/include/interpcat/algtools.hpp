#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "karoubi.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace interpcat {

// Finite-dimensional associative algebra by structure constants b_i b_j = sum_k c_ij^k b_k.
template <class V>
struct AlgebraTable {
  std::size_t dim = 0;
  std::vector<std::vector<std::pair<std::uint32_t, V>>> products;  // index i * dim + j, sparse
  std::vector<V> unit;
  std::vector<std::string> labels;

  const std::vector<std::pair<std::uint32_t, V>>& product(std::size_t i, std::size_t j) const {
    return products[i * dim + j];
  }

  std::vector<V> basis_vector(std::size_t i) const {
    std::vector<V> v(dim);
    v.at(i) = V(1);
    return v;
  }

  std::vector<V> multiply(const std::vector<V>& a, const std::vector<V>& b) const {
    std::vector<V> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (is_zero(b[j])) continue;
        V ab = a[i] * b[j];
        for (const auto& [k, c] : product(i, j)) out[k] += ab * c;
      }
    }
    return out;
  }

  // Matrix of left multiplication by a: column j holds a * b_j.
  std::vector<std::vector<V>> left_matrix(const std::vector<V>& a) const {
    std::vector<std::vector<V>> m(dim, std::vector<V>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t j = 0; j < dim; ++j)
        for (const auto& [k, c] : product(i, j)) m[k][j] += a[i] * c;
    }
    return m;
  }

  std::vector<std::vector<V>> right_matrix(const std::vector<V>& a) const {
    std::vector<std::vector<V>> m(dim, std::vector<V>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t j = 0; j < dim; ++j)
        for (const auto& [k, c] : product(j, i)) m[k][j] += a[i] * c;
    }
    return m;
  }

  // Unit laws on every basis vector; associativity on every triple up to dimension 24, otherwise
  // on a seeded sample of triples.
  void validate(std::size_t samples = 4000) const {
    if (products.size() != dim * dim || unit.size() != dim) throw ValidationError("algebra table has the wrong shape");
    for (std::size_t i = 0; i < dim; ++i) {
      auto b = basis_vector(i);
      if (multiply(unit, b) != b || multiply(b, unit) != b)
        throw ValidationError("unit law fails on basis element " + std::to_string(i));
    }
    auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
      auto bi = basis_vector(i), bj = basis_vector(j), bk = basis_vector(k);
      if (multiply(multiply(bi, bj), bk) != multiply(bi, multiply(bj, bk)))
        throw ValidationError("associativity fails on basis triple (" + std::to_string(i) + "," + std::to_string(j) +
                              "," + std::to_string(k) + ")");
    };
    if (dim <= 24) {
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          for (std::size_t k = 0; k < dim; ++k) check(i, j, k);
      return;
    }
    RandomSource rng(dim);
    auto pick = [&] { return static_cast<std::size_t>(rng.uniform(0, static_cast<long>(dim) - 1)); };
    for (std::size_t s = 0; s < samples; ++s) check(pick(), pick(), pick());
  }
};

template <class V>
AlgebraTable<V> table_from_products(std::size_t dim, const std::vector<std::vector<V>>& dense_products,
                                    std::vector<V> unit, std::vector<std::string> labels = {}) {
  AlgebraTable<V> a;
  a.dim = dim;
  a.unit = std::move(unit);
  a.labels = std::move(labels);
  a.products.resize(dim * dim);
  for (std::size_t p = 0; p < dim * dim; ++p)
    for (std::size_t k = 0; k < dim; ++k)
      if (!is_zero(dense_products.at(p).at(k))) a.products[p].emplace_back(static_cast<std::uint32_t>(k), dense_products[p][k]);
  return a;
}

enum class EndBasis { Bracket, DoubleBracket };

// End(A) in the bracket basis or (single brackets only) the double-bracket basis.
template <RankContext Rank>
AlgebraTable<typename Rank::value_type> end_algebra(const BasePtr& base, const Rank& rank, const Object& a,
                                                    EndBasis basis = EndBasis::Bracket) {
  using V = typename Rank::value_type;
  auto hb = hom_basis<Rank>(*base, a, a);
  std::size_t n = hb.size();
  auto to_basis = [&](const Morphism<Rank>& f) -> Morphism<Rank> {
    return basis == EndBasis::Bracket ? f : from_double_bracket(DoubleBracket<Rank>(f));
  };
  auto coords = [&](const Morphism<Rank>& f) -> std::vector<V> {
    return hom_coordinates(basis == EndBasis::Bracket ? f : to_double_bracket(f).coordinates());
  };
  std::vector<Morphism<Rank>> elems;
  std::vector<std::string> labels;
  for (const auto& [r, k] : hb) {
    elems.push_back(to_basis(basis_morphism(base, rank, a, a, r, k)));
    labels.push_back(r.to_string() + (k ? "#" + std::to_string(k) : ""));
  }
  std::vector<std::vector<V>> dense(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = coords(compose(elems[i], elems[j]));
  return table_from_products<V>(n, dense, coords(identity(base, rank, a)), std::move(labels));
}

// Endomorphism algebra of a formal object, on a basis extracted from the compressed spanning set.
inline AlgebraTable<Rational> end_algebra(const FormalObject<SpecializedRank>& x) {
  std::vector<MatrixMorphism<SpecializedRank>> basis;
  std::vector<std::vector<Rational>> rows;
  std::optional<Subspace> span;
  for (auto& m : hom_spanning_set(x, x)) {
    auto v = grid_coordinates(m.entries());
    if (!span) span.emplace(v.size());
    if (span->insert(v)) {
      rows.push_back(std::move(v));
      basis.push_back(std::move(m));
    }
  }
  std::size_t n = basis.size();
  QMatrix cols(rows.empty() ? 0 : rows.front().size(), n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < rows[k].size(); ++i) cols(i, k) = rows[k][i];
  auto solve_coords = [&](const MatrixMorphism<SpecializedRank>& f) {
    auto sol = solve(cols, grid_coordinates(f.entries()));
    if (!sol) throw std::logic_error("compressed morphism outside the computed basis");
    return *sol;
  };
  std::vector<std::vector<Rational>> dense(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = solve_coords(compose(basis[i], basis[j]));
  std::vector<Rational> unit = n ? solve_coords(MatrixMorphism<SpecializedRank>::identity(x)) : std::vector<Rational>{};
  return table_from_products<Rational>(n, dense, std::move(unit));
}

// Direct product of two algebras.
template <class V>
AlgebraTable<V> product_algebra(const AlgebraTable<V>& a, const AlgebraTable<V>& b) {
  std::size_t n = a.dim + b.dim;
  AlgebraTable<V> out;
  out.dim = n;
  out.products.resize(n * n);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) out.products[i * n + j] = a.product(i, j);
  for (std::size_t i = 0; i < b.dim; ++i)
    for (std::size_t j = 0; j < b.dim; ++j)
      for (const auto& [k, c] : b.product(i, j))
        out.products[(a.dim + i) * n + a.dim + j].emplace_back(static_cast<std::uint32_t>(a.dim + k), c);
  out.unit = a.unit;
  out.unit.insert(out.unit.end(), b.unit.begin(), b.unit.end());
  return out;
}

inline AlgebraTable<Rational> symmetric_group_algebra(std::size_t m) {
  auto perms = permutations(m);
  std::map<Permutation, std::size_t> index;
  for (std::size_t k = 0; k < perms.size(); ++k) index[perms[k]] = k;
  std::size_t n = perms.size();
  AlgebraTable<Rational> a;
  a.dim = n;
  a.products.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a.products[i * n + j].emplace_back(static_cast<std::uint32_t>(index[multiply(perms[i], perms[j])]), Rational(1));
  a.unit = a.basis_vector(0);
  return a;
}

// ---------------------------------------------------------------------------------------------
// Trace form, Gram determinant, radical.

// G_ij = tr(L_{b_i} L_{b_j}) = sum_k c_ij^k tr(L_{b_k}).
template <class V>
std::vector<std::vector<V>> trace_form(const AlgebraTable<V>& a) {
  std::vector<V> tr(a.dim);
  for (std::size_t k = 0; k < a.dim; ++k)
    for (std::size_t j = 0; j < a.dim; ++j)
      for (const auto& [l, c] : a.product(k, j))
        if (l == j) tr[k] += c;
  std::vector<std::vector<V>> g(a.dim, std::vector<V>(a.dim));
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j)
      for (const auto& [k, c] : a.product(i, j)) g[i][j] += c * tr[k];
  return g;
}

inline RankPolynomial gram_det(const AlgebraTable<RankPolynomial>& a) { return determinant(trace_form(a)); }

inline Rational gram_det(const AlgebraTable<Rational>& a) {
  auto g = trace_form(a);
  QMatrix m(a.dim, a.dim);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) m(i, j) = g[i][j];
  return determinant(std::move(m));
}

// Specializes a symbolic table at t = t0.
inline AlgebraTable<Rational> specialize(const AlgebraTable<RankPolynomial>& a, const Rational& t0) {
  AlgebraTable<Rational> out;
  out.dim = a.dim;
  out.labels = a.labels;
  out.products.resize(a.products.size());
  for (std::size_t p = 0; p < a.products.size(); ++p)
    for (const auto& [k, c] : a.products[p]) {
      Rational v = c(t0);
      if (sgn(v) != 0) out.products[p].emplace_back(k, v);
    }
  for (const auto& c : a.unit) out.unit.push_back(c(t0));
  return out;
}

namespace detail {

inline QMatrix to_qmatrix(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

inline Subspace span_of(std::size_t n, const std::vector<std::vector<Rational>>& vs) {
  Subspace s(n);
  for (const auto& v : vs) s.insert(v);
  return s;
}

}  // namespace detail

// Where a subspace fails to be a two-sided ideal: b_i v (left) or v b_i (right) leaves it,
// v the listed generator.
struct IdealWitness {
  bool left;
  std::size_t basis_index, generator_index;
  std::string describe() const {
    std::string b = "b" + std::to_string(basis_index), v = "v" + std::to_string(generator_index);
    return (left ? b + " * " + v : v + " * " + b) + " leaves the subspace";
  }
};

inline std::optional<IdealWitness> two_sided_witness(const AlgebraTable<Rational>& a,
                                                     const std::vector<std::vector<Rational>>& ideal) {
  auto span = detail::span_of(a.dim, ideal);
  for (std::size_t g = 0; g < ideal.size(); ++g)
    for (std::size_t i = 0; i < a.dim; ++i) {
      auto b = a.basis_vector(i);
      if (!span.contains(a.multiply(b, ideal[g]))) return IdealWitness{true, i, g};
      if (!span.contains(a.multiply(ideal[g], b))) return IdealWitness{false, i, g};
    }
  return std::nullopt;
}

// True when some power S^k of the subspace vanishes (checked up to k = dim + 1).
inline bool is_nilpotent_subspace(const AlgebraTable<Rational>& a, const std::vector<std::vector<Rational>>& s) {
  std::vector<std::vector<Rational>> power = detail::span_of(a.dim, s).rows();
  for (std::size_t depth = 1; depth <= a.dim + 1; ++depth) {
    if (power.empty()) return true;
    Subspace next(a.dim);
    for (const auto& x : power)
      for (const auto& y : s) next.insert(a.multiply(x, y));
    power = next.rows();
  }
  return power.empty();
}

struct Radical {
  std::vector<std::vector<Rational>> basis;
  bool two_sided = false;
  bool nilpotent = false;
};

// Nullspace of the trace form; in characteristic zero this is the Jacobson radical.
inline Radical radical(const AlgebraTable<Rational>& a, bool verify = true) {
  Radical r;
  r.basis = nullspace(detail::to_qmatrix(trace_form(a), a.dim)).basis;
  if (verify) {
    r.two_sided = !two_sided_witness(a, r.basis).has_value();
    r.nilpotent = is_nilpotent_subspace(a, r.basis);
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Quotients.

struct QuotientAlgebra {
  AlgebraTable<Rational> table;
  std::vector<std::size_t> kept;  // basis indices of A that survive
  Subspace ideal{0};

  // Coordinates of the class of v.
  std::vector<Rational> reduce(const std::vector<Rational>& v) const {
    auto r = ideal.reduce(v);
    std::vector<Rational> out;
    for (auto k : kept) out.push_back(r[k]);
    return out;
  }
};

inline QuotientAlgebra quotient_by_ideal(const AlgebraTable<Rational>& a, const std::vector<std::vector<Rational>>& ideal) {
  if (auto w = two_sided_witness(a, ideal)) throw ArgumentError("subspace is not a two-sided ideal: " + w->describe());
  QuotientAlgebra q;
  q.ideal = detail::span_of(a.dim, ideal);
  std::vector<bool> pivot(a.dim, false);
  for (auto p : q.ideal.pivots()) pivot[p] = true;
  for (std::size_t k = 0; k < a.dim; ++k)
    if (!pivot[k]) q.kept.push_back(k);
  std::size_t n = q.kept.size();
  std::vector<std::vector<Rational>> dense(n * n);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    if (!a.labels.empty()) labels.push_back(a.labels[q.kept[i]]);
    for (std::size_t j = 0; j < n; ++j)
      dense[i * n + j] = q.reduce(a.multiply(a.basis_vector(q.kept[i]), a.basis_vector(q.kept[j])));
  }
  q.table = table_from_products<Rational>(n, dense, q.reduce(a.unit), std::move(labels));
  return q;
}

struct GroupAlgebraCheck {
  bool dimension_matches = false;
  bool images_independent = false;
  bool multiplicative = false;
  bool unit_preserved = false;
  bool ok() const { return dimension_matches && images_independent && multiplicative && unit_preserved; }
};

// Compares Q against Q[S_m], given the A-coordinates of the image of each permutation in
// permutations(m) order.
inline GroupAlgebraCheck group_algebra_iso_check(const QuotientAlgebra& q, std::size_t m,
                                                 const std::vector<std::vector<Rational>>& perm_images) {
  GroupAlgebraCheck c;
  auto perms = permutations(m);
  if (perm_images.size() != perms.size()) throw ArgumentError("need one image per permutation");
  c.dimension_matches = q.table.dim == perms.size();
  std::vector<std::vector<Rational>> red;
  for (const auto& v : perm_images) red.push_back(q.reduce(v));
  c.images_independent = span_rank(red) == perms.size();
  std::map<Permutation, std::size_t> index;
  for (std::size_t k = 0; k < perms.size(); ++k) index[perms[k]] = k;
  c.multiplicative = true;
  for (std::size_t i = 0; i < perms.size() && c.multiplicative; ++i)
    for (std::size_t j = 0; j < perms.size(); ++j)
      if (q.table.multiply(red[i], red[j]) != red[index[multiply(perms[i], perms[j])]]) {
        c.multiplicative = false;
        break;
      }
  c.unit_preserved = red.front() == q.table.unit;
  return c;
}

struct SymmetricQuotient {
  AlgebraTable<Rational> algebra;
  std::vector<std::vector<Rational>> ideal;
  QuotientAlgebra quotient;
  GroupAlgebraCheck check;
};

// End(<U,...,U>) modulo the span of double-bracket elements with more than m blocks.
inline SymmetricQuotient symmetric_quotient(const BasePtr& base, const SpecializedRank& rank, const Word& u,
                                            std::size_t m) {
  SymmetricQuotient s;
  Object a = Object::bracket(std::vector<Word>(m, u));
  s.algebra = end_algebra(base, rank, a);
  for (const auto& f : filtration_span(base, rank, a, a, m + 1)) s.ideal.push_back(hom_coordinates(f));
  s.quotient = quotient_by_ideal(s.algebra, s.ideal);
  std::vector<std::vector<Rational>> images;
  for (const auto& g : permutations(m)) images.push_back(hom_coordinates(sym_action(base, rank, g, a)));
  s.check = group_algebra_iso_check(s.quotient, m, images);
  return s;
}

// ---------------------------------------------------------------------------------------------
// Wedderburn blocks through the center.

struct SimpleBlock {
  bool split = true;        // center of the block is Q and the block dimension is a square
  std::size_t degree = 1;   // matrix size d when split
  std::size_t dimension;    // dimension of the block as an algebra
  std::size_t center_dim;   // dimension of the block's center
  RankPolynomial factor;    // factor of the minimal polynomial of the generic central element
};

struct SimplesReport {
  std::vector<SimpleBlock> blocks;
  std::size_t center_dim = 0;
  bool all_split() const {
    for (const auto& b : blocks)
      if (!b.split) return false;
    return true;
  }
  std::size_t sum_of_squares() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.degree * b.degree;
    return s;
  }
};

namespace detail {

// Commutant of a set of elements: solutions x of g x = x g.
inline std::vector<std::vector<Rational>> commutant(const AlgebraTable<Rational>& a,
                                                    const std::vector<std::vector<Rational>>& gens) {
  QMatrix m(gens.size() * a.dim, a.dim);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    auto l = a.left_matrix(gens[g]), r = a.right_matrix(gens[g]);
    for (std::size_t i = 0; i < a.dim; ++i)
      for (std::size_t j = 0; j < a.dim; ++j) m(g * a.dim + i, j) = l[i][j] - r[i][j];
  }
  return nullspace(std::move(m)).basis;
}

inline std::vector<std::vector<Rational>> center(const AlgebraTable<Rational>& a, RandomSource& rng) {
  auto random_element = [&] {
    std::vector<Rational> v(a.dim);
    for (auto& x : v) x = Rational(rng.uniform(-3, 3));
    return v;
  };
  std::vector<std::vector<Rational>> gens{random_element(), random_element()};
  while (true) {
    auto z = commutant(a, gens);
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < a.dim && !bad; ++i) {
      auto b = a.basis_vector(i);
      for (const auto& v : z)
        if (a.multiply(b, v) != a.multiply(v, b)) {
          bad = i;
          break;
        }
    }
    if (!bad) return z;
    gens.push_back(a.basis_vector(*bad));
  }
}

inline RankPolynomial minimal_polynomial(const AlgebraTable<Rational>& a, const std::vector<Rational>& z,
                                         std::vector<std::vector<Rational>>& powers) {
  powers = {a.unit};
  while (true) {
    auto next = a.multiply(powers.back(), z);
    if (auto x = solve(to_qmatrix(powers, a.dim).transpose(), next)) {
      std::vector<Rational> c;
      for (const auto& y : *x) c.push_back(-y);
      c.emplace_back(1);
      return RankPolynomial::from_coefficients(std::move(c));
    }
    powers.push_back(std::move(next));
  }
}

inline std::vector<Rational> evaluate_at(const RankPolynomial& p, const std::vector<std::vector<Rational>>& powers,
                                         std::size_t dim) {
  std::vector<Rational> out(dim);
  for (std::size_t k = 0; k < p.coefficients().size(); ++k)
    for (std::size_t i = 0; i < dim; ++i) out[i] += p.coefficient(k) * powers.at(k)[i];
  return out;
}

inline std::size_t rank_of_products(const AlgebraTable<Rational>& a, const std::vector<std::vector<Rational>>& xs,
                                    const std::vector<Rational>& e) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& x : xs) rows.push_back(a.multiply(x, e));
  return rows.empty() ? 0 : span_rank(rows);
}

}  // namespace detail

// Wedderburn decomposition of a semisimple algebra over Q: the minimal polynomial of a random
// central element is split into linear factors (one split block each) and a remainder whose
// blocks are reported as non-split.
inline SimplesReport count_simples(const AlgebraTable<Rational>& a, std::uint64_t seed = 1) {
  if (!radical(a, false).basis.empty()) throw ArgumentError("count_simples needs a semisimple algebra");
  SimplesReport rep;
  if (a.dim == 0) return rep;
  RandomSource rng(seed);
  auto z_basis = detail::center(a, rng);
  rep.center_dim = z_basis.size();
  std::vector<std::vector<Rational>> all_basis;
  for (std::size_t i = 0; i < a.dim; ++i) all_basis.push_back(a.basis_vector(i));
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Rational> z(a.dim);
    for (const auto& v : z_basis) {
      Rational c(rng.uniform(-(4 + attempt * 4), 4 + attempt * 4));
      for (std::size_t i = 0; i < a.dim; ++i) z[i] += c * v[i];
    }
    std::vector<std::vector<Rational>> powers;
    auto minpoly = detail::minimal_polynomial(a, z, powers);
    if (minpoly.degree() != static_cast<long>(z_basis.size())) continue;  // z does not separate the blocks
    std::vector<SimpleBlock> blocks;
    RankPolynomial rest = minpoly;
    for (const auto& root : rational_roots(minpoly)) {
      RankPolynomial lin = RankPolynomial::from_coefficients({-root.value, Rational(1)});
      rest = RankPolynomial::divide_exact(rest, lin);
      auto cof = RankPolynomial::divide_exact(minpoly, lin);
      auto e = detail::evaluate_at(cof * (Rational(1) / cof(root.value)), powers, a.dim);
      SimpleBlock b;
      b.factor = lin;
      b.dimension = detail::rank_of_products(a, all_basis, e);
      b.center_dim = detail::rank_of_products(a, z_basis, e);
      auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(b.dimension))));
      b.split = b.center_dim == 1 && d * d == b.dimension;
      b.degree = b.split ? d : 0;
      blocks.push_back(std::move(b));
    }
    if (rest.degree() > 0) {
      auto cof = RankPolynomial::divide_exact(minpoly, rest);
      auto [g, s, u] = RankPolynomial::extended_gcd(cof, rest);
      // s * cof = 1 mod rest and 0 mod cof, so it evaluates to the idempotent of the remainder.
      auto e = detail::evaluate_at(RankPolynomial::divmod(s * cof, minpoly).second, powers, a.dim);
      SimpleBlock b;
      b.split = false;
      b.degree = 0;
      b.factor = rest;
      b.dimension = detail::rank_of_products(a, all_basis, e);
      b.center_dim = detail::rank_of_products(a, z_basis, e);
      blocks.push_back(std::move(b));
    }
    rep.blocks = std::move(blocks);
    return rep;
  }
  throw std::logic_error("no separating central element found");
}

enum class Locality { Local, NotLocal, Inconclusive };

struct LocalityReport {
  Locality verdict;
  std::size_t residue_dim;
  std::string describe() const {
    switch (verdict) {
      case Locality::Local:
        return "local (split)";
      case Locality::NotLocal:
        return "not local";
      default:
        return "inconclusive (residue dim " + std::to_string(residue_dim) + ")";
    }
  }
};

// Local iff A / rad(A) is a division algebra; decided when the residue is Q or visibly not a
// division algebra (several blocks or a matrix block).
inline LocalityReport is_local(const AlgebraTable<Rational>& a) {
  auto rad = radical(a, false);
  std::size_t residue = a.dim - rad.basis.size();
  if (residue == 1) return {Locality::Local, residue};
  if (residue == 0) return {Locality::NotLocal, residue};
  auto q = quotient_by_ideal(a, rad.basis);
  auto s = count_simples(q.table);
  if (s.blocks.size() > 1) return {Locality::NotLocal, residue};
  if (s.blocks.front().split) return {Locality::NotLocal, residue};
  return {Locality::Inconclusive, residue};
}

}  // namespace interpcat
