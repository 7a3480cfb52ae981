#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "interp.hpp"
#include "linalg.hpp"

namespace interpcat {

// ---------------------------------------------------------------------------------------------
// Flat coordinates of a morphism along hom_basis order.

template <RankContext Rank>
std::vector<typename Rank::value_type> hom_coordinates(const Morphism<Rank>& f) {
  std::vector<typename Rank::value_type> out;
  for (const auto& r : recollements(f.sizes())) {
    auto v = f.component(r);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

template <RankContext Rank>
Morphism<Rank> from_hom_coordinates(BasePtr base, Rank rank, const Object& a, const Object& b,
                                    const std::vector<typename Rank::value_type>& coords) {
  Morphism<Rank> f(std::move(base), std::move(rank), a, b);
  std::size_t at = 0;
  for (const auto& r : recollements(f.sizes())) {
    std::size_t d = product_dim(f.layout(r));
    if (at + d > coords.size()) throw ArgumentError("too few coordinates for the hom space");
    f.add(r, std::vector<typename Rank::value_type>(coords.begin() + static_cast<long>(at),
                                                    coords.begin() + static_cast<long>(at + d)));
    at += d;
  }
  if (at != coords.size()) throw ArgumentError("too many coordinates for the hom space");
  return f;
}

// ---------------------------------------------------------------------------------------------
// Additive and idempotent completion.

// Matrices of morphisms are indexed [target summand][source summand].
template <RankContext Rank>
using MorphismGrid = std::vector<std::vector<Morphism<Rank>>>;

namespace detail {

template <RankContext Rank>
MorphismGrid<Rank> grid_product(const MorphismGrid<Rank>& g, const MorphismGrid<Rank>& f, const BasePtr& base,
                                const Rank& rank, const std::vector<Object>& src, const std::vector<Object>& tgt) {
  MorphismGrid<Rank> out;
  std::size_t mid = f.size();
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    out.emplace_back();
    for (std::size_t j = 0; j < src.size(); ++j) {
      Morphism<Rank> acc(base, rank, src[j], tgt[i]);
      for (std::size_t k = 0; k < mid; ++k)
        if (!g[i][k].is_zero() && !f[k][j].is_zero()) acc += compose(g[i][k], f[k][j]);
      out.back().push_back(std::move(acc));
    }
  }
  return out;
}

template <RankContext Rank>
std::string describe_grid(const MorphismGrid<Rank>& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (!m[i][j].is_zero()) s += "entry (" + std::to_string(i) + "," + std::to_string(j) + "): " + describe(m[i][j]);
  return s;
}

template <RankContext Rank>
void check_grid_shape(const MorphismGrid<Rank>& m, const std::vector<Object>& src, const std::vector<Object>& tgt) {
  if (m.size() != tgt.size()) throw ArgumentError("matrix row count differs from the number of target summands");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != src.size()) throw ArgumentError("matrix column count differs from the number of source summands");
    for (std::size_t j = 0; j < src.size(); ++j)
      if (!(m[i][j].source() == src[j]) || !(m[i][j].target() == tgt[i]))
        throw ArgumentError("matrix entry (" + std::to_string(i) + "," + std::to_string(j) + ") has the wrong type");
  }
}

}  // namespace detail

// A pair (U_1 + ... + U_k, e) with e an idempotent endomorphism of the direct sum.
template <RankContext Rank>
class FormalObject {
 public:
  FormalObject(BasePtr base, Rank rank, std::vector<Object> summands, MorphismGrid<Rank> e)
      : base_(std::move(base)), rank_(std::move(rank)), summands_(std::move(summands)), e_(std::move(e)) {
    detail::check_grid_shape(e_, summands_, summands_);
    auto sq = detail::grid_product(e_, e_, base_, rank_, summands_, summands_);
    if (sq != e_) {
      for (std::size_t i = 0; i < sq.size(); ++i)
        for (std::size_t j = 0; j < sq.size(); ++j) sq[i][j] -= e_[i][j];
      throw ArgumentError("matrix is not idempotent; residual e o e - e:\n" + detail::describe_grid(sq));
    }
  }

  // The plain direct sum, with identity idempotent.
  static FormalObject direct_sum(BasePtr base, Rank rank, std::vector<Object> summands) {
    MorphismGrid<Rank> e;
    for (std::size_t i = 0; i < summands.size(); ++i) {
      e.emplace_back();
      for (std::size_t j = 0; j < summands.size(); ++j)
        e.back().push_back(i == j ? identity(base, rank, summands[i]) : zero_morphism(base, rank, summands[j], summands[i]));
    }
    return FormalObject(std::move(base), std::move(rank), std::move(summands), std::move(e));
  }

  const BasePtr& base_ptr() const { return base_; }
  const Rank& rank() const { return rank_; }
  const std::vector<Object>& summands() const { return summands_; }
  const MorphismGrid<Rank>& idempotent() const { return e_; }
  std::size_t size() const { return summands_.size(); }
  bool is_zero_object() const {
    for (const auto& row : e_)
      for (const auto& x : row)
        if (!x.is_zero()) return false;
    return true;
  }

  friend bool operator==(const FormalObject& a, const FormalObject& b) {
    return a.base_ == b.base_ && a.rank_ == b.rank_ && a.summands_ == b.summands_ && a.e_ == b.e_;
  }

 private:
  BasePtr base_;
  Rank rank_;
  std::vector<Object> summands_;
  MorphismGrid<Rank> e_;
};

// A morphism of formal objects, always stored compressed: f = e_target o f o e_source.
template <RankContext Rank>
class MatrixMorphism {
 public:
  MatrixMorphism(FormalObject<Rank> source, FormalObject<Rank> target, MorphismGrid<Rank> entries)
      : source_(std::move(source)), target_(std::move(target)) {
    if (source_.base_ptr() != target_.base_ptr() || !(source_.rank() == target_.rank()))
      throw ArgumentError("formal objects over different bases or ranks");
    detail::check_grid_shape(entries, source_.summands(), target_.summands());
    const auto& base = source_.base_ptr();
    const auto& rank = source_.rank();
    auto left = detail::grid_product(target_.idempotent(), entries, base, rank, source_.summands(), target_.summands());
    entries_ = detail::grid_product(left, source_.idempotent(), base, rank, source_.summands(), target_.summands());
  }

  static MatrixMorphism identity(const FormalObject<Rank>& a) { return MatrixMorphism(a, a, a.idempotent()); }

  static MatrixMorphism zero(const FormalObject<Rank>& a, const FormalObject<Rank>& b) {
    MorphismGrid<Rank> m;
    for (const auto& t : b.summands()) {
      m.emplace_back();
      for (const auto& s : a.summands()) m.back().push_back(zero_morphism(a.base_ptr(), a.rank(), s, t));
    }
    return MatrixMorphism(a, b, std::move(m));
  }

  const FormalObject<Rank>& source() const { return source_; }
  const FormalObject<Rank>& target() const { return target_; }
  const MorphismGrid<Rank>& entries() const { return entries_; }
  const Morphism<Rank>& entry(std::size_t i, std::size_t j) const { return entries_.at(i).at(j); }
  bool is_zero() const {
    for (const auto& row : entries_)
      for (const auto& x : row)
        if (!x.is_zero()) return false;
    return true;
  }

  MatrixMorphism& operator+=(const MatrixMorphism& o) {
    check_parallel(o);
    for (std::size_t i = 0; i < entries_.size(); ++i)
      for (std::size_t j = 0; j < entries_[i].size(); ++j) entries_[i][j] += o.entries_[i][j];
    return *this;
  }
  MatrixMorphism& operator-=(const MatrixMorphism& o) {
    check_parallel(o);
    for (std::size_t i = 0; i < entries_.size(); ++i)
      for (std::size_t j = 0; j < entries_[i].size(); ++j) entries_[i][j] -= o.entries_[i][j];
    return *this;
  }
  MatrixMorphism& operator*=(const typename Rank::value_type& s) {
    for (auto& row : entries_)
      for (auto& x : row) x *= s;
    return *this;
  }
  friend MatrixMorphism operator+(MatrixMorphism a, const MatrixMorphism& b) { return a += b; }
  friend MatrixMorphism operator-(MatrixMorphism a, const MatrixMorphism& b) { return a -= b; }
  friend MatrixMorphism operator*(const typename Rank::value_type& s, MatrixMorphism a) { return a *= s; }
  friend bool operator==(const MatrixMorphism& a, const MatrixMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.entries_ == b.entries_;
  }

 private:
  void check_parallel(const MatrixMorphism& o) const {
    if (!(source_ == o.source_) || !(target_ == o.target_)) throw ArgumentError("matrix morphisms are not parallel");
  }

  FormalObject<Rank> source_, target_;
  MorphismGrid<Rank> entries_;
};

template <RankContext Rank>
MatrixMorphism<Rank> compose(const MatrixMorphism<Rank>& g, const MatrixMorphism<Rank>& f) {
  if (!(f.target() == g.source())) throw ArgumentError("target of the first matrix differs from source of the second");
  return MatrixMorphism<Rank>(f.source(), g.target(),
                              detail::grid_product(g.entries(), f.entries(), f.source().base_ptr(), f.source().rank(),
                                                   f.source().summands(), g.target().summands()));
}

// Block-diagonal sum of formal objects.
template <RankContext Rank>
FormalObject<Rank> direct_sum(const std::vector<FormalObject<Rank>>& parts) {
  if (parts.empty()) throw ArgumentError("direct sum of an empty list needs a base; use FormalObject::direct_sum");
  const auto& base = parts.front().base_ptr();
  const auto& rank = parts.front().rank();
  std::vector<Object> summands;
  std::vector<std::size_t> offset;
  for (const auto& p : parts) {
    if (p.base_ptr() != base || !(p.rank() == rank)) throw ArgumentError("formal objects over different bases or ranks");
    offset.push_back(summands.size());
    summands.insert(summands.end(), p.summands().begin(), p.summands().end());
  }
  MorphismGrid<Rank> e;
  for (std::size_t i = 0; i < summands.size(); ++i) {
    e.emplace_back();
    for (std::size_t j = 0; j < summands.size(); ++j) e.back().push_back(zero_morphism(base, rank, summands[j], summands[i]));
  }
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (std::size_t i = 0; i < parts[k].size(); ++i)
      for (std::size_t j = 0; j < parts[k].size(); ++j) e[offset[k] + i][offset[k] + j] = parts[k].idempotent()[i][j];
  return FormalObject<Rank>(base, rank, std::move(summands), std::move(e));
}

// The image of an idempotent endomorphism; throws with the residual when e o e != e.
template <RankContext Rank>
FormalObject<Rank> image(const MatrixMorphism<Rank>& e) {
  if (!(e.source() == e.target())) throw ArgumentError("an idempotent must be an endomorphism");
  return FormalObject<Rank>(e.source().base_ptr(), e.source().rank(), e.source().summands(), e.entries());
}

// Inclusion of image(e) into the source of e, and the projection back.
template <RankContext Rank>
MatrixMorphism<Rank> image_inclusion(const MatrixMorphism<Rank>& e) {
  return MatrixMorphism<Rank>(image(e), e.source(), e.entries());
}

template <RankContext Rank>
MatrixMorphism<Rank> image_projection(const MatrixMorphism<Rank>& e) {
  return MatrixMorphism<Rank>(e.source(), image(e), e.entries());
}

// Checks that image(e) and image(1 - e) form a biproduct decomposition of the source of e.
template <RankContext Rank>
bool splits_as_biproduct(const MatrixMorphism<Rank>& e) {
  auto id = MatrixMorphism<Rank>::identity(e.source());
  auto f = id - e;
  auto i1 = image_inclusion(e), p1 = image_projection(e);
  auto i2 = image_inclusion(f), p2 = image_projection(f);
  return compose(p1, i1) == MatrixMorphism<Rank>::identity(image(e)) &&
         compose(p2, i2) == MatrixMorphism<Rank>::identity(image(f)) && compose(p1, i2).is_zero() &&
         compose(p2, i1).is_zero() && compose(i1, p1) + compose(i2, p2) == id;
}

// Flat coordinates of a matrix morphism, entry by entry in row-major order.
template <RankContext Rank>
std::vector<typename Rank::value_type> grid_coordinates(const MorphismGrid<Rank>& m) {
  std::vector<typename Rank::value_type> out;
  for (const auto& row : m)
    for (const auto& x : row) {
      auto v = hom_coordinates(x);
      out.insert(out.end(), v.begin(), v.end());
    }
  return out;
}

// The compressed maps e_b o E o e_a for every matrix unit E built from a hom-space basis vector.
// They span Hom(a, b); the list is not reduced to a basis.
template <RankContext Rank>
std::vector<MatrixMorphism<Rank>> hom_spanning_set(const FormalObject<Rank>& a, const FormalObject<Rank>& b) {
  const auto& base = a.base_ptr();
  const auto& rank = a.rank();
  std::vector<MatrixMorphism<Rank>> out;
  auto zero = MatrixMorphism<Rank>::zero(a, b).entries();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      for (const auto& [r, k] : hom_basis<Rank>(*base, a.summands()[j], b.summands()[i])) {
        auto m = zero;
        m[i][j] = basis_morphism(base, rank, a.summands()[j], b.summands()[i], r, k);
        out.emplace_back(a, b, std::move(m));
      }
  return out;
}

template <RankContext Rank>
std::size_t hom_dimension(const FormalObject<Rank>& a, const FormalObject<Rank>& b) {
  std::vector<std::vector<typename Rank::value_type>> rows;
  for (const auto& m : hom_spanning_set(a, b)) rows.push_back(grid_coordinates(m.entries()));
  if (rows.empty() || rows.front().empty()) return 0;
  return span_rank(rows);
}

// ---------------------------------------------------------------------------------------------
// Symmetric groups and their group algebras.

// One-line notation: i maps to p[i].
using Permutation = std::vector<std::size_t>;

inline std::vector<Permutation> permutations(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// (g h)(i) = g(h(i)).
inline Permutation multiply(const Permutation& g, const Permutation& h) {
  if (g.size() != h.size()) throw ArgumentError("permutations of different sizes");
  Permutation out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[h[i]];
  return out;
}

inline Permutation inverse(const Permutation& g) {
  Permutation out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[g[i]] = i;
  return out;
}

inline int sign(const Permutation& g) {
  int s = 1;
  std::vector<bool> seen(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = g[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) s = -s;
  }
  return s;
}

inline bool is_permutation(const Permutation& g) {
  std::vector<bool> seen(g.size(), false);
  for (auto x : g) {
    if (x >= g.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

// Element of Q[S_n]: coefficient per permutation, zero coefficients omitted.
class GroupAlgebraElement {
 public:
  explicit GroupAlgebraElement(std::size_t n) : n_(n) {}

  static GroupAlgebraElement basis(const Permutation& g) {
    GroupAlgebraElement e(g.size());
    e.add(g, Rational(1));
    return e;
  }

  std::size_t degree() const { return n_; }
  const std::map<Permutation, Rational>& terms() const { return terms_; }
  Rational coefficient(const Permutation& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const Permutation& g, const Rational& c) {
    if (g.size() != n_) throw ArgumentError("permutation has the wrong size");
    if (sgn(c) == 0) return;
    auto [it, fresh] = terms_.emplace(g, c);
    if (!fresh) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  friend GroupAlgebraElement operator*(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    if (a.n_ != b.n_) throw ArgumentError("group algebra elements of different degrees");
    GroupAlgebraElement out(a.n_);
    for (const auto& [g, x] : a.terms_)
      for (const auto& [h, y] : b.terms_) out.add(multiply(g, h), x * y);
    return out;
  }
  friend GroupAlgebraElement operator+(GroupAlgebraElement a, const GroupAlgebraElement& b) {
    for (const auto& [g, y] : b.terms_) a.add(g, y);
    return a;
  }
  friend GroupAlgebraElement operator-(GroupAlgebraElement a, const GroupAlgebraElement& b) {
    for (const auto& [g, y] : b.terms_) a.add(g, -y);
    return a;
  }
  friend GroupAlgebraElement operator*(const Rational& s, GroupAlgebraElement a) {
    if (sgn(s) == 0) return GroupAlgebraElement(a.n_);
    for (auto& [g, x] : a.terms_) x *= s;
    return a;
  }
  friend bool operator==(const GroupAlgebraElement&, const GroupAlgebraElement&) = default;

  // Coordinates along permutations(n).
  std::vector<Rational> coordinates() const {
    std::vector<Rational> out;
    for (const auto& g : permutations(n_)) out.push_back(coefficient(g));
    return out;
  }

 private:
  std::size_t n_;
  std::map<Permutation, Rational> terms_;
};

namespace detail {

// Idempotent polynomial in c projecting onto the eigenvalue lambda of left multiplication by c;
// needs a squarefree minimal polynomial with lambda as a root.
inline GroupAlgebraElement spectral_idempotent(const GroupAlgebraElement& c) {
  std::size_t n = c.degree();
  auto unit = GroupAlgebraElement::basis(permutations(n).front());
  // Krylov sequence of powers of c.
  std::vector<GroupAlgebraElement> powers{unit};
  QMatrix span;
  std::vector<Rational> dep;
  while (true) {
    auto v = powers.back().coordinates();
    if (powers.size() > 1) {
      QMatrix m(v.size(), powers.size() - 1);
      for (std::size_t k = 0; k + 1 < powers.size(); ++k) {
        auto w = powers[k].coordinates();
        for (std::size_t i = 0; i < w.size(); ++i) m(i, k) = w[i];
      }
      if (auto x = solve(m, v)) {
        dep = *x;
        break;
      }
    }
    powers.push_back(powers.back() * c);
  }
  std::vector<Rational> coeffs;
  for (const auto& x : dep) coeffs.push_back(-x);
  coeffs.emplace_back(1);
  auto minpoly = RankPolynomial::from_coefficients(coeffs);
  if (RankPolynomial::gcd(minpoly, minpoly.derivative()).degree() > 0)
    throw ValidationError("element has a non-squarefree minimal polynomial");
  Rational lambda;
  bool found = false;
  for (const auto& r : rational_roots(minpoly))
    if (sgn(r.value) != 0) {
      lambda = r.value;
      found = true;
      break;
    }
  if (!found) throw ValidationError("element has no nonzero rational eigenvalue");
  auto cof = RankPolynomial::divide_exact(minpoly, RankPolynomial::from_coefficients({-lambda, Rational(1)}));
  cof = cof * (Rational(1) / cof(lambda));
  GroupAlgebraElement e(n);
  for (std::size_t k = 0; k < cof.coefficients().size(); ++k) e = e + cof.coefficient(k) * powers[k];
  return e;
}

}  // namespace detail

// Normalized Young symmetrizer (row symmetrizer times column antisymmetrizer) for the row-reading
// tableau of shape lambda, n <= 5.
inline GroupAlgebraElement young_symmetrizer(const std::vector<std::size_t>& lambda) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (lambda[k] == 0) throw ArgumentError("partition parts must be positive");
    if (k > 0 && lambda[k] > lambda[k - 1]) throw ArgumentError("partition parts must be weakly decreasing");
    n += lambda[k];
  }
  if (n > 5) throw ResourceError("young symmetrizers are limited to n <= 5");
  std::vector<std::size_t> row_of(n), col_of(n);
  for (std::size_t r = 0, x = 0; r < lambda.size(); ++r)
    for (std::size_t c = 0; c < lambda[r]; ++c, ++x) {
      row_of[x] = r;
      col_of[x] = c;
    }
  GroupAlgebraElement a(n), b(n);
  for (const auto& g : permutations(n)) {
    bool rows = true, cols = true;
    for (std::size_t x = 0; x < n; ++x) {
      rows = rows && row_of[g[x]] == row_of[x];
      cols = cols && col_of[g[x]] == col_of[x];
    }
    if (rows) a.add(g, Rational(1));
    if (cols) b.add(g, Rational(sign(g)));
  }
  auto c = a * b;
  auto c2 = c * c;
  // c o c is a multiple k c; e = c / k.
  const auto& [g0, x0] = *c.terms().begin();
  Rational k = c2.coefficient(g0) / x0;
  if (sgn(k) != 0 && c2 == k * c) return (Rational(1) / k) * c;
  return detail::spectral_idempotent(c);
}

// The permutation action on <U, ..., U>: source element i is joined to target element g(i)
// through the identity of U.
template <RankContext Rank>
Morphism<Rank> sym_action(BasePtr base, Rank rank, const Permutation& g, const Object& a) {
  if (a.factor_count() != 1) throw ArgumentError("permutation action needs a single bracket");
  auto entries = a.flat_entries();
  if (!is_permutation(g) || g.size() != entries.size()) throw ArgumentError("permutation does not match the bracket length");
  for (const auto& w : entries)
    if (w != entries.front()) throw ArgumentError("permutation action needs all bracket entries equal");
  std::size_t m = entries.size();
  auto gi = inverse(g);
  std::vector<std::size_t> raw(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    raw[i] = i;
    raw[m + i] = gi[i];
  }
  Morphism<Rank> f(base, rank, a, a);
  std::vector<std::vector<Rational>> parts(m, base->identity(entries.empty() ? base->unit() : entries.front()));
  f.add(Recollement::from_labels(f.sizes(), raw), lift_vector<typename Rank::value_type>(detail::kron_vectors(parts)));
  return f;
}

template <RankContext Rank>
Morphism<Rank> sym_action(BasePtr base, Rank rank, const GroupAlgebraElement& x, const Object& a) {
  Morphism<Rank> out(base, rank, a, a);
  for (const auto& [g, c] : x.terms()) out += Rank::lift(c) * sym_action(base, rank, g, a);
  return out;
}

}  // namespace interpcat
