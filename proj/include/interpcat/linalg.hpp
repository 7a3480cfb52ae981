#pragma once

#include <cstddef>
#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace interpcat {

// Dense matrix over Q, row major.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<Rational>& data() const { return data_; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (sgn(x) != 0) return false;
    return true;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw ArgumentError("matrix shape mismatch in product");
    QMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (sgn(x) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (sgn(b(k, j)) != 0) c(i, j) += x * b(k, j);
      }
    return c;
  }

  friend QMatrix operator+(QMatrix a, const QMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ArgumentError("matrix shape mismatch in sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend QMatrix operator-(QMatrix a, const QMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ArgumentError("matrix shape mismatch in difference");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend QMatrix operator*(const Rational& s, QMatrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Kronecker product: (a kron b)((i,k),(j,l)) = a(i,j) b(k,l).
  static QMatrix kron(const QMatrix& a, const QMatrix& b) {
    QMatrix c(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) {
        const Rational& x = a(i, j);
        if (sgn(x) == 0) continue;
        for (std::size_t k = 0; k < b.rows_; ++k)
          for (std::size_t l = 0; l < b.cols_; ++l)
            if (sgn(b(k, l)) != 0) c(i * b.rows_ + k, j * b.cols_ + l) = x * b(k, l);
      }
    return c;
  }

  void append_row(const std::vector<Rational>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw ArgumentError("row length mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && sgn(m(sel, col)) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    Rational inv = Rational(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (sgn(m(row, j)) != 0) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(QMatrix m) { return rref(m).size(); }

// Kernel basis in echelon order: one vector per free column, with a 1 in that column.
struct Nullspace {
  std::vector<std::vector<Rational>> basis;
  std::vector<std::size_t> free_columns;
};

inline Nullspace nullspace(QMatrix m) {
  auto pivots = rref(m);
  Nullspace ns;
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
    ns.basis.push_back(std::move(v));
    ns.free_columns.push_back(f);
  }
  return ns;
}

// Solves m x = b; returns nullopt when inconsistent.
inline std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b) {
  if (b.size() != m.rows()) throw ArgumentError("right-hand side length mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  std::vector<Rational> x(m.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols());
  return x;
}

inline Rational determinant(QMatrix m) {
  if (m.rows() != m.cols()) throw ArgumentError("determinant of a non-square matrix");
  Rational det = 1;
  std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

// Rank of a list of vectors.
inline std::size_t span_rank(const std::vector<std::vector<Rational>>& vectors) {
  if (vectors.empty()) return 0;
  QMatrix m(vectors.size(), vectors.front().size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < vectors[i].size(); ++j) m(i, j) = vectors[i][j];
  return rank(std::move(m));
}

// Subspace of Q^n kept as rows in reduced echelon form, grown one vector at a time.
class Subspace {
 public:
  explicit Subspace(std::size_t n) : n_(n) {}

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // v minus its component along the pivots; zero exactly when v lies in the subspace.
  std::vector<Rational> reduce(std::vector<Rational> v) const {
    if (v.size() != n_) throw ArgumentError("vector length differs from the ambient dimension");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Rational c = v[pivots_[r]];
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (sgn(rows_[r][j]) != 0) v[j] -= c * rows_[r][j];
    }
    return v;
  }

  bool contains(const std::vector<Rational>& v) const {
    for (const auto& x : reduce(v))
      if (sgn(x) != 0) return false;
    return true;
  }

  // Adds v; returns false when it was already in the span.
  bool insert(const std::vector<Rational>& v) {
    auto r = reduce(v);
    std::size_t p = 0;
    while (p < n_ && sgn(r[p]) == 0) ++p;
    if (p == n_) return false;
    Rational inv = Rational(1) / r[p];
    for (auto& x : r) x *= inv;
    for (auto& row : rows_) {
      Rational c = row[p];
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (sgn(r[j]) != 0) row[j] -= c * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> pivots_;
};

// ---------------------------------------------------------------------------------------------
// Matrices over Q[t].

using PolyMatrix = std::vector<std::vector<RankPolynomial>>;

// Fraction-free (Bareiss) determinant; every division is exact.
inline RankPolynomial determinant(PolyMatrix m) {
  std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw ArgumentError("determinant of a non-square matrix");
  if (n == 0) return RankPolynomial(1);
  RankPolynomial prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return {};
      std::swap(m[k], m[p]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = RankPolynomial::divide_exact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      m[i][k] = {};
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Rank over the fraction field Q(t). Rows are cleared by cross multiplication and then divided
// by the gcd of their entries to keep degrees down.
inline std::size_t rank(PolyMatrix m) {
  std::size_t rows = m.size(), cols = rows ? m.front().size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      RankPolynomial a = m[r][c], b = m[i][c], g;
      for (std::size_t j = c; j < cols; ++j) {
        m[i][j] = a * m[i][j] - b * m[r][j];
        g = RankPolynomial::gcd(g, m[i][j]);
      }
      if (!g.is_zero() && g.degree() > 0)
        for (std::size_t j = c; j < cols; ++j) m[i][j] = RankPolynomial::divide_exact(m[i][j], g);
    }
    ++r;
  }
  return r;
}

inline std::size_t span_rank(const std::vector<std::vector<RankPolynomial>>& vectors) { return rank(vectors); }

// ---------------------------------------------------------------------------------------------
// Rational roots of a polynomial over Q, found exactly: Sturm isolation of the real roots, then
// the simplest rational in a small enough isolating interval is the only rational candidate.

namespace detail {

inline Rational simplest_rational_between(const Rational& a, const Rational& b) {
  if (sgn(a) <= 0 && sgn(b) >= 0) return Rational(0);
  if (sgn(b) < 0) return -simplest_rational_between(-b, -a);
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  if (Rational(fl) == a) return a;
  Rational up(fl + 1);
  if (up <= b) return up;
  Rational frac = simplest_rational_between(Rational(1) / (b - Rational(fl)), Rational(1) / (a - Rational(fl)));
  Rational out = Rational(fl) + Rational(1) / frac;
  out.canonicalize();
  return out;
}

inline int sign_at(const RankPolynomial& p, const Rational& x) { return sgn(p(x)); }

inline std::size_t sign_changes(const std::vector<RankPolynomial>& chain, const Rational& x) {
  std::size_t n = 0;
  int last = 0;
  for (const auto& p : chain) {
    int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++n;
    last = s;
  }
  return n;
}

}  // namespace detail

struct RationalRoot {
  Rational value;
  std::size_t multiplicity;
};

inline std::vector<RationalRoot> rational_roots(const RankPolynomial& p) {
  if (p.is_zero()) throw ArgumentError("the zero polynomial has every number as a root");
  std::vector<RationalRoot> out;
  if (p.degree() <= 0) return out;
  RankPolynomial sq = RankPolynomial::divide_exact(p, RankPolynomial::gcd(p, p.derivative())).monic();
  // Denominator bound: the leading coefficient of the primitive integer multiple of sq.
  Integer den_lcm = 1;
  for (const auto& c : sq.coefficients()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  Integer content = 0;
  for (const auto& c : sq.coefficients()) {
    Integer v = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
  }
  Integer lead = den_lcm / content;
  Rational width_bound = Rational(1) / Rational(lead * lead);
  std::vector<RankPolynomial> chain{sq, sq.derivative()};
  while (chain.back().degree() > 0) {
    auto r = RankPolynomial::divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  Rational bound = 1;
  for (const auto& c : sq.coefficients()) bound = std::max(bound, Rational(Rational(abs(c)) + 1));
  auto count = [&](const Rational& a, const Rational& b) {
    return detail::sign_changes(chain, a) - detail::sign_changes(chain, b);
  };
  std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}}, isolated;
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    std::size_t n = count(a, b);
    if (n == 0) continue;
    if (n == 1) {
      isolated.emplace_back(a, b);
      continue;
    }
    Rational m = (a + b) / 2;
    stack.emplace_back(a, m);
    stack.emplace_back(m, b);
  }
  for (auto [a, b] : isolated) {
    // The root lies in (a, b].
    while (b - a >= width_bound && sq(b) != 0) {
      Rational m = (a + b) / 2;
      if (count(a, m) == 1)
        b = m;
      else
        a = m;
    }
    Rational cand = sq(b) == 0 ? b : detail::simplest_rational_between(a, b);
    if (sq(cand) != 0) continue;
    RankPolynomial lin = RankPolynomial::from_coefficients({-cand, Rational(1)});
    RankPolynomial rest = p;
    std::size_t mult = 0;
    while (true) {
      auto [q, r] = RankPolynomial::divmod(rest, lin);
      if (!r.is_zero()) break;
      rest = std::move(q);
      ++mult;
    }
    out.push_back({cand, mult});
  }
  std::sort(out.begin(), out.end(), [](const RationalRoot& x, const RationalRoot& y) { return x.value < y.value; });
  return out;
}

}  // namespace interpcat
