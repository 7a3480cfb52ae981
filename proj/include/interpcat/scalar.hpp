#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace interpcat {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "-p", "p/q" with optional surrounding blanks; result is canonical.
inline Rational parse_rational(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t')) ++b;
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t')) --e;
  std::string s(text.substr(b, e - b));
  if (s.empty()) throw ArgumentError("empty rational literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_digit = false, seen_slash = false, digit_after_slash = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (seen_slash) digit_after_slash = true;
    } else if (c == '/' && !seen_slash && seen_digit) {
      seen_slash = true;
    } else {
      throw ArgumentError("malformed rational literal '" + s + "'");
    }
  }
  if (!seen_digit || (seen_slash && !digit_after_slash)) throw ArgumentError("malformed rational literal '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw ArgumentError("malformed rational literal '" + s + "'");
  if (q.get_den() == 0) throw ArgumentError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

// n/d in lowest terms; mpq_class(n, d) alone does not reduce.
inline Rational make_rational(long n, long d) {
  if (d == 0) throw ArgumentError("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

// Univariate polynomial over Q in the rank variable; coefficients stored low degree first,
// never with a trailing zero.
class RankPolynomial {
 public:
  RankPolynomial() = default;
  RankPolynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (sgn(c) != 0) coeffs_.push_back(c);
  }
  RankPolynomial(long c) : RankPolynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static RankPolynomial variable() { return from_coefficients({Rational(0), Rational(1)}); }

  static RankPolynomial from_coefficients(std::vector<Rational> c) {
    RankPolynomial p;
    p.coeffs_ = std::move(c);
    p.normalize();
    return p;
  }

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  Rational coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  Rational leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }
  bool is_constant() const { return coeffs_.size() <= 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // Returns q(T) = p(T + c).
  RankPolynomial shifted(const Rational& c) const {
    RankPolynomial result;
    RankPolynomial lin = from_coefficients({c, Rational(1)});
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) result = result * lin + RankPolynomial(*it);
    return result;
  }

  RankPolynomial derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * Rational(static_cast<long>(i)));
    return from_coefficients(std::move(d));
  }

  RankPolynomial& operator+=(const RankPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
  }
  RankPolynomial& operator-=(const RankPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
  }
  RankPolynomial& operator*=(const Rational& c) {
    if (sgn(c) == 0) {
      coeffs_.clear();
    } else {
      for (auto& x : coeffs_) x *= c;
    }
    return *this;
  }
  RankPolynomial& operator*=(const RankPolynomial& o) {
    *this = *this * o;
    return *this;
  }

  friend RankPolynomial operator+(RankPolynomial a, const RankPolynomial& b) { return a += b; }
  friend RankPolynomial operator-(RankPolynomial a, const RankPolynomial& b) { return a -= b; }
  friend RankPolynomial operator-(RankPolynomial a) {
    for (auto& x : a.coeffs_) x = -x;
    return a;
  }
  friend RankPolynomial operator*(RankPolynomial a, const Rational& c) { return a *= c; }
  friend RankPolynomial operator*(const Rational& c, RankPolynomial a) { return a *= c; }
  friend RankPolynomial operator*(const RankPolynomial& a, const RankPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return from_coefficients(std::move(c));
  }
  friend bool operator==(const RankPolynomial& a, const RankPolynomial& b) { return a.coeffs_ == b.coeffs_; }

  // Euclidean division over Q.
  static std::pair<RankPolynomial, RankPolynomial> divmod(const RankPolynomial& a, const RankPolynomial& b) {
    if (b.is_zero()) throw ArgumentError("polynomial division by zero");
    std::vector<Rational> rem = a.coeffs_;
    long db = b.degree();
    std::vector<Rational> quo(rem.size() > static_cast<std::size_t>(db) ? rem.size() - db : 0);
    for (long k = static_cast<long>(rem.size()) - 1; k >= db; --k) {
      if (sgn(rem[k]) == 0) continue;
      Rational f = rem[k] / b.coeffs_.back();
      quo[k - db] = f;
      for (long j = 0; j <= db; ++j) rem[k - db + j] -= f * b.coeffs_[j];
    }
    return {from_coefficients(std::move(quo)), from_coefficients(std::move(rem))};
  }

  // Division that must leave no remainder.
  static RankPolynomial divide_exact(const RankPolynomial& a, const RankPolynomial& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw ArgumentError("polynomial division is not exact");
    return q;
  }

  RankPolynomial monic() const {
    if (is_zero()) return {};
    return *this * (Rational(1) / leading());
  }

  static RankPolynomial gcd(RankPolynomial a, RankPolynomial b) {
    while (!b.is_zero()) {
      auto r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  // Returns (g, s, u) with s*a + u*b = g monic.
  static std::tuple<RankPolynomial, RankPolynomial, RankPolynomial> extended_gcd(const RankPolynomial& a,
                                                                                 const RankPolynomial& b) {
    RankPolynomial r0 = a, r1 = b, s0 = Rational(1), s1, u0, u1 = Rational(1);
    while (!r1.is_zero()) {
      auto [q, r] = divmod(r0, r1);
      RankPolynomial s2 = s0 - q * s1, u2 = u0 - q * u1;
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      u0 = std::move(u1);
      u1 = std::move(u2);
    }
    if (r0.is_zero()) return {r0, s0, u0};
    Rational inv = Rational(1) / r0.leading();
    return {r0 * inv, s0 * inv, u0 * inv};
  }

  // "[c0,c1,...]" with rational literals, "[]" for zero.
  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) out += ',';
      out += coeffs_[i].get_str();
    }
    return out + "]";
  }

  static RankPolynomial parse(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && text[b] == ' ') ++b;
    while (e > b && text[e - 1] == ' ') --e;
    text = text.substr(b, e - b);
    if (text == "t") return variable();
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
      throw ArgumentError("polynomial literal must look like [c0,c1,...]");
    std::string_view body = text.substr(1, text.size() - 2);
    std::vector<Rational> c;
    if (body.find_first_not_of(' ') != std::string_view::npos) {
      std::size_t start = 0;
      while (true) {
        std::size_t comma = body.find(',', start);
        c.push_back(parse_rational(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    return from_coefficients(std::move(c));
  }

  // Human readable form such as "t^2 - 3/2*t + 1".
  std::string pretty() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (long i = degree(); i >= 0; --i) {
      const Rational& c = coeffs_[i];
      if (sgn(c) == 0) continue;
      Rational a = abs(c);
      if (out.empty()) {
        if (sgn(c) < 0) out += "-";
      } else {
        out += sgn(c) < 0 ? " - " : " + ";
      }
      bool unit = (a == 1);
      if (i == 0 || !unit) out += a.get_str();
      if (i > 0) {
        if (!unit) out += "*";
        out += "t";
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
  }
  std::vector<Rational> coeffs_;
};

inline bool is_zero(const RankPolynomial& p) { return p.is_zero(); }
inline std::string to_string(const RankPolynomial& p) { return p.to_string(); }

inline std::ostream& operator<<(std::ostream& os, const RankPolynomial& p) { return os << p.pretty(); }

// (T - lo)(T - lo - 1)...(T - hi + 1); empty product when lo == hi.
inline RankPolynomial falling_factorial(std::size_t lo, std::size_t hi) {
  if (lo > hi) throw ArgumentError("falling factorial needs lo <= hi");
  RankPolynomial p = Rational(1);
  for (std::size_t a = lo; a < hi; ++a) p = p * RankPolynomial::from_coefficients({Rational(-static_cast<long>(a)), 1});
  return p;
}

inline Rational falling_factorial_value(const Rational& t0, std::size_t lo, std::size_t hi) {
  if (lo > hi) throw ArgumentError("falling factorial needs lo <= hi");
  Rational p = 1;
  for (std::size_t a = lo; a < hi; ++a) p *= t0 - Rational(static_cast<long>(a));
  return p;
}

// Rank contexts. Every engine type is templated on one of these, so values from
// different contexts cannot be combined by accident.
struct SymbolicRank {
  using value_type = RankPolynomial;
  value_type rank() const { return RankPolynomial::variable(); }
  value_type falling(std::size_t lo, std::size_t hi) const { return falling_factorial(lo, hi); }
  static value_type lift(const Rational& q) { return RankPolynomial(q); }
  value_type lift_polynomial(const RankPolynomial& p) const { return p; }
  std::string describe() const { return "symbolic"; }
  bool operator==(const SymbolicRank&) const = default;
};

struct SpecializedRank {
  Rational t0;
  using value_type = Rational;
  value_type rank() const { return t0; }
  value_type falling(std::size_t lo, std::size_t hi) const { return falling_factorial_value(t0, lo, hi); }
  static value_type lift(const Rational& q) { return q; }
  value_type lift_polynomial(const RankPolynomial& p) const { return p(t0); }
  std::string describe() const { return "t=" + t0.get_str(); }
  bool operator==(const SpecializedRank& o) const { return t0 == o.t0; }
};

template <class R>
concept RankContext = requires(const R& r, const Rational& q, const RankPolynomial& p, std::size_t n) {
  typename R::value_type;
  { r.rank() } -> std::convertible_to<typename R::value_type>;
  { r.falling(n, n) } -> std::convertible_to<typename R::value_type>;
  { R::lift(q) } -> std::convertible_to<typename R::value_type>;
  { r.lift_polynomial(p) } -> std::convertible_to<typename R::value_type>;
  { r.describe() } -> std::convertible_to<std::string>;
};

// A scalar tagged with the context it lives in; used at API boundaries such as the CLI.
using Scalar = std::variant<RankPolynomial, Rational>;

inline std::string scalar_to_string(const Scalar& s) {
  return std::visit([](const auto& v) { return to_string(v); }, s);
}

inline Rational specialize_value(const RankPolynomial& p, const Rational& t0) { return p(t0); }
inline Rational specialize_value(const Rational& q, const Rational&) { return q; }

}  // namespace interpcat
