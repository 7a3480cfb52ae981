#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "scalar.hpp"

namespace interpcat {

// Object of a base category: a word in generating objects. Plain presentations use
// words of length one; module categories use arbitrary words with the empty word as unit.
struct Word {
  std::vector<std::uint32_t> letters;

  Word() = default;
  Word(std::initializer_list<std::uint32_t> l) : letters(l) {}
  explicit Word(std::vector<std::uint32_t> l) : letters(std::move(l)) {}

  bool empty() const { return letters.empty(); }
  std::size_t length() const { return letters.size(); }
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;
};

inline Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

// Sparse bilinear table: (basis i of the first argument, basis j of the second) -> output vector.
struct StructureTable {
  std::size_t first_dim = 0, second_dim = 0, out_dim = 0;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> entries;

  StructureTable() = default;
  StructureTable(std::size_t f, std::size_t s, std::size_t o) : first_dim(f), second_dim(s), out_dim(o), entries(f * s) {}

  const std::vector<std::pair<std::uint32_t, Rational>>& at(std::size_t i, std::size_t j) const {
    return entries[i * second_dim + j];
  }
  void set(std::size_t i, std::size_t j, const std::vector<Rational>& v) {
    auto& e = entries[i * second_dim + j];
    e.clear();
    for (std::size_t k = 0; k < v.size(); ++k)
      if (sgn(v[k]) != 0) e.emplace_back(static_cast<std::uint32_t>(k), v[k]);
  }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const {
    if (ok()) return "ok";
    std::string s = std::to_string(violations.size()) + " violation(s)";
    for (const auto& v : violations) s += "\n  " + v;
    return s;
  }
};

// Dual object together with evaluation (dual x U -> 1) and coevaluation (1 -> U x dual).
struct BaseDual {
  Word dual;
  std::vector<Rational> ev;
  std::vector<Rational> coev;
};

class BaseCategory {
 public:
  virtual ~BaseCategory() = default;

  virtual std::string name() const = 0;
  virtual Word unit() const = 0;
  virtual std::vector<Word> generators() const = 0;
  virtual std::size_t hom_dim(const Word& a, const Word& b) const = 0;
  // Table of g o f with f in Hom(a,b) as first argument and g in Hom(b,c) as second.
  virtual const StructureTable& composition(const Word& a, const Word& b, const Word& c) const = 0;
  virtual std::vector<Rational> identity(const Word& a) const = 0;
  virtual std::string object_label(const Word& a) const = 0;
  virtual Word parse_object(std::string_view text) const = 0;

  virtual bool has_tensor() const { return false; }
  virtual Word tensor(const Word& a, const Word& b) const {
    if (a == unit()) return b;
    if (b == unit()) return a;
    throw CapabilityError("base category '" + name() + "' has no tensor product");
  }
  // Table of f x g with f in Hom(a,b), g in Hom(c,d); output in Hom(a x c, b x d).
  virtual const StructureTable& tensor_table(const Word& a, const Word& b, const Word& c, const Word& d) const {
    std::lock_guard lock(default_mu_);
    auto key = std::array<Word, 4>{a, b, c, d};
    if (auto it = default_tensor_.find(key); it != default_tensor_.end()) return it->second;
    StructureTable t;
    if (a == unit() && b == unit()) {
      std::size_t n = hom_dim(c, d);
      t = StructureTable(1, n, n);
      for (std::size_t j = 0; j < n; ++j) t.entries[j] = {{static_cast<std::uint32_t>(j), Rational(1)}};
    } else if (c == unit() && d == unit()) {
      std::size_t n = hom_dim(a, b);
      t = StructureTable(n, 1, n);
      for (std::size_t i = 0; i < n; ++i) t.entries[i] = {{static_cast<std::uint32_t>(i), Rational(1)}};
    } else {
      throw CapabilityError("base category '" + name() + "' has no tensor product");
    }
    return default_tensor_.emplace(key, std::move(t)).first->second;
  }

  virtual bool has_braiding() const { return false; }
  virtual std::vector<Rational> braiding(const Word& a, const Word& b) const {
    if (a == unit() || b == unit()) return identity(tensor(a, b));
    throw CapabilityError("base category '" + name() + "' has no braiding");
  }
  // Inverse of braiding(a, b), an element of Hom(b x a, a x b).
  virtual std::vector<Rational> braiding_inverse(const Word& a, const Word& b) const {
    if (a == unit() || b == unit()) return identity(tensor(a, b));
    throw CapabilityError("base category '" + name() + "' has no braiding");
  }

  virtual bool has_duals() const { return false; }
  virtual BaseDual dual(const Word& a) const {
    if (a == unit()) return {unit(), identity(unit()), identity(unit())};
    throw CapabilityError("base category '" + name() + "' has no duals");
  }

  virtual bool has_trace() const { return false; }
  // Table of the partial trace Hom(u x x, v x x) -> Hom(u, v); second argument is a dummy of size one.
  virtual const StructureTable& trace_table(const Word& u, const Word& v, const Word& x) const {
    if (x != unit()) throw CapabilityError("base category '" + name() + "' has no trace");
    std::lock_guard lock(default_mu_);
    auto key = std::array<Word, 4>{u, v, x, Word{}};
    if (auto it = default_trace_.find(key); it != default_trace_.end()) return it->second;
    std::size_t n = hom_dim(u, v);
    StructureTable t(n, 1, n);
    for (std::size_t i = 0; i < n; ++i) t.entries[i] = {{static_cast<std::uint32_t>(i), Rational(1)}};
    return default_trace_.emplace(key, std::move(t)).first->second;
  }

  // g o f on coordinate vectors.
  std::vector<Rational> compose(const Word& a, const Word& b, const Word& c, const std::vector<Rational>& f,
                                const std::vector<Rational>& g) const {
    const auto& t = composition(a, b, c);
    return apply_table(t, f, g);
  }

  std::vector<Rational> tensor_morphisms(const Word& a, const Word& b, const Word& c, const Word& d,
                                         const std::vector<Rational>& f, const std::vector<Rational>& g) const {
    return apply_table(tensor_table(a, b, c, d), f, g);
  }

  static std::vector<Rational> apply_table(const StructureTable& t, const std::vector<Rational>& f,
                                           const std::vector<Rational>& g) {
    if (f.size() != t.first_dim || g.size() != t.second_dim) throw ArgumentError("coordinate length mismatch");
    std::vector<Rational> out(t.out_dim);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (sgn(f[i]) == 0) continue;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (sgn(g[j]) == 0) continue;
        Rational c = f[i] * g[j];
        for (const auto& [k, v] : t.at(i, j)) out[k] += c * v;
      }
    }
    return out;
  }

 private:
  mutable std::recursive_mutex default_mu_;
  mutable std::map<std::array<Word, 4>, StructureTable> default_tensor_, default_trace_;
};

using BasePtr = std::shared_ptr<const BaseCategory>;

inline std::size_t max_word_length() {
  if (const char* env = std::getenv("INTERPCAT_MAX_WORD")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 6;
}

// ---------------------------------------------------------------------------------------------
// Plain presented linear category: finitely many objects, explicit hom dimensions and
// composition constants.

struct Presentation {
  std::string name;
  std::vector<std::string> objects;
  std::size_t unit = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> hom_dims;  // absent means zero
  std::map<std::size_t, std::vector<Rational>> identities;               // coordinates of id_a
  // (a,b,c) -> table of g o f; absent tables are zero.
  std::map<std::array<std::size_t, 3>, StructureTable> compositions;

  std::size_t dim(std::size_t a, std::size_t b) const {
    auto it = hom_dims.find({a, b});
    return it == hom_dims.end() ? 0 : it->second;
  }
};

inline ValidationReport validate(const Presentation& p) {
  ValidationReport rep;
  std::size_t n = p.objects.size();
  if (p.unit >= n) {
    rep.violations.push_back("unit object index out of range");
    return rep;
  }
  if (p.dim(p.unit, p.unit) != 1) rep.violations.push_back("End(unit) must be one-dimensional");
  auto table = [&](std::size_t a, std::size_t b, std::size_t c) -> const StructureTable* {
    auto it = p.compositions.find({a, b, c});
    return it == p.compositions.end() ? nullptr : &it->second;
  };
  auto comp = [&](std::size_t a, std::size_t b, std::size_t c, const std::vector<Rational>& f,
                  const std::vector<Rational>& g) {
    const StructureTable* t = table(a, b, c);
    if (!t) return std::vector<Rational>(p.dim(a, c));
    return BaseCategory::apply_table(*t, f, g);
  };
  for (const auto& [key, t] : p.compositions) {
    auto [a, b, c] = key;
    if (t.first_dim != p.dim(a, b) || t.second_dim != p.dim(b, c) || t.out_dim != p.dim(a, c))
      rep.violations.push_back("composition table (" + p.objects[a] + "," + p.objects[b] + "," + p.objects[c] +
                               ") has wrong shape");
  }
  if (!rep.ok()) return rep;
  for (std::size_t a = 0; a < n; ++a) {
    auto it = p.identities.find(a);
    if (it == p.identities.end() || it->second.size() != p.dim(a, a)) {
      rep.violations.push_back("missing identity for object " + p.objects[a]);
    }
  }
  if (!rep.ok()) return rep;
  if (p.identities.at(p.unit) != std::vector<Rational>{Rational(1)})
    rep.violations.push_back("the identity of the unit must be the basis vector of End(unit)");
  auto basis = [](std::size_t d, std::size_t i) {
    std::vector<Rational> v(d);
    v[i] = 1;
    return v;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < p.dim(a, b); ++i) {
        auto f = basis(p.dim(a, b), i);
        if (comp(a, b, b, f, p.identities.at(b)) != f)
          rep.violations.push_back("id o f != f for basis " + std::to_string(i) + " of Hom(" + p.objects[a] + "," +
                                   p.objects[b] + ")");
        if (comp(a, a, b, p.identities.at(a), f) != f)
          rep.violations.push_back("f o id != f for basis " + std::to_string(i) + " of Hom(" + p.objects[a] + "," +
                                   p.objects[b] + ")");
      }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t i = 0; i < p.dim(a, b); ++i)
            for (std::size_t j = 0; j < p.dim(b, c); ++j)
              for (std::size_t k = 0; k < p.dim(c, d); ++k) {
                auto f = basis(p.dim(a, b), i), g = basis(p.dim(b, c), j), h = basis(p.dim(c, d), k);
                auto left = comp(a, c, d, comp(a, b, c, f, g), h);
                auto right = comp(a, b, d, f, comp(b, c, d, g, h));
                if (left != right)
                  rep.violations.push_back("associativity fails on basis triple (" + std::to_string(i) + "," +
                                           std::to_string(j) + "," + std::to_string(k) + ") along " + p.objects[a] +
                                           "->" + p.objects[b] + "->" + p.objects[c] + "->" + p.objects[d]);
              }
  return rep;
}

class PresentedCategory : public BaseCategory {
 public:
  explicit PresentedCategory(Presentation p) : p_(std::move(p)) {
    auto rep = validate(p_);
    if (!rep.ok()) throw ValidationError("invalid presentation '" + p_.name + "': " + rep.summary());
  }

  const Presentation& presentation() const { return p_; }

  std::string name() const override { return p_.name; }
  Word unit() const override { return Word{static_cast<std::uint32_t>(p_.unit)}; }
  std::vector<Word> generators() const override {
    std::vector<Word> out;
    for (std::size_t i = 0; i < p_.objects.size(); ++i)
      if (i != p_.unit) out.push_back(Word{static_cast<std::uint32_t>(i)});
    return out;
  }
  std::size_t hom_dim(const Word& a, const Word& b) const override { return p_.dim(index(a), index(b)); }
  const StructureTable& composition(const Word& a, const Word& b, const Word& c) const override {
    std::size_t x = index(a), y = index(b), z = index(c);
    auto it = p_.compositions.find({x, y, z});
    if (it != p_.compositions.end()) return it->second;
    std::lock_guard lock(mu_);
    auto key = std::array<std::size_t, 3>{x, y, z};
    auto jt = zero_tables_.find(key);
    if (jt == zero_tables_.end())
      jt = zero_tables_.emplace(key, StructureTable(p_.dim(x, y), p_.dim(y, z), p_.dim(x, z))).first;
    return jt->second;
  }
  std::vector<Rational> identity(const Word& a) const override { return p_.identities.at(index(a)); }
  std::string object_label(const Word& a) const override { return p_.objects[index(a)]; }
  Word parse_object(std::string_view text) const override {
    if (text == "1") return unit();
    for (std::size_t i = 0; i < p_.objects.size(); ++i)
      if (p_.objects[i] == text) return Word{static_cast<std::uint32_t>(i)};
    throw ArgumentError("unknown object '" + std::string(text) + "' in base '" + p_.name + "'");
  }

 private:
  std::size_t index(const Word& w) const {
    if (w.length() != 1 || w.letters[0] >= p_.objects.size())
      throw ArgumentError("not an object of presented category '" + p_.name + "'");
    return w.letters[0];
  }

  Presentation p_;
  mutable std::mutex mu_;
  mutable std::map<std::array<std::size_t, 3>, StructureTable> zero_tables_;
};

// ---------------------------------------------------------------------------------------------
// Finite-dimensional bialgebras over Q and their module categories.

struct Bialgebra {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> basis_names;
  std::vector<Rational> mult;    // [(i*dim + j)*dim + k]: coefficient of e_k in e_i e_j
  std::vector<Rational> unit;    // coordinates of 1
  std::vector<Rational> comult;  // [(i*dim + j)*dim + k]: coefficient of e_j (x) e_k in Delta(e_i)
  std::vector<Rational> counit;
  std::optional<QMatrix> antipode;  // column j holds S(e_j)

  Rational m(std::size_t i, std::size_t j, std::size_t k) const { return mult[(i * dim + j) * dim + k]; }
  Rational c(std::size_t i, std::size_t j, std::size_t k) const { return comult[(i * dim + j) * dim + k]; }

  std::vector<Rational> multiply(const std::vector<Rational>& x, const std::vector<Rational>& y) const {
    std::vector<Rational> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (sgn(x[i]) == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (sgn(y[j]) == 0) continue;
        Rational s = x[i] * y[j];
        for (std::size_t k = 0; k < dim; ++k)
          if (sgn(m(i, j, k)) != 0) out[k] += s * m(i, j, k);
      }
    }
    return out;
  }

  bool cocommutative() const {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = 0; k < dim; ++k)
          if (c(i, j, k) != c(i, k, j)) return false;
    return true;
  }
};

struct ModuleData {
  std::string name;
  std::vector<QMatrix> action;  // action[i] represents e_i
  std::size_t dim() const { return action.empty() ? 0 : action[0].rows(); }
};

inline ValidationReport validate(const Bialgebra& b) {
  ValidationReport rep;
  std::size_t n = b.dim;
  if (n == 0) rep.violations.push_back("bialgebra must have positive dimension");
  if (b.mult.size() != n * n * n || b.comult.size() != n * n * n || b.unit.size() != n || b.counit.size() != n)
    rep.violations.push_back("structure constant arrays have the wrong size");
  if (!rep.ok()) return rep;
  auto e = [&](std::size_t i) {
    std::vector<Rational> v(n);
    v[i] = 1;
    return v;
  };
  // Products in B (x) B, stored as n*n vectors.
  auto delta = [&](const std::vector<Rational>& x) {
    std::vector<Rational> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
      if (sgn(x[i]) != 0)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) out[j * n + k] += x[i] * b.c(i, j, k);
    return out;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (b.multiply(b.multiply(e(i), e(j)), e(k)) != b.multiply(e(i), b.multiply(e(j), e(k))))
          rep.violations.push_back("multiplication not associative on (" + std::to_string(i) + "," +
                                   std::to_string(j) + "," + std::to_string(k) + ")");
  for (std::size_t i = 0; i < n; ++i)
    if (b.multiply(b.unit, e(i)) != e(i) || b.multiply(e(i), b.unit) != e(i))
      rep.violations.push_back("unit law fails on basis " + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    // (Delta x id) Delta == (id x Delta) Delta
    std::vector<Rational> l(n * n * n), r(n * n * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Rational c = b.c(i, j, k);
        if (sgn(c) == 0) continue;
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = 0; q < n; ++q) {
            l[(p * n + q) * n + k] += c * b.c(j, p, q);
            r[(j * n + p) * n + q] += c * b.c(k, p, q);
          }
      }
    if (l != r) rep.violations.push_back("comultiplication not coassociative on basis " + std::to_string(i));
    std::vector<Rational> left(n), right(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        left[k] += b.counit[j] * b.c(i, j, k);
        right[j] += b.counit[k] * b.c(i, j, k);
      }
    if (left != e(i) || right != e(i)) rep.violations.push_back("counit law fails on basis " + std::to_string(i));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto lhs = delta(b.multiply(e(i), e(j)));
      auto di = delta(e(i)), dj = delta(e(j));
      std::vector<Rational> rhs(n * n);
      for (std::size_t p = 0; p < n * n; ++p) {
        if (sgn(di[p]) == 0) continue;
        for (std::size_t q = 0; q < n * n; ++q) {
          if (sgn(dj[q]) == 0) continue;
          auto a = b.multiply(e(p / n), e(q / n)), c = b.multiply(e(p % n), e(q % n));
          for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) rhs[x * n + y] += di[p] * dj[q] * a[x] * c[y];
        }
      }
      if (lhs != rhs)
        rep.violations.push_back("comultiplication is not multiplicative on (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
      Rational ce = 0;
      auto prod = b.multiply(e(i), e(j));
      for (std::size_t k = 0; k < n; ++k) ce += prod[k] * b.counit[k];
      if (ce != b.counit[i] * b.counit[j])
        rep.violations.push_back("counit is not multiplicative on (" + std::to_string(i) + "," + std::to_string(j) +
                                 ")");
    }
  {
    auto du = delta(b.unit);
    std::vector<Rational> uu(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) uu[x * n + y] = b.unit[x] * b.unit[y];
    if (du != uu) rep.violations.push_back("Delta(1) != 1 (x) 1");
    Rational eu = 0;
    for (std::size_t k = 0; k < n; ++k) eu += b.unit[k] * b.counit[k];
    if (eu != 1) rep.violations.push_back("counit(1) != 1");
  }
  if (b.antipode) {
    const QMatrix& s = *b.antipode;
    if (s.rows() != n || s.cols() != n) {
      rep.violations.push_back("antipode has the wrong shape");
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rational> l(n), r(n);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            Rational c = b.c(i, j, k);
            if (sgn(c) == 0) continue;
            std::vector<Rational> sj(n), sk(n);
            for (std::size_t x = 0; x < n; ++x) {
              sj[x] = s(x, j);
              sk[x] = s(x, k);
            }
            auto a1 = b.multiply(sj, e(k)), a2 = b.multiply(e(j), sk);
            for (std::size_t x = 0; x < n; ++x) {
              l[x] += c * a1[x];
              r[x] += c * a2[x];
            }
          }
        std::vector<Rational> target(n);
        for (std::size_t x = 0; x < n; ++x) target[x] = b.counit[i] * b.unit[x];
        if (l != target || r != target) rep.violations.push_back("antipode axiom fails on basis " + std::to_string(i));
      }
    }
  }
  return rep;
}

inline ValidationReport validate(const ModuleData& mod, const Bialgebra& b) {
  ValidationReport rep;
  if (mod.action.size() != b.dim) {
    rep.violations.push_back("module '" + mod.name + "' needs one matrix per basis element");
    return rep;
  }
  std::size_t d = mod.dim();
  for (const auto& a : mod.action)
    if (a.rows() != d || a.cols() != d) {
      rep.violations.push_back("module '" + mod.name + "' has non-square or inconsistent matrices");
      return rep;
    }
  auto rho = [&](const std::vector<Rational>& x) {
    QMatrix out(d, d);
    for (std::size_t i = 0; i < b.dim; ++i)
      if (sgn(x[i]) != 0) out = out + x[i] * mod.action[i];
    return out;
  };
  if (rho(b.unit) != QMatrix::identity(d)) rep.violations.push_back("module '" + mod.name + "': 1 does not act as id");
  for (std::size_t i = 0; i < b.dim; ++i)
    for (std::size_t j = 0; j < b.dim; ++j) {
      std::vector<Rational> ei(b.dim), ej(b.dim);
      ei[i] = 1;
      ej[j] = 1;
      if (mod.action[i] * mod.action[j] != rho(b.multiply(ei, ej)))
        rep.violations.push_back("module '" + mod.name + "': action not multiplicative on (" + std::to_string(i) +
                                 "," + std::to_string(j) + ")");
    }
  return rep;
}

// Hom space between two modules, as the solution space of the intertwiner equations.
struct HomSpace {
  std::size_t source_dim = 0, target_dim = 0;
  std::vector<QMatrix> basis;           // target_dim x source_dim matrices
  std::vector<std::size_t> free_cols;   // flat positions that read off coordinates
  // Nonzero entries of each basis matrix as (row, col, value).
  std::vector<std::vector<std::tuple<std::uint32_t, std::uint32_t, Rational>>> sparse;
  std::map<std::size_t, std::uint32_t> coordinate_of;  // flat position -> coordinate index
};

class ModuleCategory : public BaseCategory {
 public:
  ModuleCategory(std::string name, Bialgebra b, std::vector<ModuleData> gens)
      : name_(std::move(name)), b_(std::move(b)), gens_(std::move(gens)) {
    auto rep = validate(b_);
    for (const auto& g : gens_) {
      auto r = validate(g, b_);
      rep.violations.insert(rep.violations.end(), r.violations.begin(), r.violations.end());
      if (g.name.empty() || g.name == "1" || g.name.find_first_of(".,|() \t") != std::string::npos)
        rep.violations.push_back("invalid generator name '" + g.name + "'");
    }
    if (!rep.ok()) throw ValidationError("invalid module category '" + name_ + "': " + rep.summary());
    cocommutative_ = b_.cocommutative();
    if (b_.antipode) {
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        std::optional<std::uint32_t> found;
        for (std::size_t h = 0; h < gens_.size() && !found; ++h) {
          if (gens_[h].dim() != gens_[g].dim()) continue;
          bool match = true;
          for (std::size_t i = 0; i < b_.dim && match; ++i) {
            QMatrix s(gens_[g].dim(), gens_[g].dim());
            for (std::size_t k = 0; k < b_.dim; ++k)
              if (sgn((*b_.antipode)(k, i)) != 0) s = s + (*b_.antipode)(k, i) * gens_[g].action[k];
            match = (s.transpose() == gens_[h].action[i]);
          }
          if (match) found = static_cast<std::uint32_t>(h);
        }
        dual_gen_.push_back(found);
      }
    }
  }

  const Bialgebra& bialgebra() const { return b_; }
  const std::vector<ModuleData>& generator_modules() const { return gens_; }
  bool cocommutative() const { return cocommutative_; }

  std::string name() const override { return name_; }
  Word unit() const override { return Word{}; }
  std::vector<Word> generators() const override {
    std::vector<Word> out;
    for (std::size_t i = 0; i < gens_.size(); ++i) out.push_back(Word{static_cast<std::uint32_t>(i)});
    return out;
  }

  std::string object_label(const Word& a) const override {
    if (a.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < a.length(); ++i) {
      if (i) s += '.';
      s += gens_.at(a.letters[i]).name;
    }
    return s;
  }

  Word parse_object(std::string_view text) const override {
    if (text == "1") return Word{};
    Word w;
    std::size_t start = 0;
    while (true) {
      std::size_t dot = text.find('.', start);
      std::string_view piece = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
      bool found = false;
      for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == piece) {
          w.letters.push_back(static_cast<std::uint32_t>(i));
          found = true;
          break;
        }
      if (!found) throw ArgumentError("unknown object '" + std::string(piece) + "' in base '" + name_ + "'");
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
    return w;
  }

  std::size_t object_dim(const Word& w) const { return action(w)[0].rows(); }

  // Action matrices of the basis of B on the tensor product module of the word.
  const std::vector<QMatrix>& action(const Word& w) const {
    check_length(w);
    std::lock_guard lock(mu_);
    if (auto it = actions_.find(w); it != actions_.end()) return it->second;
    std::vector<QMatrix> act;
    if (w.empty()) {
      for (std::size_t i = 0; i < b_.dim; ++i) {
        QMatrix m(1, 1);
        m(0, 0) = b_.counit[i];
        act.push_back(m);
      }
    } else if (w.length() == 1) {
      act = gens_.at(w.letters[0]).action;
    } else {
      Word head(std::vector<std::uint32_t>(w.letters.begin(), w.letters.end() - 1));
      const auto& a = action(head);
      const auto& g = gens_.at(w.letters.back()).action;
      for (std::size_t i = 0; i < b_.dim; ++i) {
        QMatrix m(a[0].rows() * g[0].rows(), a[0].cols() * g[0].cols());
        for (std::size_t j = 0; j < b_.dim; ++j)
          for (std::size_t k = 0; k < b_.dim; ++k)
            if (sgn(b_.c(i, j, k)) != 0) m = m + b_.c(i, j, k) * QMatrix::kron(a[j], g[k]);
        act.push_back(std::move(m));
      }
    }
    return actions_.emplace(w, std::move(act)).first->second;
  }

  const HomSpace& hom(const Word& v, const Word& w) const {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(v, w);
    if (auto it = homs_.find(key); it != homs_.end()) return it->second;
    const auto& av = action(v);
    const auto& aw = action(w);
    std::size_t dv = av[0].rows(), dw = aw[0].rows();
    QMatrix eqs;
    std::vector<Rational> row(dv * dw);
    for (std::size_t i = 0; i < b_.dim; ++i)
      for (std::size_t r = 0; r < dw; ++r)
        for (std::size_t c = 0; c < dv; ++c) {
          std::fill(row.begin(), row.end(), Rational(0));
          bool any = false;
          for (std::size_t k = 0; k < dw; ++k)
            if (sgn(aw[i](r, k)) != 0) {
              row[k * dv + c] += aw[i](r, k);
              any = true;
            }
          for (std::size_t k = 0; k < dv; ++k)
            if (sgn(av[i](k, c)) != 0) {
              row[r * dv + k] -= av[i](k, c);
              any = true;
            }
          if (any) {
            bool nonzero = false;
            for (const auto& x : row)
              if (sgn(x) != 0) nonzero = true;
            if (nonzero) eqs.append_row(row);
          }
        }
    HomSpace h;
    h.source_dim = dv;
    h.target_dim = dw;
    Nullspace ns;
    if (eqs.rows() == 0) {
      for (std::size_t f = 0; f < dv * dw; ++f) {
        std::vector<Rational> v(dv * dw);
        v[f] = 1;
        ns.basis.push_back(std::move(v));
        ns.free_columns.push_back(f);
      }
    } else {
      ns = nullspace(std::move(eqs));
    }
    for (const auto& vec : ns.basis) {
      QMatrix m(dw, dv);
      for (std::size_t p = 0; p < vec.size(); ++p) m(p / dv, p % dv) = vec[p];
      h.basis.push_back(std::move(m));
    }
    h.free_cols = ns.free_columns;
    for (const auto& m : h.basis) {
      std::vector<std::tuple<std::uint32_t, std::uint32_t, Rational>> nz;
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          if (sgn(m(r, c)) != 0) nz.emplace_back(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), m(r, c));
      h.sparse.push_back(std::move(nz));
    }
    for (std::size_t k = 0; k < h.free_cols.size(); ++k) h.coordinate_of[h.free_cols[k]] = static_cast<std::uint32_t>(k);
    return homs_.emplace(key, std::move(h)).first->second;
  }

  // Coordinates of an intertwiner; throws if the matrix is not in the hom space.
  std::vector<Rational> coordinates(const Word& v, const Word& w, const QMatrix& x) const {
    const auto& h = hom(v, w);
    if (x.rows() != h.target_dim || x.cols() != h.source_dim) throw ArgumentError("matrix shape mismatch");
    std::vector<Rational> c(h.basis.size());
    QMatrix rebuilt(h.target_dim, h.source_dim);
    for (std::size_t k = 0; k < c.size(); ++k) {
      c[k] = x.data()[h.free_cols[k]];
      if (sgn(c[k]) != 0) rebuilt = rebuilt + c[k] * h.basis[k];
    }
    if (!(rebuilt == x))
      throw ValidationError("matrix is not a module map " + object_label(v) + " -> " + object_label(w));
    return c;
  }

  QMatrix matrix(const Word& v, const Word& w, const std::vector<Rational>& coords) const {
    const auto& h = hom(v, w);
    QMatrix out(h.target_dim, h.source_dim);
    for (std::size_t k = 0; k < coords.size(); ++k)
      if (sgn(coords[k]) != 0) out = out + coords[k] * h.basis[k];
    return out;
  }

  std::size_t hom_dim(const Word& a, const Word& b) const override { return hom(a, b).basis.size(); }

  const StructureTable& composition(const Word& a, const Word& b, const Word& c) const override {
    std::lock_guard lock(mu_);
    auto key = std::array<Word, 3>{a, b, c};
    if (auto it = comps_.find(key); it != comps_.end()) return it->second;
    const auto& f = hom(a, b);
    const auto& g = hom(b, c);
    const auto& h = hom(a, c);
    // Products of intertwiners are intertwiners, so coordinates are read off at the free positions.
    StructureTable t(f.basis.size(), g.basis.size(), h.basis.size());
    std::size_t width = h.source_dim;
    for (std::size_t j = 0; j < g.basis.size(); ++j) {
      std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, const Rational*>>> by_col;
      for (const auto& [r, cc, v] : g.sparse[j]) by_col[cc].emplace_back(r, &v);
      for (std::size_t i = 0; i < f.basis.size(); ++i) {
        std::vector<Rational> out(h.basis.size());
        for (const auto& [m, col, fv] : f.sparse[i]) {
          auto it = by_col.find(m);
          if (it == by_col.end()) continue;
          for (const auto& [r, gv] : it->second) {
            auto pos = h.coordinate_of.find(static_cast<std::size_t>(r) * width + col);
            if (pos != h.coordinate_of.end()) out[pos->second] += *gv * fv;
          }
        }
        t.set(i, j, out);
      }
    }
    return comps_.emplace(key, std::move(t)).first->second;
  }

  std::vector<Rational> identity(const Word& a) const override {
    return coordinates(a, a, QMatrix::identity(object_dim(a)));
  }

  bool has_tensor() const override { return true; }
  Word tensor(const Word& a, const Word& b) const override { return concat(a, b); }
  const StructureTable& tensor_table(const Word& a, const Word& b, const Word& c, const Word& d) const override {
    std::lock_guard lock(mu_);
    auto key = std::array<Word, 4>{a, b, c, d};
    if (auto it = tensors_.find(key); it != tensors_.end()) return it->second;
    const auto& f = hom(a, b);
    const auto& g = hom(c, d);
    Word src = concat(a, c), tgt = concat(b, d);
    const auto& h = hom(src, tgt);
    StructureTable t(f.basis.size(), g.basis.size(), h.basis.size());
    std::size_t g_rows = g.target_dim, g_cols = g.source_dim, width = h.source_dim;
    for (std::size_t i = 0; i < f.basis.size(); ++i)
      for (std::size_t j = 0; j < g.basis.size(); ++j) {
        std::vector<Rational> out(h.basis.size());
        for (const auto& [r1, c1, v1] : f.sparse[i])
          for (const auto& [r2, c2, v2] : g.sparse[j]) {
            std::size_t flat = (r1 * g_rows + r2) * width + (c1 * g_cols + c2);
            auto pos = h.coordinate_of.find(flat);
            if (pos != h.coordinate_of.end()) out[pos->second] += v1 * v2;
          }
        t.set(i, j, out);
      }
    return tensors_.emplace(key, std::move(t)).first->second;
  }

  bool has_braiding() const override { return cocommutative_; }
  std::vector<Rational> braiding(const Word& a, const Word& b) const override {
    if (!cocommutative_) return BaseCategory::braiding(a, b);
    std::size_t da = object_dim(a), db = object_dim(b);
    QMatrix p(da * db, da * db);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < db; ++j) p(j * da + i, i * db + j) = 1;
    return coordinates(concat(a, b), concat(b, a), p);
  }
  std::vector<Rational> braiding_inverse(const Word& a, const Word& b) const override {
    if (!cocommutative_) return BaseCategory::braiding_inverse(a, b);
    return braiding(b, a);
  }

  bool has_duals() const override {
    if (!b_.antipode) return false;
    for (const auto& d : dual_gen_)
      if (!d) return false;
    return true;
  }

  BaseDual dual(const Word& a) const override {
    if (!b_.antipode) throw CapabilityError("base '" + name_ + "' has no antipode, so no duals");
    Word d;
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) {
      if (!dual_gen_.at(*it)) throw CapabilityError("generator '" + gens_[*it].name + "' has no dual generator");
      d.letters.push_back(*dual_gen_[*it]);
    }
    // Basis of the word a is indexed by digit tuples (l_1..l_n); the dual word by (k_n..k_1).
    std::vector<std::size_t> dims;
    for (auto g : a.letters) dims.push_back(gens_[g].dim());
    std::size_t n = 1;
    for (auto x : dims) n *= x;
    auto reverse_index = [&](std::size_t idx) {
      std::vector<std::size_t> digits(dims.size());
      for (std::size_t p = dims.size(); p-- > 0;) {
        digits[p] = idx % dims[p];
        idx /= dims[p];
      }
      std::size_t out = 0;
      for (std::size_t p = dims.size(); p-- > 0;) out = out * dims[p] + digits[p];
      return out;
    };
    QMatrix ev(1, n * n), coev(n * n, 1);
    for (std::size_t l = 0; l < n; ++l) {
      std::size_t k = reverse_index(l);
      ev(0, k * n + l) = 1;
      coev(l * n + k, 0) = 1;
    }
    return {d, coordinates(concat(d, a), Word{}, ev), coordinates(Word{}, concat(a, d), coev)};
  }

  bool has_trace() const override { return cocommutative_ && has_duals(); }
  const StructureTable& trace_table(const Word& u, const Word& v, const Word& x) const override {
    if (x.empty()) return BaseCategory::trace_table(u, v, x);
    if (!has_trace()) throw CapabilityError("base '" + name_ + "' has no trace");
    std::lock_guard lock(mu_);
    auto key = std::array<Word, 3>{u, v, x};
    if (auto it = traces_.find(key); it != traces_.end()) return it->second;
    const auto& h = hom(concat(u, x), concat(v, x));
    std::size_t du = object_dim(u), dv = object_dim(v), dx = object_dim(x);
    StructureTable t(h.basis.size(), 1, hom_dim(u, v));
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
      QMatrix tr(dv, du);
      for (std::size_t a = 0; a < dv; ++a)
        for (std::size_t b = 0; b < du; ++b)
          for (std::size_t k = 0; k < dx; ++k) tr(a, b) += h.basis[i](a * dx + k, b * dx + k);
      t.set(i, 0, coordinates(u, v, tr));
    }
    return traces_.emplace(key, std::move(t)).first->second;
  }

 private:
  void check_length(const Word& w) const {
    if (w.length() > max_word_length())
      throw ResourceError("word of length " + std::to_string(w.length()) + " exceeds the bound " +
                          std::to_string(max_word_length()));
    for (auto l : w.letters)
      if (l >= gens_.size()) throw ArgumentError("unknown generator index in word");
  }

  std::string name_;
  Bialgebra b_;
  std::vector<ModuleData> gens_;
  bool cocommutative_ = false;
  std::vector<std::optional<std::uint32_t>> dual_gen_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Word, std::vector<QMatrix>> actions_;
  mutable std::map<std::pair<Word, Word>, HomSpace> homs_;
  mutable std::map<std::array<Word, 3>, StructureTable> comps_, traces_;
  mutable std::map<std::array<Word, 4>, StructureTable> tensors_;
};

// ---------------------------------------------------------------------------------------------
// Constructors for common bialgebras and modules.

// Group algebra Q[G] from a multiplication table on 0..n-1.
inline Bialgebra group_algebra(std::string name, const std::vector<std::vector<std::size_t>>& table) {
  std::size_t n = table.size();
  Bialgebra b;
  b.name = std::move(name);
  b.dim = n;
  b.mult.assign(n * n * n, 0);
  b.comult.assign(n * n * n, 0);
  b.unit.assign(n, 0);
  b.counit.assign(n, 1);
  std::optional<std::size_t> e;
  for (std::size_t x = 0; x < n; ++x) {
    bool is_e = true;
    for (std::size_t y = 0; y < n; ++y)
      if (table[x].size() != n || table[x][y] != y || table[y][x] != y) is_e = false;
    if (is_e) e = x;
  }
  if (!e) throw ValidationError("group table has no identity element");
  b.unit[*e] = 1;
  QMatrix s(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    b.basis_names.push_back("g" + std::to_string(x));
    bool has_inv = false;
    for (std::size_t y = 0; y < n; ++y) {
      if (table[x][y] >= n) throw ValidationError("group table entry out of range");
      b.mult[(x * n + y) * n + table[x][y]] = 1;
      if (table[x][y] == *e && table[y][x] == *e) {
        s(y, x) = 1;
        has_inv = true;
      }
    }
    if (!has_inv) throw ValidationError("group table element without inverse");
    b.comult[(x * n + x) * n + x] = 1;
  }
  b.antipode = s;
  return b;
}

// Algebra of functions on a finite group: delta_g delta_h = [g=h] delta_g,
// Delta(delta_g) = sum over ab=g of delta_a (x) delta_b.
inline Bialgebra function_algebra(std::string name, const std::vector<std::vector<std::size_t>>& table) {
  Bialgebra g = group_algebra("tmp", table);
  std::size_t n = table.size(), e = 0;
  for (std::size_t x = 0; x < n; ++x)
    if (sgn(g.unit[x]) != 0) e = x;
  Bialgebra b;
  b.name = std::move(name);
  b.dim = n;
  b.mult.assign(n * n * n, 0);
  b.comult.assign(n * n * n, 0);
  b.unit.assign(n, 1);
  b.counit.assign(n, 0);
  b.counit[e] = 1;
  QMatrix s(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    b.basis_names.push_back("d" + std::to_string(x));
    b.mult[(x * n + x) * n + x] = 1;
    for (std::size_t y = 0; y < n; ++y) {
      b.comult[(table[x][y] * n + x) * n + y] = 1;
      if (table[x][y] == e) s(y, x) = 1;
    }
  }
  b.antipode = s;
  return b;
}

inline ModuleData regular_module(const std::string& name, const Bialgebra& b) {
  ModuleData m{name, {}};
  for (std::size_t i = 0; i < b.dim; ++i) {
    QMatrix a(b.dim, b.dim);
    for (std::size_t j = 0; j < b.dim; ++j)
      for (std::size_t k = 0; k < b.dim; ++k) a(k, j) = b.m(i, j, k);
    m.action.push_back(std::move(a));
  }
  return m;
}

// One-dimensional module where e_i acts by the scalar chi[i].
inline ModuleData character_module(const std::string& name, const std::vector<Rational>& chi) {
  ModuleData m{name, {}};
  for (const auto& c : chi) {
    QMatrix a(1, 1);
    a(0, 0) = c;
    m.action.push_back(a);
  }
  return m;
}

inline std::vector<std::vector<std::size_t>> cyclic_group_table(std::size_t r) {
  std::vector<std::vector<std::size_t>> t(r, std::vector<std::size_t>(r));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) t[a][b] = (a + b) % r;
  return t;
}

// Vector spaces: the only generating object is the unit.
inline BasePtr make_triv() {
  Bialgebra b = group_algebra("Q", {{0}});
  return std::make_shared<ModuleCategory>("triv", std::move(b), std::vector<ModuleData>{});
}

// Z/r-graded vector spaces, generated by the line in degree 1 (and its dual when r > 2).
inline BasePtr make_graded_lines(std::size_t r = 2) {
  if (r < 2) throw ArgumentError("grading group must have order at least 2");
  Bialgebra b = function_algebra("Q^Z" + std::to_string(r), cyclic_group_table(r));
  std::vector<ModuleData> gens;
  auto line = [&](std::size_t deg) {
    std::vector<Rational> chi(r);
    chi[deg] = 1;
    return character_module("L" + std::to_string(deg), chi);
  };
  gens.push_back(line(1));
  if (r > 2) gens.push_back(line(r - 1));
  return std::make_shared<ModuleCategory>("z" + std::to_string(r) + "lines", std::move(b), std::move(gens));
}

// Modules over the group algebra of Z/2, generated by the regular module.
inline BasePtr make_z2_group() {
  Bialgebra b = group_algebra("QZ2", cyclic_group_table(2));
  std::vector<ModuleData> gens{regular_module("reg", b)};
  return std::make_shared<ModuleCategory>("z2group", std::move(b), std::move(gens));
}

inline std::vector<std::string> builtin_base_names() { return {"triv", "z2lines", "z2group"}; }

inline BasePtr builtin_base(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, BasePtr> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  BasePtr b;
  if (name == "triv")
    b = make_triv();
  else if (name == "z2lines")
    b = make_graded_lines(2);
  else if (name == "z2group")
    b = make_z2_group();
  else
    throw ArgumentError("unknown builtin base '" + name + "'");
  cache.emplace(name, b);
  return b;
}

// ---------------------------------------------------------------------------------------------
// Linear functors between base categories, given on objects and on hom bases.

struct BaseFunctor {
  BasePtr source, target;
  std::function<Word(const Word&)> on_objects;
  // Matrix with hom_dim(F a, F b) rows and hom_dim(a, b) columns.
  std::function<QMatrix(const Word&, const Word&)> on_homs;

  std::vector<Rational> apply(const Word& a, const Word& b, const std::vector<Rational>& coords) const {
    QMatrix m = on_homs(a, b);
    std::vector<Rational> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (sgn(coords[j]) != 0) out[i] += m(i, j) * coords[j];
    return out;
  }
};

inline ValidationReport validate(const BaseFunctor& f, const std::vector<Word>& objects) {
  ValidationReport rep;
  if (f.on_objects(f.source->unit()) != f.target->unit()) rep.violations.push_back("unit is not preserved");
  for (const auto& a : objects) {
    if (f.apply(a, a, f.source->identity(a)) != f.target->identity(f.on_objects(a)))
      rep.violations.push_back("identity of " + f.source->object_label(a) + " is not preserved");
  }
  for (const auto& a : objects)
    for (const auto& b : objects)
      for (const auto& c : objects) {
        std::size_t nf = f.source->hom_dim(a, b), ng = f.source->hom_dim(b, c);
        for (std::size_t i = 0; i < nf; ++i)
          for (std::size_t j = 0; j < ng; ++j) {
            std::vector<Rational> x(nf), y(ng);
            x[i] = 1;
            y[j] = 1;
            auto lhs = f.apply(a, c, f.source->compose(a, b, c, x, y));
            auto rhs = f.target->compose(f.on_objects(a), f.on_objects(b), f.on_objects(c), f.apply(a, b, x),
                                         f.apply(b, c, y));
            if (lhs != rhs)
              rep.violations.push_back("composition not preserved on basis pair (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") along " + f.source->object_label(a) + "->" +
                                       f.source->object_label(b) + "->" + f.source->object_label(c));
          }
      }
  return rep;
}

inline BaseFunctor identity_functor(const BasePtr& base) {
  return {base, base, [](const Word& w) { return w; },
          [base](const Word& a, const Word& b) { return QMatrix::identity(base->hom_dim(a, b)); }};
}

// Forgets a module category whose generators are one-dimensional down to vector spaces.
inline BaseFunctor forget_to_triv(const std::shared_ptr<const ModuleCategory>& source) {
  for (const auto& g : source->generator_modules())
    if (g.dim() != 1) throw ArgumentError("forgetful functor to triv needs one-dimensional generators");
  BasePtr target = builtin_base("triv");
  return {source, target, [](const Word&) { return Word{}; },
          [source](const Word& a, const Word& b) {
            const auto& h = source->hom(a, b);
            QMatrix m(1, h.basis.size());
            for (std::size_t k = 0; k < h.basis.size(); ++k) m(0, k) = h.basis[k](0, 0);
            return m;
          }};
}

}  // namespace interpcat
