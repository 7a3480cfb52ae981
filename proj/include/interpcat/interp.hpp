#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "basecat.hpp"
#include "errors.hpp"
#include "partcomb.hpp"
#include "scalar.hpp"

namespace interpcat {

// A family (U_i) of base objects; the bracket object it names.
struct Bracket {
  std::vector<Word> entries;
  std::size_t size() const { return entries.size(); }
  friend bool operator==(const Bracket&, const Bracket&) = default;
  friend auto operator<=>(const Bracket&, const Bracket&) = default;
};

// Tensor product of bracket objects. Empty brackets are dropped, so the unit is strict.
class Object {
 public:
  Object() = default;
  explicit Object(std::vector<Bracket> factors) {
    for (auto& f : factors)
      if (!f.entries.empty()) factors_.push_back(std::move(f));
  }
  static Object bracket(std::vector<Word> entries) { return Object({Bracket{std::move(entries)}}); }

  const std::vector<Bracket>& factors() const { return factors_; }
  std::size_t factor_count() const { return factors_.size(); }
  bool is_unit() const { return factors_.empty(); }
  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s;
    for (const auto& f : factors_) s.push_back(f.size());
    return s;
  }
  std::size_t element_count() const {
    std::size_t n = 0;
    for (const auto& f : factors_) n += f.size();
    return n;
  }
  std::vector<Word> flat_entries() const {
    std::vector<Word> out;
    for (const auto& f : factors_) out.insert(out.end(), f.entries.begin(), f.entries.end());
    return out;
  }
  // The single bracket of an object with at most one factor (empty for the unit).
  Bracket as_bracket() const {
    if (factors_.size() > 1) throw ArgumentError("object is a tensor product, not a single bracket");
    return factors_.empty() ? Bracket{} : factors_[0];
  }

  friend Object operator*(const Object& a, const Object& b) {
    std::vector<Bracket> f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return Object(std::move(f));
  }
  friend bool operator==(const Object&, const Object&) = default;
  friend auto operator<=>(const Object&, const Object&) = default;

 private:
  std::vector<Bracket> factors_;
};

inline std::string object_to_string(const BaseCategory& base, const Object& a) {
  if (a.is_unit()) return "()";
  std::string s;
  for (std::size_t f = 0; f < a.factor_count(); ++f) {
    if (f) s += '|';
    const auto& e = a.factors()[f].entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) s += ',';
      s += base.object_label(e[i]);
    }
  }
  return s;
}

// "U,V|W" is the tensor product of the brackets <U,V> and <W>; "()" or "" is the unit.
inline Object parse_object_spec(const BaseCategory& base, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty() || text == "()") return Object();
  std::vector<Bracket> factors;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = text.find('|', start);
    std::string_view part = trim(text.substr(start, bar == text.npos ? text.npos : bar - start));
    Bracket b;
    if (part != "()") {
      std::size_t s = 0;
      while (true) {
        std::size_t comma = part.find(',', s);
        std::string_view entry = trim(part.substr(s, comma == part.npos ? part.npos : comma - s));
        if (entry.empty()) throw ArgumentError("empty entry in object '" + std::string(text) + "'");
        b.entries.push_back(base.parse_object(entry));
        if (comma == part.npos) break;
        s = comma + 1;
      }
    }
    factors.push_back(std::move(b));
    if (bar == text.npos) break;
    start = bar + 1;
  }
  return Object(std::move(factors));
}

// One tensor factor Hom(source word, target word) of H_r.
struct BlockSpec {
  Word source, target;
  std::size_t dim = 0;
};

// Block data of r, where r lives on the elements `entries` and the first n_source are sources.
inline std::vector<BlockSpec> block_specs(const BaseCategory& base, const std::vector<Word>& entries,
                                          std::size_t n_source, const Recollement& r) {
  std::vector<BlockSpec> out(r.block_count());
  for (auto& b : out) b.source = b.target = base.unit();
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto& b = out[r.label(i)];
    if (i < n_source)
      b.source = base.tensor(b.source, entries[i]);
    else
      b.target = base.tensor(b.target, entries[i]);
  }
  for (auto& b : out) b.dim = base.hom_dim(b.source, b.target);
  return out;
}

inline std::size_t product_dim(const std::vector<BlockSpec>& blocks) {
  std::size_t n = 1;
  for (const auto& b : blocks) n *= b.dim;
  return n;
}

namespace detail {

struct BlockRef {
  std::size_t input = 0, block = 0;
};

// One factor of a contraction: reads up to two input blocks, applies a bilinear table,
// writes to an output block or (without one) to the scalar.
struct Link {
  std::optional<BlockRef> first, second;
  std::optional<std::size_t> out;
  const StructureTable* table = nullptr;  // nullptr passes `first` through unchanged
};

template <class V>
struct InputTensor {
  const std::vector<V>* values = nullptr;
  std::vector<std::size_t> dims;
};

inline std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

template <class V>
void contract(const std::vector<InputTensor<V>>& inputs, const std::vector<Link>& links,
              const std::vector<std::size_t>& out_dims, const V& coeff, std::vector<V>& out) {
  if (is_zero(coeff)) return;
  struct Nonzero {
    const V* value;
    std::vector<std::uint32_t> idx;
  };
  std::vector<std::vector<Nonzero>> nz(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const auto& in = inputs[k];
    for (std::size_t flat = 0; flat < in.values->size(); ++flat) {
      if (is_zero((*in.values)[flat])) continue;
      std::vector<std::uint32_t> idx(in.dims.size());
      std::size_t rest = flat;
      for (std::size_t b = in.dims.size(); b-- > 0;) {
        idx[b] = static_cast<std::uint32_t>(rest % in.dims[b]);
        rest /= in.dims[b];
      }
      nz[k].push_back({&(*in.values)[flat], std::move(idx)});
    }
    if (nz[k].empty()) return;
  }
  auto out_strides = strides_of(out_dims);
  std::vector<const Nonzero*> chosen(inputs.size());
  std::vector<const std::vector<std::pair<std::uint32_t, Rational>>*> lists(links.size());
  std::vector<std::uint32_t> pass_index(links.size());

  auto index_of = [&](const std::optional<BlockRef>& ref) -> std::uint32_t {
    return ref ? chosen[ref->input]->idx[ref->block] : 0;
  };

  auto emit = [&](const V& scale) {
    for (std::size_t l = 0; l < links.size(); ++l) {
      if (links[l].table == nullptr) {
        lists[l] = nullptr;
        pass_index[l] = index_of(links[l].first);
      } else {
        lists[l] = &links[l].table->at(index_of(links[l].first), index_of(links[l].second));
        if (lists[l]->empty()) return;
      }
    }
    // Depth-first walk over the product of the sparse link outputs.
    std::vector<std::size_t> pos(links.size(), 0);
    std::vector<Rational> prod(links.size() + 1);
    std::vector<std::size_t> acc(links.size() + 1, 0);
    prod[0] = 1;
    std::size_t depth = 0;
    while (true) {
      if (depth == links.size()) {
        out[acc[depth]] += scale * prod[depth];
        if (depth == 0) return;
        --depth;
        ++pos[depth];
        continue;
      }
      std::size_t len = lists[depth] ? lists[depth]->size() : 1;
      if (pos[depth] >= len) {
        pos[depth] = 0;
        if (depth == 0) return;
        --depth;
        ++pos[depth];
        continue;
      }
      std::uint32_t o;
      if (lists[depth]) {
        const auto& [k, c] = (*lists[depth])[pos[depth]];
        o = k;
        prod[depth + 1] = prod[depth] * c;
      } else {
        o = pass_index[depth];
        prod[depth + 1] = prod[depth];
      }
      acc[depth + 1] = acc[depth] + (links[depth].out ? o * out_strides[*links[depth].out] : 0);
      ++depth;
    }
  };

  // Iterate over the product of nonzero entries of all inputs.
  std::vector<std::size_t> it(inputs.size(), 0);
  while (true) {
    V scale = coeff;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      chosen[k] = &nz[k][it[k]];
      scale *= *chosen[k]->value;
    }
    emit(scale);
    std::size_t k = inputs.size();
    while (k > 0) {
      --k;
      if (++it[k] < nz[k].size()) break;
      it[k] = 0;
      if (k == 0) return;
    }
    if (inputs.empty()) return;
  }
}

inline std::vector<Rational> kron_vectors(const std::vector<std::vector<Rational>>& factors) {
  std::vector<Rational> out{Rational(1)};
  for (const auto& f : factors) {
    std::vector<Rational> next(out.size() * f.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      if (sgn(out[i]) != 0)
        for (std::size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = out[i] * f[j];
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

template <RankContext Rank>
class Morphism {
 public:
  using value_type = typename Rank::value_type;
  using Coeffs = std::vector<value_type>;

  Morphism(BasePtr base, Rank rank, Object source, Object target)
      : base_(std::move(base)), rank_(std::move(rank)), source_(std::move(source)), target_(std::move(target)) {
    if (!base_) throw ArgumentError("morphism needs a base category");
  }

  const BaseCategory& base() const { return *base_; }
  const BasePtr& base_ptr() const { return base_; }
  const Rank& rank() const { return rank_; }
  const Object& source() const { return source_; }
  const Object& target() const { return target_; }
  const std::map<Recollement, Coeffs>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  std::vector<std::size_t> sizes() const {
    auto s = source_.sizes();
    auto t = target_.sizes();
    s.insert(s.end(), t.begin(), t.end());
    return s;
  }
  std::vector<Word> entries() const {
    auto e = source_.flat_entries();
    auto t = target_.flat_entries();
    e.insert(e.end(), t.begin(), t.end());
    return e;
  }
  std::vector<BlockSpec> layout(const Recollement& r) const {
    return block_specs(*base_, entries(), source_.element_count(), r);
  }

  void add(const Recollement& r, const Coeffs& v) {
    if (r.sizes() != sizes()) throw ArgumentError("recollement does not match the source and target families");
    auto spec = layout(r);
    if (v.size() != product_dim(spec)) throw ArgumentError("coefficient vector has the wrong dimension");
    auto it = comps_.find(r);
    if (it == comps_.end()) {
      bool nonzero = false;
      for (const auto& x : v)
        if (!interpcat::is_zero(x)) nonzero = true;
      if (nonzero) comps_.emplace(r, v);
      return;
    }
    bool nonzero = false;
    for (std::size_t k = 0; k < v.size(); ++k) {
      it->second[k] += v[k];
      if (!interpcat::is_zero(it->second[k])) nonzero = true;
    }
    if (!nonzero) comps_.erase(it);
  }

  Coeffs component(const Recollement& r) const {
    auto it = comps_.find(r);
    if (it != comps_.end()) return it->second;
    return Coeffs(product_dim(layout(r)));
  }

  Morphism& operator+=(const Morphism& o) {
    check_parallel(o);
    for (const auto& [r, v] : o.comps_) add(r, v);
    return *this;
  }
  Morphism& operator-=(const Morphism& o) {
    check_parallel(o);
    for (const auto& [r, v] : o.comps_) {
      Coeffs neg = v;
      for (auto& x : neg) x = value_type(0) - x;
      add(r, neg);
    }
    return *this;
  }
  Morphism& operator*=(const value_type& s) {
    if (interpcat::is_zero(s)) {
      comps_.clear();
      return *this;
    }
    for (auto& [r, v] : comps_)
      for (auto& x : v) x *= s;
    return *this;
  }
  friend Morphism operator+(Morphism a, const Morphism& b) { return a += b; }
  friend Morphism operator-(Morphism a, const Morphism& b) { return a -= b; }
  friend Morphism operator*(const value_type& s, Morphism a) { return a *= s; }

  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.base_ == b.base_ && a.rank_ == b.rank_ && a.source_ == b.source_ && a.target_ == b.target_ &&
           a.comps_ == b.comps_;
  }

  void check_parallel(const Morphism& o) const {
    if (base_ != o.base_) throw ArgumentError("morphisms over different base categories");
    if (!(rank_ == o.rank_)) throw ArgumentError("morphisms in different rank contexts");
    if (!(source_ == o.source_) || !(target_ == o.target_)) throw ArgumentError("morphisms are not parallel");
  }

 private:
  BasePtr base_;
  Rank rank_;
  Object source_, target_;
  std::map<Recollement, Coeffs> comps_;
};

// One line per nonzero component: "recollement: c0 c1 ...".
template <RankContext Rank>
std::string describe(const Morphism<Rank>& f) {
  std::string s = object_to_string(f.base(), f.source()) + " -> " + object_to_string(f.base(), f.target()) + " @ " +
                  f.rank().describe() + "\n";
  for (const auto& [r, v] : f.components()) {
    s += "  " + r.to_string() + ":";
    for (const auto& x : v) s += " " + to_string(x);
    s += "\n";
  }
  return s;
}

using SymbolicMorphism = Morphism<SymbolicRank>;
using SpecializedMorphism = Morphism<SpecializedRank>;

template <RankContext Rank>
Morphism<Rank> zero_morphism(BasePtr base, Rank rank, Object a, Object b) {
  return Morphism<Rank>(std::move(base), std::move(rank), std::move(a), std::move(b));
}

template <class V>
std::vector<V> lift_vector(const std::vector<Rational>& v) {
  return std::vector<V>(v.begin(), v.end());
}

inline std::vector<std::size_t> concat_sizes(const Object& a, const Object& b) {
  auto s = a.sizes();
  auto t = b.sizes();
  s.insert(s.end(), t.begin(), t.end());
  return s;
}

// dim Hom(A, B): sum over recollements of the products of base hom dimensions.
inline std::size_t hom_dimension(const BaseCategory& base, const Object& a, const Object& b) {
  auto entries = a.flat_entries();
  auto t = b.flat_entries();
  entries.insert(entries.end(), t.begin(), t.end());
  std::size_t total = 0;
  for (const auto& r : recollements(concat_sizes(a, b)))
    total += product_dim(block_specs(base, entries, a.element_count(), r));
  return total;
}

// The morphism with a single basis vector in H_r.
template <RankContext Rank>
Morphism<Rank> basis_morphism(BasePtr base, Rank rank, Object a, Object b, const Recollement& r, std::size_t k) {
  Morphism<Rank> f(std::move(base), std::move(rank), std::move(a), std::move(b));
  std::vector<typename Rank::value_type> v(product_dim(f.layout(r)));
  if (k >= v.size()) throw ArgumentError("basis index out of range");
  v[k] = typename Rank::value_type(1);
  f.add(r, v);
  return f;
}

// All basis elements of Hom(A, B) in (recollement, product basis) order.
template <RankContext Rank>
std::vector<std::pair<Recollement, std::size_t>> hom_basis(const BaseCategory& base, const Object& a, const Object& b) {
  auto entries = a.flat_entries();
  auto t = b.flat_entries();
  entries.insert(entries.end(), t.begin(), t.end());
  std::vector<std::pair<Recollement, std::size_t>> out;
  for (const auto& r : recollements(concat_sizes(a, b))) {
    std::size_t d = product_dim(block_specs(base, entries, a.element_count(), r));
    for (std::size_t k = 0; k < d; ++k) out.emplace_back(r, k);
  }
  return out;
}

template <RankContext Rank>
Morphism<Rank> identity(BasePtr base, Rank rank, const Object& a) {
  Morphism<Rank> f(base, rank, a, a);
  auto sizes = a.sizes();
  auto entries = a.flat_entries();
  std::size_t n = a.element_count();
  for (const auto& q : recollements(sizes)) {
    std::vector<std::size_t> raw(2 * n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = raw[n + i] = q.label(i);
    auto r = Recollement::from_labels(concat_sizes(a, a), raw);
    auto spec = f.layout(r);
    std::vector<std::vector<Rational>> parts;
    for (const auto& b : spec) parts.push_back(base->identity(b.source));
    f.add(r, lift_vector<typename Rank::value_type>(detail::kron_vectors(parts)));
  }
  return f;
}

namespace detail {

template <RankContext Rank>
void check_composable(const Morphism<Rank>& psi, const Morphism<Rank>& phi) {
  if (phi.base_ptr() != psi.base_ptr()) throw ArgumentError("morphisms over different base categories");
  if (!(phi.rank() == psi.rank())) throw ArgumentError("morphisms in different rank contexts");
  if (!(phi.target() == psi.source())) throw ArgumentError("target of the first map differs from source of the second");
}

// Polynomial inputs are split into rational slices by degree, so the inner loop stays rational.
inline void contract(const std::vector<InputTensor<RankPolynomial>>& inputs, const std::vector<Link>& links,
                     const std::vector<std::size_t>& out_dims, const RankPolynomial& coeff,
                     std::vector<RankPolynomial>& out) {
  if (coeff.is_zero()) return;
  std::vector<std::vector<std::vector<Rational>>> slices(inputs.size());
  std::vector<std::vector<std::size_t>> live(inputs.size());  // degrees with a nonzero slice
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const auto& vals = *inputs[k].values;
    long top = -1;
    for (const auto& p : vals) top = std::max(top, p.degree());
    if (top < 0) return;
    slices[k].assign(static_cast<std::size_t>(top) + 1, std::vector<Rational>(vals.size()));
    std::vector<char> used(slices[k].size(), 0);
    for (std::size_t i = 0; i < vals.size(); ++i)
      for (std::size_t d = 0; d < vals[i].coefficients().size(); ++d)
        if (sgn(vals[i].coefficients()[d]) != 0) {
          slices[k][d][i] = vals[i].coefficients()[d];
          used[d] = 1;
        }
    for (std::size_t d = 0; d < used.size(); ++d)
      if (used[d]) live[k].push_back(d);
  }
  std::map<std::size_t, std::vector<Rational>> by_degree;
  std::vector<std::size_t> it(inputs.size(), 0);
  std::vector<InputTensor<Rational>> rin(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) rin[k].dims = inputs[k].dims;
  while (true) {
    std::size_t deg = 0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      std::size_t d = live[k][it[k]];
      rin[k].values = &slices[k][d];
      deg += d;
    }
    auto& acc = by_degree[deg];
    if (acc.empty()) acc.assign(out.size(), Rational(0));
    contract(rin, links, out_dims, Rational(1), acc);
    std::size_t k = inputs.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++it[k] < live[k].size()) {
        done = false;
        break;
      }
      it[k] = 0;
    }
    if (done) break;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<Rational> c;
    for (const auto& [d, acc] : by_degree)
      if (sgn(acc[i]) != 0) {
        if (c.size() <= d) c.resize(d + 1);
        c[d] = acc[i];
      }
    if (!c.empty()) out[i] += coeff * RankPolynomial::from_coefficients(std::move(c));
  }
}


// Contraction of X in H_r and Y in H_s along a fiber u of (r, s); result lives in H_w, w = u restricted to A, C.
template <class V>
std::pair<Recollement, std::vector<V>> contract_fiber(const BaseCategory& base, const std::vector<Word>& entries,
                                                      std::size_t a_fac, std::size_t m_fac, std::size_t c_fac,
                                                      std::size_t n_a, std::size_t n_m, const Recollement& u,
                                                      const std::vector<V>& x, const std::vector<BlockSpec>& r_spec,
                                                      const std::vector<V>& y, const std::vector<BlockSpec>& s_spec,
                                                      const V& coeff) {
  std::vector<std::size_t> ac = factor_range(0, a_fac);
  for (std::size_t f = a_fac + m_fac; f < a_fac + m_fac + c_fac; ++f) ac.push_back(f);
  auto to_r = restrict_to(u, factor_range(0, a_fac + m_fac));
  auto to_s = restrict_to(u, factor_range(a_fac, a_fac + m_fac + c_fac));
  auto to_w = restrict_to(u, ac);
  std::size_t nb = u.block_count();
  std::vector<Word> src(nb, base.unit()), mid(nb, base.unit()), tgt(nb, base.unit());
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto b = u.label(i);
    auto& w = i < n_a ? src[b] : i < n_a + n_m ? mid[b] : tgt[b];
    w = base.tensor(w, entries[i]);
  }
  std::vector<Link> links(nb);
  std::vector<std::size_t> out_dims(to_w.result.block_count());
  for (std::size_t b = 0; b < nb; ++b) {
    if (to_r.block_map[b]) links[b].first = BlockRef{0, *to_r.block_map[b]};
    if (to_s.block_map[b]) links[b].second = BlockRef{1, *to_s.block_map[b]};
    links[b].out = to_w.block_map[b];
    links[b].table = &base.composition(src[b], mid[b], tgt[b]);
    if (links[b].out) out_dims[*links[b].out] = links[b].table->out_dim;
  }
  std::size_t total = 1;
  for (auto d : out_dims) total *= d;
  std::vector<V> out(total);
  std::vector<InputTensor<V>> inputs(2);
  inputs[0].values = &x;
  for (const auto& b : r_spec) inputs[0].dims.push_back(b.dim);
  inputs[1].values = &y;
  for (const auto& b : s_spec) inputs[1].dims.push_back(b.dim);
  contract(inputs, links, out_dims, coeff, out);
  return {std::move(to_w.result), std::move(out)};
}

}  // namespace detail

// psi o phi.
template <RankContext Rank>
Morphism<Rank> compose(const Morphism<Rank>& psi, const Morphism<Rank>& phi) {
  detail::check_composable(psi, phi);
  const auto& base = phi.base();
  Morphism<Rank> out(phi.base_ptr(), phi.rank(), phi.source(), psi.target());
  std::size_t a_fac = phi.source().factor_count(), m_fac = phi.target().factor_count(),
              c_fac = psi.target().factor_count();
  std::size_t n_a = phi.source().element_count(), n_m = phi.target().element_count();
  auto entries = phi.entries();
  auto c_entries = psi.target().flat_entries();
  entries.insert(entries.end(), c_entries.begin(), c_entries.end());
  for (const auto& [r, x] : phi.components()) {
    auto r_spec = phi.layout(r);
    for (const auto& [s, y] : psi.components()) {
      auto s_spec = psi.layout(s);
      for (const auto& u : enumerate_compose_fibers(r, s, m_fac)) {
        std::size_t w_blocks = 0;
        {
          std::vector<char> seen(u.block_count(), 0);
          for (std::size_t i = 0; i < u.size(); ++i)
            if ((i < n_a || i >= n_a + n_m) && !seen[u.label(i)]) {
              seen[u.label(i)] = 1;
              ++w_blocks;
            }
        }
        auto coeff = phi.rank().falling(w_blocks, u.block_count());
        auto [w, v] = detail::contract_fiber(base, entries, a_fac, m_fac, c_fac, n_a, n_m, u, x, r_spec, y, s_spec,
                                             typename Rank::value_type(coeff));
        out.add(w, v);
      }
    }
  }
  return out;
}

template <RankContext Rank>
Morphism<Rank> tensor(const Morphism<Rank>& f, const Morphism<Rank>& g) {
  if (f.base_ptr() != g.base_ptr()) throw ArgumentError("morphisms over different base categories");
  if (!(f.rank() == g.rank())) throw ArgumentError("morphisms in different rank contexts");
  const auto& base = f.base();
  Morphism<Rank> out(f.base_ptr(), f.rank(), f.source() * g.source(), f.target() * g.target());
  std::size_t a = f.source().factor_count(), b = f.target().factor_count(), c = g.source().factor_count(),
              d = g.target().factor_count();
  std::vector<std::size_t> rf = factor_range(0, a), sf = factor_range(a, a + c);
  for (std::size_t k = 0; k < b; ++k) rf.push_back(a + c + k);
  for (std::size_t k = 0; k < d; ++k) sf.push_back(a + c + b + k);
  auto out_entries = out.entries();
  std::size_t n_src = out.source().element_count();
  for (const auto& [r, x] : f.components()) {
    auto r_spec = f.layout(r);
    for (const auto& [s, y] : g.components()) {
      auto s_spec = g.layout(s);
      for (const auto& u : enumerate_tensor_fibers(r, a, s, c)) {
        auto to_r = restrict_to(u, rf);
        auto to_s = restrict_to(u, sf);
        auto u_spec = block_specs(base, out_entries, n_src, u);
        std::vector<detail::Link> links(u.block_count());
        std::vector<std::size_t> out_dims(u.block_count());
        for (std::size_t blk = 0; blk < u.block_count(); ++blk) {
          Word a_src = base.unit(), a_tgt = base.unit(), c_src = base.unit(), c_tgt = base.unit();
          if (to_r.block_map[blk]) {
            links[blk].first = detail::BlockRef{0, *to_r.block_map[blk]};
            a_src = r_spec[*to_r.block_map[blk]].source;
            a_tgt = r_spec[*to_r.block_map[blk]].target;
          }
          if (to_s.block_map[blk]) {
            links[blk].second = detail::BlockRef{1, *to_s.block_map[blk]};
            c_src = s_spec[*to_s.block_map[blk]].source;
            c_tgt = s_spec[*to_s.block_map[blk]].target;
          }
          links[blk].out = blk;
          links[blk].table = &base.tensor_table(a_src, a_tgt, c_src, c_tgt);
          out_dims[blk] = u_spec[blk].dim;
        }
        std::vector<typename Rank::value_type> v(product_dim(u_spec));
        std::vector<detail::InputTensor<typename Rank::value_type>> inputs(2);
        inputs[0].values = &x;
        for (const auto& bs : r_spec) inputs[0].dims.push_back(bs.dim);
        inputs[1].values = &y;
        for (const auto& bs : s_spec) inputs[1].dims.push_back(bs.dim);
        detail::contract(inputs, links, out_dims, typename Rank::value_type(1), v);
        out.add(u, v);
      }
    }
  }
  return out;
}

namespace detail {

// Morphism A x B -> B x A (or its inverse) built blockwise from base braidings.
template <RankContext Rank>
Morphism<Rank> braiding_impl(BasePtr base, Rank rank, const Object& a, const Object& b, bool inverse) {
  Object src = inverse ? b * a : a * b;
  Object tgt = inverse ? a * b : b * a;
  Morphism<Rank> f(base, rank, src, tgt);
  std::size_t na = a.element_count(), nb = b.element_count();
  auto ea = a.flat_entries(), eb = b.flat_entries();
  for (const auto& q : recollements(concat_sizes(a, b))) {
    // q labels the elements of A then B; copy the labels onto both sides.
    std::vector<std::size_t> raw;
    auto push_a = [&] {
      for (std::size_t i = 0; i < na; ++i) raw.push_back(q.label(i));
    };
    auto push_b = [&] {
      for (std::size_t i = 0; i < nb; ++i) raw.push_back(q.label(na + i));
    };
    if (inverse) {
      push_b();
      push_a();
      push_a();
      push_b();
    } else {
      push_a();
      push_b();
      push_b();
      push_a();
    }
    auto r = Recollement::from_labels(f.sizes(), raw);
    // Block words for each q-block, split into its A part and B part.
    std::vector<Word> wa(q.block_count(), base->unit()), wb(q.block_count(), base->unit());
    for (std::size_t i = 0; i < na; ++i) wa[q.label(i)] = base->tensor(wa[q.label(i)], ea[i]);
    for (std::size_t i = 0; i < nb; ++i) wb[q.label(na + i)] = base->tensor(wb[q.label(na + i)], eb[i]);
    // The canonical labels of r follow first occurrence among source elements.
    std::vector<std::size_t> order(q.block_count());
    for (std::size_t i = 0; i < na + nb; ++i) order[r.label(i)] = raw[i];
    std::vector<std::vector<Rational>> parts;
    for (std::size_t k = 0; k < r.block_count(); ++k) {
      auto qb = order[k];
      parts.push_back(inverse ? base->braiding_inverse(wa[qb], wb[qb]) : base->braiding(wa[qb], wb[qb]));
    }
    f.add(r, lift_vector<typename Rank::value_type>(kron_vectors(parts)));
  }
  return f;
}

template <RankContext Rank>
Morphism<Rank> single_block(BasePtr base, Rank rank, Object a, Object b, const std::vector<Rational>& coords) {
  Morphism<Rank> f(base, rank, std::move(a), std::move(b));
  std::vector<std::size_t> raw(f.source().element_count() + f.target().element_count(), 0);
  f.add(Recollement::from_labels(f.sizes(), raw), lift_vector<typename Rank::value_type>(coords));
  return f;
}

}  // namespace detail

template <RankContext Rank>
Morphism<Rank> braiding(BasePtr base, Rank rank, const Object& a, const Object& b) {
  return detail::braiding_impl(std::move(base), std::move(rank), a, b, false);
}

// Inverse of braiding(a, b): B x A -> A x B.
template <RankContext Rank>
Morphism<Rank> braiding_inverse(BasePtr base, Rank rank, const Object& a, const Object& b) {
  return detail::braiding_impl(std::move(base), std::move(rank), a, b, true);
}

// <phi> for a base morphism phi: U -> V.
template <RankContext Rank>
Morphism<Rank> gen(BasePtr base, Rank rank, const Word& u, const Word& v, const std::vector<Rational>& coords) {
  if (coords.size() != base->hom_dim(u, v)) throw ArgumentError("coordinate vector has the wrong dimension");
  return detail::single_block(base, rank, Object::bracket({u}), Object::bracket({v}), coords);
}

// <U> x <V> -> <U x V>.
template <RankContext Rank>
Morphism<Rank> mu(BasePtr base, Rank rank, const Word& u, const Word& v) {
  Word uv = base->tensor(u, v);
  auto id = base->identity(uv);
  return detail::single_block(base, rank, Object::bracket({u}) * Object::bracket({v}), Object::bracket({uv}), id);
}

// <U x V> -> <U> x <V>.
template <RankContext Rank>
Morphism<Rank> delta(BasePtr base, Rank rank, const Word& u, const Word& v) {
  Word uv = base->tensor(u, v);
  auto id = base->identity(uv);
  return detail::single_block(base, rank, Object::bracket({uv}), Object::bracket({u}) * Object::bracket({v}), id);
}

template <RankContext Rank>
Morphism<Rank> iota(BasePtr base, Rank rank) {
  return detail::single_block(base, rank, Object(), Object::bracket({base->unit()}), {Rational(1)});
}

template <RankContext Rank>
Morphism<Rank> eps(BasePtr base, Rank rank) {
  return detail::single_block(base, rank, Object::bracket({base->unit()}), Object(), {Rational(1)});
}

inline Morphism<SpecializedRank> specialize(const Morphism<SymbolicRank>& f, const Rational& t0) {
  Morphism<SpecializedRank> out(f.base_ptr(), SpecializedRank{t0}, f.source(), f.target());
  for (const auto& [r, v] : f.components()) {
    std::vector<Rational> w;
    w.reserve(v.size());
    for (const auto& p : v) w.push_back(p(t0));
    out.add(r, w);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Double-bracket basis.

// Coordinates with respect to the double-bracket basis; kept as a separate type so they
// never mix with bracket coordinates.
template <RankContext Rank>
class DoubleBracket {
 public:
  explicit DoubleBracket(Morphism<Rank> coords) : coords_(std::move(coords)) {}
  const Morphism<Rank>& coordinates() const { return coords_; }
  const Object& source() const { return coords_.source(); }
  const Object& target() const { return coords_.target(); }
  friend bool operator==(const DoubleBracket&, const DoubleBracket&) = default;

 private:
  Morphism<Rank> coords_;
};

namespace detail {

template <RankContext Rank>
void check_single_brackets(const Morphism<Rank>& f) {
  if (f.source().factor_count() > 1 || f.target().factor_count() > 1)
    throw ArgumentError("the double-bracket basis is defined for maps between single brackets");
}

// Blocks of r made only of source elements, and those made only of target elements.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> one_sided_blocks(const Recollement& r,
                                                                                      std::size_t n_source) {
  std::vector<char> has_s(r.block_count(), 0), has_t(r.block_count(), 0);
  for (std::size_t i = 0; i < r.size(); ++i) (i < n_source ? has_s : has_t)[r.label(i)] = 1;
  std::vector<std::size_t> s_only, t_only;
  for (std::size_t b = 0; b < r.block_count(); ++b) {
    if (has_s[b] && !has_t[b]) s_only.push_back(b);
    if (has_t[b] && !has_s[b]) t_only.push_back(b);
  }
  return {s_only, t_only};
}

// Merges source-only block a with target-only block b for each listed pair, composing
// Hom(U_a, 1) x Hom(1, V_b) -> Hom(U_a, V_b).
template <class V>
std::pair<Recollement, std::vector<V>> merge_restrict(const BaseCategory& base, const std::vector<BlockSpec>& spec,
                                                      const Recollement& r, const std::vector<V>& x,
                                                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  Recollement s = merge_blocks(r, pairs);
  // r-block -> s-block, via any element.
  std::vector<std::size_t> to_s(r.block_count());
  for (std::size_t i = 0; i < r.size(); ++i) to_s[r.label(i)] = s.label(i);
  std::vector<Link> links;
  std::vector<std::size_t> out_dims(s.block_count());
  std::vector<char> partner(r.block_count(), 0);
  for (auto [a, b] : pairs) {
    partner[b] = 1;
    Link l;
    l.first = BlockRef{0, a};
    l.second = BlockRef{0, b};
    l.out = to_s[a];
    l.table = &base.composition(spec[a].source, base.unit(), spec[b].target);
    out_dims[to_s[a]] = l.table->out_dim;
    links.push_back(l);
    partner[a] = 1;
  }
  for (std::size_t b = 0; b < r.block_count(); ++b) {
    if (partner[b]) continue;
    Link l;
    l.first = BlockRef{0, b};
    l.out = to_s[b];
    out_dims[to_s[b]] = spec[b].dim;
    links.push_back(l);
  }
  std::size_t total = 1;
  for (auto d : out_dims) total *= d;
  std::vector<V> out(total);
  std::vector<InputTensor<V>> inputs(1);
  inputs[0].values = &x;
  for (const auto& b : spec) inputs[0].dims.push_back(b.dim);
  contract(inputs, links, out_dims, V(1), out);
  return {std::move(s), std::move(out)};
}

template <RankContext Rank>
Morphism<Rank> change_basis(const Morphism<Rank>& f, bool alternate_signs) {
  check_single_brackets(f);
  Morphism<Rank> out(f.base_ptr(), f.rank(), f.source(), f.target());
  std::size_t ns = f.source().element_count();
  for (const auto& [r, x] : f.components()) {
    auto spec = f.layout(r);
    auto [s_only, t_only] = one_sided_blocks(r, ns);
    for (const auto& m : partial_matchings(s_only, t_only)) {
      auto [s, v] = merge_restrict(f.base(), spec, r, x, m);
      if (alternate_signs && m.size() % 2 == 1)
        for (auto& c : v) c = typename Rank::value_type(0) - c;
      out.add(s, v);
    }
  }
  return out;
}

}  // namespace detail

template <RankContext Rank>
DoubleBracket<Rank> to_double_bracket(const Morphism<Rank>& f) {
  return DoubleBracket<Rank>(detail::change_basis(f, true));
}

template <RankContext Rank>
Morphism<Rank> from_double_bracket(const DoubleBracket<Rank>& d) {
  return detail::change_basis(d.coordinates(), false);
}

// Composite of two maps given in double-bracket coordinates, computed directly in that basis.
template <RankContext Rank>
DoubleBracket<Rank> compose_double_bracket(const DoubleBracket<Rank>& psi_d, const DoubleBracket<Rank>& phi_d) {
  const auto& phi = phi_d.coordinates();
  const auto& psi = psi_d.coordinates();
  detail::check_single_brackets(phi);
  detail::check_single_brackets(psi);
  detail::check_composable(psi, phi);
  const auto& base = phi.base();
  Morphism<Rank> out(phi.base_ptr(), phi.rank(), phi.source(), psi.target());
  std::size_t a_fac = phi.source().factor_count(), m_fac = phi.target().factor_count(),
              c_fac = psi.target().factor_count();
  std::size_t n_a = phi.source().element_count(), n_m = phi.target().element_count();
  auto entries = phi.entries();
  auto c_entries = psi.target().flat_entries();
  entries.insert(entries.end(), c_entries.begin(), c_entries.end());
  for (const auto& [r, x] : phi.components()) {
    auto r_spec = phi.layout(r);
    for (const auto& [s, y] : psi.components()) {
      auto s_spec = psi.layout(s);
      auto closure = generated_closure(r, s, m_fac);
      if (!closure) continue;
      // J1: middle elements linked to a source element by r or to a target element by s.
      std::vector<char> r_has_src(r.block_count(), 0), s_has_tgt(s.block_count(), 0);
      for (std::size_t i = 0; i < n_a; ++i) r_has_src[r.label(i)] = 1;
      for (std::size_t i = n_m; i < s.size(); ++i) s_has_tgt[s.label(i)] = 1;
      std::size_t j1 = 0;
      for (std::size_t j = 0; j < n_m; ++j)
        if (r_has_src[r.label(n_a + j)] || s_has_tgt[s.label(j)]) ++j1;
      auto coeff = phi.rank().falling(j1, n_m);
      auto [w, xi] = detail::contract_fiber(base, entries, a_fac, m_fac, c_fac, n_a, n_m, *closure, x, r_spec, y,
                                            s_spec, typename Rank::value_type(coeff));
      // Source-only blocks of w that came through the middle, and target-only ones likewise.
      std::vector<char> touches_a(closure->block_count(), 0), touches_m(closure->block_count(), 0),
          touches_c(closure->block_count(), 0);
      for (std::size_t i = 0; i < closure->size(); ++i)
        (i < n_a ? touches_a : i < n_a + n_m ? touches_m : touches_c)[closure->label(i)] = 1;
      std::vector<std::size_t> to_w(closure->block_count(), SIZE_MAX);
      {
        std::vector<std::size_t> ac = factor_range(0, a_fac);
        for (std::size_t f = a_fac + m_fac; f < a_fac + m_fac + c_fac; ++f) ac.push_back(f);
        auto res = restrict_to(*closure, ac);
        for (std::size_t b = 0; b < closure->block_count(); ++b)
          if (res.block_map[b]) to_w[b] = *res.block_map[b];
      }
      std::vector<std::size_t> left, right;
      for (std::size_t b = 0; b < closure->block_count(); ++b) {
        if (!touches_m[b]) continue;
        if (touches_a[b] && !touches_c[b]) left.push_back(to_w[b]);
        if (touches_c[b] && !touches_a[b]) right.push_back(to_w[b]);
      }
      auto w_spec = block_specs(base, [&] {
        auto e = phi.source().flat_entries();
        e.insert(e.end(), c_entries.begin(), c_entries.end());
        return e;
      }(), n_a, w);
      for (const auto& m : partial_matchings(left, right)) {
        auto [u, v] = detail::merge_restrict(base, w_spec, w, xi, m);
        if (m.size() % 2 == 1)
          for (auto& c : v) c = typename Rank::value_type(0) - c;
        out.add(u, v);
      }
    }
  }
  return DoubleBracket<Rank>(std::move(out));
}

// Basis of the span of double-bracket basis elements supported on recollements with at least d blocks,
// expressed in bracket coordinates.
template <RankContext Rank>
std::vector<Morphism<Rank>> filtration_span(BasePtr base, Rank rank, const Object& a, const Object& b, std::size_t d) {
  std::vector<Morphism<Rank>> out;
  for (const auto& [r, k] : hom_basis<Rank>(*base, a, b)) {
    if (r.block_count() < d) continue;
    out.push_back(from_double_bracket(DoubleBracket<Rank>(basis_morphism(base, rank, a, b, r, k))));
  }
  return out;
}

template <RankContext Rank>
bool in_filtration(const Morphism<Rank>& f, std::size_t d) {
  auto dd = to_double_bracket(f);
  for (const auto& [r, v] : dd.coordinates().components())
    if (r.block_count() < d) return false;
  return true;
}

// ---------------------------------------------------------------------------------------------
// Star product with a family W of base objects: <U_I> |-> <U_I, W> at rank t + #W, and on morphisms
// the inclusion that pairs each appended entry with itself through the identity.

template <RankContext Rank>
Rank shifted_rank(const Rank& rank, std::size_t d2) {
  if constexpr (std::is_same_v<Rank, SpecializedRank>) {
    return SpecializedRank{rank.t0 + Rational(static_cast<long>(d2))};
  } else {
    return rank;
  }
}

inline Object star_object(const Object& a, const std::vector<Word>& w) {
  Bracket b = a.as_bracket();
  b.entries.insert(b.entries.end(), w.begin(), w.end());
  return Object({b});
}

template <RankContext Rank>
Morphism<Rank> star_product(const Morphism<Rank>& f, const std::vector<Word>& w) {
  detail::check_single_brackets(f);
  const auto& base = f.base();
  Rank rank = shifted_rank(f.rank(), w.size());
  Morphism<Rank> out(f.base_ptr(), rank, star_object(f.source(), w), star_object(f.target(), w));
  std::size_t ns = f.source().element_count(), nt = f.target().element_count(), d2 = w.size();
  std::vector<std::vector<Rational>> ids;
  for (const auto& x : w) ids.push_back(base.identity(x));
  auto id_part = detail::kron_vectors(ids);
  for (const auto& [r, x] : f.components()) {
    std::vector<std::size_t> raw;
    std::size_t nb = r.block_count();
    for (std::size_t i = 0; i < ns; ++i) raw.push_back(r.label(i));
    for (std::size_t k = 0; k < d2; ++k) raw.push_back(nb + k);
    for (std::size_t i = 0; i < nt; ++i) raw.push_back(r.label(ns + i));
    for (std::size_t k = 0; k < d2; ++k) raw.push_back(nb + k);
    auto r2 = Recollement::from_labels(out.sizes(), raw);
    // Appended blocks are labelled after the blocks of r unless r has target-only blocks, which
    // then move behind them; compute the permutation from old to new labels.
    std::vector<std::size_t> new_label(nb + d2);
    for (std::size_t i = 0; i < raw.size(); ++i) new_label[raw[i]] = r2.label(i);
    std::vector<typename Rank::value_type> v(x.size() * id_part.size());
    std::vector<std::size_t> dims_old;
    for (const auto& b : f.layout(r)) dims_old.push_back(b.dim);
    for (const auto& x_w : w) dims_old.push_back(base.hom_dim(x_w, x_w));
    std::vector<std::size_t> dims_new(nb + d2);
    for (std::size_t k = 0; k < nb + d2; ++k) dims_new[new_label[k]] = dims_old[k];
    auto s_new = detail::strides_of(dims_new);
    for (std::size_t p = 0; p < x.size(); ++p) {
      if (is_zero(x[p])) continue;
      for (std::size_t q = 0; q < id_part.size(); ++q) {
        if (sgn(id_part[q]) == 0) continue;
        std::size_t flat = p * id_part.size() + q, pos = 0;
        for (std::size_t k = nb + d2; k-- > 0;) {
          pos += (flat % dims_old[k]) * s_new[new_label[k]];
          flat /= dims_old[k];
        }
        typename Rank::value_type c = x[p];
        if constexpr (std::is_same_v<Rank, SymbolicRank>) c = c.shifted(Rational(-static_cast<long>(d2)));
        c *= id_part[q];
        v[pos] += c;
      }
    }
    out.add(r2, v);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Restriction to the product of two interpolation categories at ranks t1, t2 with t1 + t2 = t.

// A map <U'>_{t1} (x) <U''>_{t2} -> <V'>_{t1} (x) <V''>_{t2}; components are keyed by pairs of
// recollements and store blocks of the first followed by blocks of the second.
struct SplitMorphism {
  BasePtr base;
  Rational t1, t2;
  Bracket src1, src2, tgt1, tgt2;
  std::map<std::pair<Recollement, Recollement>, std::vector<Rational>> components;

  std::vector<BlockSpec> layout(const Recollement& r1, const Recollement& r2) const {
    auto e1 = src1.entries;
    e1.insert(e1.end(), tgt1.entries.begin(), tgt1.entries.end());
    auto e2 = src2.entries;
    e2.insert(e2.end(), tgt2.entries.begin(), tgt2.entries.end());
    auto b1 = block_specs(*base, e1, src1.size(), r1);
    auto b2 = block_specs(*base, e2, src2.size(), r2);
    b1.insert(b1.end(), b2.begin(), b2.end());
    return b1;
  }

  void add(const std::pair<Recollement, Recollement>& key, const std::vector<Rational>& v) {
    auto it = components.find(key);
    if (it == components.end()) {
      for (const auto& x : v)
        if (sgn(x) != 0) {
          components.emplace(key, v);
          return;
        }
      return;
    }
    bool nonzero = false;
    for (std::size_t k = 0; k < v.size(); ++k) {
      it->second[k] += v[k];
      if (sgn(it->second[k]) != 0) nonzero = true;
    }
    if (!nonzero) components.erase(it);
  }

  friend bool operator==(const SplitMorphism& a, const SplitMorphism& b) {
    return a.base == b.base && a.t1 == b.t1 && a.t2 == b.t2 && a.src1 == b.src1 && a.src2 == b.src2 &&
           a.tgt1 == b.tgt1 && a.tgt2 == b.tgt2 && a.components == b.components;
  }
};

inline SplitMorphism compose(const SplitMorphism& g, const SplitMorphism& f) {
  if (f.base != g.base || f.t1 != g.t1 || f.t2 != g.t2 || !(f.tgt1 == g.src1) || !(f.tgt2 == g.src2))
    throw ArgumentError("split morphisms are not composable");
  const auto& base = *f.base;
  SplitMorphism out{f.base, f.t1, f.t2, f.src1, f.src2, g.tgt1, g.tgt2, {}};
  auto entries_of = [](const Bracket& a, const Bracket& b, const Bracket& c) {
    auto e = a.entries;
    e.insert(e.end(), b.entries.begin(), b.entries.end());
    e.insert(e.end(), c.entries.begin(), c.entries.end());
    return e;
  };
  auto e1 = entries_of(f.src1, f.tgt1, g.tgt1), e2 = entries_of(f.src2, f.tgt2, g.tgt2);
  auto fac = [](const Bracket& b) -> std::size_t { return b.size() ? 1 : 0; };
  for (const auto& [rk, x] : f.components) {
    auto r_spec = f.layout(rk.first, rk.second);
    for (const auto& [sk, y] : g.components) {
      auto s_spec = g.layout(sk.first, sk.second);
      auto fib1 = enumerate_compose_fibers(rk.first, sk.first, fac(f.tgt1));
      auto fib2 = enumerate_compose_fibers(rk.second, sk.second, fac(f.tgt2));
      for (const auto& u1 : fib1)
        for (const auto& u2 : fib2) {
          std::vector<detail::Link> links;
          std::vector<std::size_t> out_dims;
          Recollement w_parts[2];
          std::size_t r_off = 0, s_off = 0, w_off = 0;
          Rational coeff = 1;
          for (int side = 0; side < 2; ++side) {
            const Recollement& u = side == 0 ? u1 : u2;
            const Bracket& sa = side == 0 ? f.src1 : f.src2;
            const Bracket& sm = side == 0 ? f.tgt1 : f.tgt2;
            const Bracket& sc = side == 0 ? g.tgt1 : g.tgt2;
            const auto& entries = side == 0 ? e1 : e2;
            std::size_t a = fac(sa), m = fac(sm), c = fac(sc);
            std::size_t na = sa.size(), nm = sm.size();
            std::vector<std::size_t> ac = factor_range(0, a);
            if (c) ac.push_back(a + m);
            auto to_r = restrict_to(u, factor_range(0, a + m));
            auto to_s = restrict_to(u, factor_range(a, a + m + c));
            auto to_w = restrict_to(u, ac);
            std::size_t nb = u.block_count();
            std::vector<Word> src(nb, base.unit()), mid(nb, base.unit()), tgt(nb, base.unit());
            for (std::size_t i = 0; i < u.size(); ++i) {
              auto b = u.label(i);
              auto& wd = i < na ? src[b] : i < na + nm ? mid[b] : tgt[b];
              wd = base.tensor(wd, entries[i]);
            }
            std::size_t wb = to_w.result.block_count();
            out_dims.resize(w_off + wb);
            for (std::size_t b = 0; b < nb; ++b) {
              detail::Link l;
              if (to_r.block_map[b]) l.first = detail::BlockRef{0, r_off + *to_r.block_map[b]};
              if (to_s.block_map[b]) l.second = detail::BlockRef{1, s_off + *to_s.block_map[b]};
              if (to_w.block_map[b]) l.out = w_off + *to_w.block_map[b];
              l.table = &base.composition(src[b], mid[b], tgt[b]);
              if (l.out) out_dims[*l.out] = l.table->out_dim;
              links.push_back(l);
            }
            coeff *= falling_factorial_value(side == 0 ? f.t1 : f.t2, wb, nb);
            r_off += (side == 0 ? rk.first : rk.second).block_count();
            s_off += (side == 0 ? sk.first : sk.second).block_count();
            w_off += wb;
            w_parts[side] = to_w.result;
          }
          std::size_t total = 1;
          for (auto d : out_dims) total *= d;
          std::vector<Rational> v(total);
          std::vector<detail::InputTensor<Rational>> inputs(2);
          inputs[0].values = &x;
          for (const auto& b : r_spec) inputs[0].dims.push_back(b.dim);
          inputs[1].values = &y;
          for (const auto& b : s_spec) inputs[1].dims.push_back(b.dim);
          detail::contract(inputs, links, out_dims, coeff, v);
          out.add({w_parts[0], w_parts[1]}, v);
        }
    }
  }
  return out;
}

// Matrix over the decompositions of source and target into pairs of subfamilies; subsets are bit masks.
struct RestrictedMorphism {
  BasePtr base;
  Rational t1, t2;
  Bracket source, target;
  std::map<std::pair<std::uint32_t, std::uint32_t>, SplitMorphism> entries;  // (target mask, source mask)

  friend bool operator==(const RestrictedMorphism& a, const RestrictedMorphism& b) {
    return a.base == b.base && a.t1 == b.t1 && a.t2 == b.t2 && a.source == b.source && a.target == b.target &&
           a.entries == b.entries;
  }
};

inline std::pair<Bracket, Bracket> split_bracket(const Bracket& b, std::uint32_t mask) {
  Bracket x, y;
  for (std::size_t i = 0; i < b.size(); ++i) ((mask >> i) & 1u ? x : y).entries.push_back(b.entries[i]);
  return {x, y};
}

inline RestrictedMorphism restrict_sum(const Morphism<SpecializedRank>& f, const Rational& t1, const Rational& t2) {
  detail::check_single_brackets(f);
  if (t1 + t2 != f.rank().t0) throw ArgumentError("restriction needs t1 + t2 = t");
  Bracket src = f.source().as_bracket(), tgt = f.target().as_bracket();
  if (src.size() > 31 || tgt.size() > 31) throw ResourceError("families too large for restriction");
  RestrictedMorphism out{f.base_ptr(), t1, t2, src, tgt, {}};
  std::size_t ns = src.size(), nt = tgt.size();
  for (std::uint32_t im = 0; im < (1u << ns); ++im)
    for (std::uint32_t jm = 0; jm < (1u << nt); ++jm) {
      auto [s1, s2] = split_bracket(src, im);
      auto [g1, g2] = split_bracket(tgt, jm);
      SplitMorphism entry{f.base_ptr(), t1, t2, s1, s2, g1, g2, {}};
      auto side_of = [&](std::size_t i) {
        return i < ns ? static_cast<int>((im >> i) & 1u) : static_cast<int>((jm >> (i - ns)) & 1u);
      };
      for (const auto& [r, x] : f.components()) {
        std::vector<int> block_side(r.block_count(), -1);
        bool ok = true;
        for (std::size_t i = 0; i < r.size() && ok; ++i) {
          int s = side_of(i);
          auto& bs = block_side[r.label(i)];
          if (bs == -1)
            bs = s;
          else if (bs != s)
            ok = false;
        }
        if (!ok) continue;
        std::vector<std::size_t> raw1, raw2;
        for (std::size_t i = 0; i < r.size(); ++i) (side_of(i) ? raw1 : raw2).push_back(r.label(i));
        auto sizes_of = [](const Bracket& a, const Bracket& b) {
          std::vector<std::size_t> s;
          if (a.size()) s.push_back(a.size());
          if (b.size()) s.push_back(b.size());
          return s;
        };
        auto r1 = Recollement::from_labels(sizes_of(s1, g1), raw1);
        auto r2 = Recollement::from_labels(sizes_of(s2, g2), raw2);
        // Old block label -> output position (blocks of r1 first).
        std::vector<std::size_t> pos(r.block_count());
        {
          std::size_t k1 = 0, k2 = 0;
          for (std::size_t i = 0; i < r.size(); ++i) {
            if (side_of(i))
              pos[r.label(i)] = r1.label(k1++);
            else
              pos[r.label(i)] = r1.block_count() + r2.label(k2++);
          }
        }
        auto spec = f.layout(r);
        std::vector<detail::Link> links(r.block_count());
        std::vector<std::size_t> out_dims(r.block_count());
        for (std::size_t b = 0; b < r.block_count(); ++b) {
          links[b].first = detail::BlockRef{0, b};
          links[b].out = pos[b];
          out_dims[pos[b]] = spec[b].dim;
        }
        std::vector<Rational> v(x.size());
        std::vector<detail::InputTensor<Rational>> inputs(1);
        inputs[0].values = &x;
        for (const auto& b : spec) inputs[0].dims.push_back(b.dim);
        detail::contract(inputs, links, out_dims, Rational(1), v);
        entry.add({r1, r2}, v);
      }
      if (!entry.components.empty()) out.entries.emplace(std::make_pair(jm, im), std::move(entry));
    }
  return out;
}

inline RestrictedMorphism compose(const RestrictedMorphism& g, const RestrictedMorphism& f) {
  if (f.base != g.base || f.t1 != g.t1 || f.t2 != g.t2 || !(f.target == g.source))
    throw ArgumentError("restricted morphisms are not composable");
  RestrictedMorphism out{f.base, f.t1, f.t2, f.source, g.target, {}};
  for (const auto& [fk, fe] : f.entries)
    for (const auto& [gk, ge] : g.entries) {
      if (gk.second != fk.first) continue;
      auto key = std::make_pair(gk.first, fk.second);
      auto prod = compose(ge, fe);
      auto it = out.entries.find(key);
      if (it == out.entries.end()) {
        if (!prod.components.empty()) out.entries.emplace(key, std::move(prod));
      } else {
        for (const auto& [k, v] : prod.components) it->second.add(k, v);
        if (it->second.components.empty()) out.entries.erase(it);
      }
    }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Pushforward along a linear functor of base categories.

template <RankContext Rank>
Morphism<Rank> apply_functor(const BaseFunctor& F, const Morphism<Rank>& f) {
  detail::check_single_brackets(f);
  if (F.source != f.base_ptr()) throw ArgumentError("functor source differs from the morphism's base");
  auto map_bracket = [&](const Object& o) {
    std::vector<Word> e;
    for (const auto& w : o.flat_entries()) e.push_back(F.on_objects(w));
    return e.empty() ? Object() : Object::bracket(e);
  };
  Morphism<Rank> out(F.target, f.rank(), map_bracket(f.source()), map_bracket(f.target()));
  for (const auto& [r, x] : f.components()) {
    auto spec = f.layout(r);
    std::vector<StructureTable> tables;
    tables.reserve(spec.size());
    std::vector<std::size_t> out_dims;
    for (const auto& b : spec) {
      QMatrix m = F.on_homs(b.source, b.target);
      StructureTable t(m.cols(), 1, m.rows());
      for (std::size_t j = 0; j < m.cols(); ++j) {
        std::vector<Rational> col(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) col[i] = m(i, j);
        t.set(j, 0, col);
      }
      out_dims.push_back(m.rows());
      tables.push_back(std::move(t));
    }
    std::vector<detail::Link> links(spec.size());
    for (std::size_t b = 0; b < spec.size(); ++b) {
      links[b].first = detail::BlockRef{0, b};
      links[b].out = b;
      links[b].table = &tables[b];
    }
    std::size_t total = 1;
    for (auto d : out_dims) total *= d;
    std::vector<typename Rank::value_type> v(total);
    std::vector<detail::InputTensor<typename Rank::value_type>> inputs(1);
    inputs[0].values = &x;
    for (const auto& b : spec) inputs[0].dims.push_back(b.dim);
    detail::contract(inputs, links, out_dims, typename Rank::value_type(1), v);
    out.add(r, v);
  }
  return out;
}

}  // namespace interpcat
