#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "interp.hpp"
#include "linalg.hpp"

namespace interpcat {

// Cell model at a natural rank d: an object <U_I> becomes the direct sum, over injections of I
// into d slots, of the tensor product of slot words. Tensor products of brackets place each
// factor independently.
class WreathObject {
 public:
  WreathObject(BasePtr base, std::size_t d, Object family) : base_(std::move(base)), d_(d), family_(std::move(family)) {
    std::vector<std::uint32_t> cur;
    enumerate(0, 0, cur, std::vector<char>(d_, 0));
    std::sort(cells_.begin(), cells_.end());
  }

  std::size_t rank() const { return d_; }
  const Object& family() const { return family_; }
  const BaseCategory& base() const { return *base_; }
  // cells()[c][i] is the slot of element i (elements numbered factor by factor).
  const std::vector<std::vector<std::uint32_t>>& cells() const { return cells_; }

  std::vector<Word> slot_words(std::size_t cell) const {
    std::vector<Word> w(d_, base_->unit());
    auto entries = family_.flat_entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto& s = w[cells_[cell][i]];
      s = base_->tensor(s, entries[i]);
    }
    return w;
  }

 private:
  void enumerate(std::size_t factor, std::size_t elem, std::vector<std::uint32_t>& cur, std::vector<char> used) {
    const auto sizes = family_.sizes();
    if (factor == sizes.size()) {
      cells_.push_back(cur);
      return;
    }
    if (elem == sizes[factor]) {
      enumerate(factor + 1, 0, cur, std::vector<char>(d_, 0));
      return;
    }
    for (std::uint32_t s = 0; s < d_; ++s) {
      if (used[s]) continue;
      used[s] = 1;
      cur.push_back(s);
      enumerate(factor, elem + 1, cur, used);
      cur.pop_back();
      used[s] = 0;
    }
  }

  BasePtr base_;
  std::size_t d_;
  Object family_;
  std::vector<std::vector<std::uint32_t>> cells_;
};

// Matrix of base morphisms between cells; entry (target cell, source cell) lies in the tensor
// product over slots of Hom(source slot word, target slot word).
struct WreathMorphism {
  WreathObject source, target;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Rational>> entries;

  std::vector<std::size_t> entry_dims(std::size_t tc, std::size_t sc) const {
    auto sw = source.slot_words(sc), tw = target.slot_words(tc);
    std::vector<std::size_t> dims;
    for (std::size_t a = 0; a < sw.size(); ++a) dims.push_back(source.base().hom_dim(sw[a], tw[a]));
    return dims;
  }

  void add(std::size_t tc, std::size_t sc, const std::vector<Rational>& v) {
    auto key = std::make_pair(tc, sc);
    auto it = entries.find(key);
    if (it == entries.end()) {
      for (const auto& x : v)
        if (sgn(x) != 0) {
          entries.emplace(key, v);
          return;
        }
      return;
    }
    bool nonzero = false;
    for (std::size_t k = 0; k < v.size(); ++k) {
      it->second[k] += v[k];
      if (sgn(it->second[k]) != 0) nonzero = true;
    }
    if (!nonzero) entries.erase(it);
  }

  friend bool operator==(const WreathMorphism& a, const WreathMorphism& b) { return a.entries == b.entries; }
};

// For cells (sigma, tau), the slot -> block assignment when the slot sequence is adapted to r.
inline std::optional<std::vector<std::optional<std::size_t>>> adapted_blocks(const Recollement& r,
                                                                             const std::vector<std::uint32_t>& sigma,
                                                                             const std::vector<std::uint32_t>& tau,
                                                                             std::size_t d) {
  std::vector<std::optional<std::size_t>> slot_block(d);
  std::vector<std::size_t> count(d, 0);
  auto sizes = r.block_sizes();
  std::size_t n_src = sigma.size();
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint32_t slot = i < n_src ? sigma[i] : tau[i - n_src];
    auto b = r.label(i);
    if (slot_block[slot] && *slot_block[slot] != b) return std::nullopt;
    slot_block[slot] = b;
    ++count[slot];
  }
  for (std::size_t a = 0; a < d; ++a)
    if (slot_block[a] && count[a] != sizes[*slot_block[a]]) return std::nullopt;
  return slot_block;
}

namespace detail {

inline void add_specialized_component(WreathMorphism& out, const BaseCategory& base, const std::vector<BlockSpec>& spec,
                                      const Recollement& r, const std::vector<Rational>& x) {
  std::size_t d = out.source.rank();
  for (std::size_t tc = 0; tc < out.target.cells().size(); ++tc)
    for (std::size_t sc = 0; sc < out.source.cells().size(); ++sc) {
      auto slots = adapted_blocks(r, out.source.cells()[sc], out.target.cells()[tc], d);
      if (!slots) continue;
      std::vector<Link> links;
      std::vector<std::size_t> out_dims(d, 1);
      for (std::size_t a = 0; a < d; ++a) {
        if (!(*slots)[a]) continue;
        Link l;
        l.first = BlockRef{0, *(*slots)[a]};
        l.out = a;
        links.push_back(l);
        out_dims[a] = spec[*(*slots)[a]].dim;
      }
      std::size_t total = 1;
      for (auto x_d : out_dims) total *= x_d;
      std::vector<Rational> v(total);
      std::vector<InputTensor<Rational>> inputs(1);
      inputs[0].values = &x;
      for (const auto& b : spec) inputs[0].dims.push_back(b.dim);
      contract(inputs, links, out_dims, Rational(1), v);
      out.add(tc, sc, v);
    }
  (void)base;
}

}  // namespace detail

// Image of a symbolic morphism under the functor to the cell model at rank d.
inline WreathMorphism specialize_to_wreath(const Morphism<SymbolicRank>& f, std::size_t d) {
  WreathMorphism out{WreathObject(f.base_ptr(), d, f.source()), WreathObject(f.base_ptr(), d, f.target()), {}};
  Rational t0(static_cast<long>(d));
  for (const auto& [r, v] : f.components()) {
    if (r.block_count() > d) continue;
    std::vector<Rational> x;
    for (const auto& p : v) x.push_back(p(t0));
    detail::add_specialized_component(out, f.base(), f.layout(r), r, x);
  }
  return out;
}

inline WreathMorphism specialize_to_wreath(const Morphism<SpecializedRank>& f, std::size_t d) {
  if (f.rank().t0 != Rational(static_cast<long>(d)))
    throw ArgumentError("rank " + f.rank().t0.get_str() + " does not match the cell model rank " + std::to_string(d));
  WreathMorphism out{WreathObject(f.base_ptr(), d, f.source()), WreathObject(f.base_ptr(), d, f.target()), {}};
  for (const auto& [r, x] : f.components()) {
    if (r.block_count() > d) continue;
    detail::add_specialized_component(out, f.base(), f.layout(r), r, x);
  }
  return out;
}

// Slotwise matrix product g o f.
inline WreathMorphism compose_wreath(const WreathMorphism& g, const WreathMorphism& f) {
  if (!(f.target.family() == g.source.family()) || f.target.rank() != g.source.rank())
    throw ArgumentError("cell-model morphisms are not composable");
  const auto& base = f.source.base();
  std::size_t d = f.source.rank();
  WreathMorphism out{f.source, g.target, {}};
  for (const auto& [fk, x] : f.entries)
    for (const auto& [gk, y] : g.entries) {
      if (gk.second != fk.first) continue;
      auto sw = f.source.slot_words(fk.second), mw = f.target.slot_words(fk.first), tw = g.target.slot_words(gk.first);
      std::vector<detail::Link> links(d);
      std::vector<std::size_t> out_dims(d);
      for (std::size_t a = 0; a < d; ++a) {
        links[a].first = detail::BlockRef{0, a};
        links[a].second = detail::BlockRef{1, a};
        links[a].out = a;
        links[a].table = &base.composition(sw[a], mw[a], tw[a]);
        out_dims[a] = links[a].table->out_dim;
      }
      std::size_t total = 1;
      for (auto x_d : out_dims) total *= x_d;
      std::vector<Rational> v(total);
      std::vector<detail::InputTensor<Rational>> inputs(2);
      inputs[0].values = &x;
      inputs[0].dims = f.entry_dims(fk.first, fk.second);
      inputs[1].values = &y;
      inputs[1].dims = g.entry_dims(gk.first, gk.second);
      detail::contract(inputs, links, out_dims, Rational(1), v);
      out.add(gk.first, fk.second, v);
    }
  return out;
}

struct OracleReport {
  bool ok = true;
  std::string detail;
};

// Checks that specialization at d commutes with composition for the pair (psi, phi).
inline OracleReport oracle_check(const Morphism<SymbolicRank>& psi, const Morphism<SymbolicRank>& phi, std::size_t d) {
  auto lhs = specialize_to_wreath(compose(psi, phi), d);
  auto rhs = compose_wreath(specialize_to_wreath(psi, d), specialize_to_wreath(phi, d));
  OracleReport rep;
  if (lhs == rhs) return rep;
  rep.ok = false;
  std::size_t diff = 0;
  for (const auto& [k, v] : lhs.entries) {
    auto it = rhs.entries.find(k);
    if (it == rhs.entries.end() || it->second != v) ++diff;
  }
  for (const auto& [k, v] : rhs.entries)
    if (!lhs.entries.count(k)) ++diff;
  rep.detail = std::to_string(diff) + " cell entries differ at d=" + std::to_string(d);
  return rep;
}

struct SpecializationRank {
  std::size_t rank = 0;            // rank of the specialization map on H(A,B)
  std::size_t dimension = 0;       // dim H(A,B)
  std::size_t short_dimension = 0; // dim of the span of components with at most d blocks
};

// Rank of the linear map H(A,B) -> Hom in the cell model at d.
inline SpecializationRank specialization_rank(const BasePtr& base, const Object& a, const Object& b, std::size_t d) {
  SpecializationRank out;
  std::vector<std::vector<Rational>> rows;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> offsets;
  std::size_t width = 0;
  WreathObject wa(base, d, a), wb(base, d, b);
  for (std::size_t tc = 0; tc < wb.cells().size(); ++tc)
    for (std::size_t sc = 0; sc < wa.cells().size(); ++sc) {
      WreathMorphism probe{wa, wb, {}};
      std::size_t n = 1;
      for (auto x : probe.entry_dims(tc, sc)) n *= x;
      offsets[{tc, sc}] = width;
      width += n;
    }
  for (const auto& [r, k] : hom_basis<SpecializedRank>(*base, a, b)) {
    ++out.dimension;
    if (r.block_count() <= d) ++out.short_dimension;
    auto f = basis_morphism(base, SpecializedRank{Rational(static_cast<long>(d))}, a, b, r, k);
    auto w = specialize_to_wreath(f, d);
    std::vector<Rational> row(width);
    for (const auto& [key, v] : w.entries) {
      std::size_t o = offsets.at(key);
      for (std::size_t i = 0; i < v.size(); ++i) row[o + i] = v[i];
    }
    rows.push_back(std::move(row));
  }
  out.rank = width == 0 ? 0 : span_rank(rows);
  return out;
}

}  // namespace interpcat
