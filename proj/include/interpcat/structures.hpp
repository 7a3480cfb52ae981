#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "interp.hpp"

namespace interpcat {

// A left dual of <U>: ev: <U*> x <U> -> 1 and coev: 1 -> <U> x <U*>.
template <RankContext Rank>
struct DualData {
  Object object, dual;
  Morphism<Rank> ev, coev;
};

// ev = eps o <ev_U> o mu and coev = delta o <coev_U> o iota.
template <RankContext Rank>
DualData<Rank> bracket_dual(const BasePtr& base, const Rank& rank, const Word& u) {
  auto d = base->dual(u);
  const Word unit = base->unit();
  auto ev = compose(eps(base, rank), compose(gen(base, rank, base->tensor(d.dual, u), unit, d.ev), mu(base, rank, d.dual, u)));
  auto coev =
      compose(delta(base, rank, u, d.dual), compose(gen(base, rank, unit, base->tensor(u, d.dual), d.coev), iota(base, rank)));
  return {Object::bracket({u}), Object::bracket({d.dual}), std::move(ev), std::move(coev)};
}

// Both zig-zag composites; each should be an identity.
template <RankContext Rank>
std::pair<Morphism<Rank>, Morphism<Rank>> snake_composites(const DualData<Rank>& d) {
  const auto& base = d.ev.base_ptr();
  const auto& rank = d.ev.rank();
  auto id_u = identity(base, rank, d.object), id_d = identity(base, rank, d.dual);
  auto first = compose(tensor(id_u, d.ev), tensor(d.coev, id_u));
  auto second = compose(tensor(d.ev, id_d), tensor(id_d, d.coev));
  return {std::move(first), std::move(second)};
}

template <RankContext Rank>
bool snakes_hold(const DualData<Rank>& d) {
  auto [a, b] = snake_composites(d);
  return a == identity(d.ev.base_ptr(), d.ev.rank(), d.object) && b == identity(d.ev.base_ptr(), d.ev.rank(), d.dual);
}

namespace detail {

inline Object drop_tail(const Object& a, std::size_t n) {
  if (a.factor_count() < n) throw ArgumentError("object has fewer factors than the traced object");
  return Object(std::vector<Bracket>(a.factors().begin(), a.factors().end() - static_cast<long>(n)));
}

inline bool ends_with(const Object& a, const Object& x) {
  if (a.factor_count() < x.factor_count()) return false;
  return std::equal(x.factors().begin(), x.factors().end(), a.factors().end() - static_cast<long>(x.factor_count()));
}

// Each entry of `a` as its own bracket.
inline Object singleton_expansion(const Object& a) {
  std::vector<Bracket> f;
  for (const auto& w : a.flat_entries()) f.push_back(Bracket{{w}});
  return Object(std::move(f));
}

// The map a -> b pairing the k-th element of a with the k-th element of b, identity on each pair.
template <RankContext Rank>
Morphism<Rank> elementwise_identity(const BasePtr& base, const Rank& rank, const Object& a, const Object& b) {
  Morphism<Rank> f(base, rank, a, b);
  auto entries = a.flat_entries();
  std::vector<std::size_t> raw;
  for (std::size_t side = 0; side < 2; ++side)
    for (std::size_t k = 0; k < entries.size(); ++k) raw.push_back(k);
  std::vector<std::vector<Rational>> parts;
  for (const auto& w : entries) parts.push_back(base->identity(w));
  f.add(Recollement::from_labels(f.sizes(), raw), lift_vector<typename Rank::value_type>(kron_vectors(parts)));
  return f;
}

// Partial trace over a trailing singleton bracket <X>.
template <RankContext Rank>
Morphism<Rank> trace_singleton(const Morphism<Rank>& f) {
  const auto& base = f.base_ptr();
  const auto& rank = f.rank();
  const Bracket& xb = f.source().factors().back();
  Word x = xb.entries.at(0);
  Object a = drop_tail(f.source(), 1), b = drop_tail(f.target(), 1);
  Word unit = base->unit();
  // Project onto the image of the bar idempotent first.
  auto fbar = compose(tensor(identity(base, rank, b), mu(base, rank, x, unit)),
                      compose(tensor(f, identity(base, rank, Object::bracket({unit}))),
                              tensor(identity(base, rank, a), delta(base, rank, x, unit))));
  Morphism<Rank> out(base, rank, a, b);
  std::size_t na = a.element_count(), nb = b.element_count();
  std::size_t xs = na, xt = na + 1 + nb;
  auto out_sizes = concat_sizes(a, b);
  auto out_entries = out.entries();
  for (const auto& [r, v] : fbar.components()) {
    std::size_t beta = r.label(xs);
    if (r.label(xt) != beta) throw std::logic_error("bar image has a component separating the traced strands");
    std::vector<std::size_t> raw;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (i != xs && i != xt) raw.push_back(r.label(i));
    auto rp = Recollement::from_labels(out_sizes, raw);
    std::vector<std::optional<std::size_t>> new_label(r.block_count());
    for (std::size_t i = 0, k = 0; i < r.size(); ++i)
      if (i != xs && i != xt) new_label[r.label(i)] = rp.label(k++);
    auto r_spec = fbar.layout(r);
    auto rp_spec = block_specs(*base, out_entries, na, rp);
    std::vector<Link> links(r.block_count());
    for (std::size_t blk = 0; blk < r.block_count(); ++blk) {
      links[blk].first = BlockRef{0, blk};
      links[blk].out = new_label[blk];
      if (blk == beta) {
        Word src = new_label[blk] ? rp_spec[*new_label[blk]].source : unit;
        Word tgt = new_label[blk] ? rp_spec[*new_label[blk]].target : unit;
        links[blk].table = &base->trace_table(src, tgt, x);
      }
    }
    std::vector<std::size_t> out_dims;
    for (const auto& s : rp_spec) out_dims.push_back(s.dim);
    typename Rank::value_type coeff(1);
    if (!new_label[beta]) coeff = rank.rank() - typename Rank::value_type(static_cast<long>(rp.block_count()));
    std::vector<typename Rank::value_type> w(product_dim(rp_spec));
    std::vector<InputTensor<typename Rank::value_type>> inputs(1);
    inputs[0].values = &v;
    for (const auto& s : r_spec) inputs[0].dims.push_back(s.dim);
    contract(inputs, links, out_dims, coeff, w);
    out.add(rp, w);
  }
  return out;
}

}  // namespace detail

// Right partial trace Tr_X: Hom(A x X, B x X) -> Hom(A, B), for X the trailing factors of both sides.
template <RankContext Rank>
Morphism<Rank> trace(const Morphism<Rank>& f, const Object& x) {
  if (!detail::ends_with(f.source(), x) || !detail::ends_with(f.target(), x))
    throw ArgumentError("source and target must both end with the traced object");
  if (x.is_unit()) return f;
  const auto& base = f.base_ptr();
  const auto& rank = f.rank();
  Object a = detail::drop_tail(f.source(), x.factor_count()), b = detail::drop_tail(f.target(), x.factor_count());
  auto s = detail::singleton_expansion(x);
  Morphism<Rank> g = f;
  if (!(s == x)) {
    auto in = detail::elementwise_identity(base, rank, x, s), out = detail::elementwise_identity(base, rank, s, x);
    g = compose(tensor(identity(base, rank, b), in), compose(f, tensor(identity(base, rank, a), out)));
  }
  for (std::size_t k = 0; k < s.factor_count(); ++k) g = detail::trace_singleton(g);
  return g;
}

// Tr_A(id_A) as a scalar.
template <RankContext Rank>
typename Rank::value_type dimension(const BasePtr& base, const Rank& rank, const Object& a) {
  auto d = trace(identity(base, rank, a), a);
  if (d.components().empty()) return typename Rank::value_type(0);
  return d.components().begin()->second.at(0);
}

// theta(A) = Tr_A(tau(A, A)).
template <RankContext Rank>
Morphism<Rank> twist(const BasePtr& base, const Rank& rank, const Object& a) {
  return trace(braiding(base, rank, a, a), a);
}

}  // namespace interpcat
