#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "interp.hpp"
#include "random.hpp"

namespace interpcat {

// ---------------------------------------------------------------------------------------------
// String-diagram terms.

enum class TermKind { Identity, Gen, Mu, Delta, Iota, Eps, Braid, BraidInv, Compose, Tensor, Scale, Sum };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind = TermKind::Identity;
  Object a, b;                    // identity: a; braid and braid-inv: (a, b)
  Word u, v;                      // gen, mu, delta
  std::vector<Rational> coords;   // gen
  RankPolynomial scalar;          // scale
  std::vector<TermPtr> children;  // compose lists the outermost factor first
};

namespace term {

inline TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

inline TermPtr identity(Object a) {
  Term t;
  t.kind = TermKind::Identity;
  t.a = std::move(a);
  return make(std::move(t));
}
inline TermPtr gen(Word u, Word v, std::vector<Rational> coords) {
  Term t;
  t.kind = TermKind::Gen;
  t.u = std::move(u);
  t.v = std::move(v);
  t.coords = std::move(coords);
  return make(std::move(t));
}
inline TermPtr mu(Word u, Word v) {
  Term t;
  t.kind = TermKind::Mu;
  t.u = std::move(u);
  t.v = std::move(v);
  return make(std::move(t));
}
inline TermPtr delta(Word u, Word v) {
  Term t;
  t.kind = TermKind::Delta;
  t.u = std::move(u);
  t.v = std::move(v);
  return make(std::move(t));
}
inline TermPtr iota() {
  Term t;
  t.kind = TermKind::Iota;
  return make(std::move(t));
}
inline TermPtr eps() {
  Term t;
  t.kind = TermKind::Eps;
  return make(std::move(t));
}
// A x B -> B x A.
inline TermPtr braid(Object a, Object b) {
  Term t;
  t.kind = TermKind::Braid;
  t.a = std::move(a);
  t.b = std::move(b);
  return make(std::move(t));
}
// Inverse of braid(a, b): B x A -> A x B.
inline TermPtr braid_inv(Object a, Object b) {
  Term t;
  t.kind = TermKind::BraidInv;
  t.a = std::move(a);
  t.b = std::move(b);
  return make(std::move(t));
}
// compose({g, f}) is g o f.
inline TermPtr compose(std::vector<TermPtr> parts) {
  if (parts.empty()) throw ArgumentError("empty composite");
  if (parts.size() == 1) return parts[0];
  Term t;
  t.kind = TermKind::Compose;
  t.children = std::move(parts);
  return make(std::move(t));
}
inline TermPtr tensor(std::vector<TermPtr> parts) {
  if (parts.empty()) return identity(Object());
  if (parts.size() == 1) return parts[0];
  Term t;
  t.kind = TermKind::Tensor;
  t.children = std::move(parts);
  return make(std::move(t));
}
inline TermPtr scale(RankPolynomial c, TermPtr x) {
  Term t;
  t.kind = TermKind::Scale;
  t.scalar = std::move(c);
  t.children = {std::move(x)};
  return make(std::move(t));
}
inline TermPtr sum(std::vector<TermPtr> parts) {
  if (parts.empty()) throw ArgumentError("empty formal sum has no type");
  if (parts.size() == 1) return parts[0];
  Term t;
  t.kind = TermKind::Sum;
  t.children = std::move(parts);
  return make(std::move(t));
}

}  // namespace term

// ---------------------------------------------------------------------------------------------
// Text form: (compose (mu 1 1) (delta 1 1)), objects as atoms or quoted strings.

namespace detail {

inline std::string quote_object(const BaseCategory& base, const Object& a) {
  return "\"" + object_to_string(base, a) + "\"";
}

inline std::string rationals_text(const std::vector<Rational>& v) {
  std::string s;
  for (const auto& x : v) s += " " + x.get_str();
  return s;
}

}  // namespace detail

inline std::string term_to_string(const BaseCategory& base, const Term& t) {
  auto word = [&](const Word& w) { return base.object_label(w); };
  switch (t.kind) {
    case TermKind::Identity:
      return "(id " + detail::quote_object(base, t.a) + ")";
    case TermKind::Gen:
      return "(gen " + word(t.u) + " " + word(t.v) + detail::rationals_text(t.coords) + ")";
    case TermKind::Mu:
      return "(mu " + word(t.u) + " " + word(t.v) + ")";
    case TermKind::Delta:
      return "(delta " + word(t.u) + " " + word(t.v) + ")";
    case TermKind::Iota:
      return "(iota)";
    case TermKind::Eps:
      return "(eps)";
    case TermKind::Braid:
    case TermKind::BraidInv:
      return std::string(t.kind == TermKind::Braid ? "(braid " : "(braid-inv ") + detail::quote_object(base, t.a) +
             " " + detail::quote_object(base, t.b) + ")";
    case TermKind::Scale:
      return "(scale " + t.scalar.to_string() + " " + term_to_string(base, *t.children[0]) + ")";
    case TermKind::Compose:
    case TermKind::Tensor:
    case TermKind::Sum: {
      std::string s = t.kind == TermKind::Compose ? "(compose" : t.kind == TermKind::Tensor ? "(tensor" : "(sum";
      for (const auto& c : t.children) s += " " + term_to_string(base, *c);
      return s + ")";
    }
  }
  return "";
}

namespace detail {

struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1, column = 1;
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("empty term", line_, col_);
    auto e = read();
    skip();
    if (pos_ < text_.size()) throw ParseError("trailing input after term", line_, col_);
    return e;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  SExpr read() {
    skip();
    SExpr e;
    e.line = line_;
    e.column = col_;
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    char c = text_[pos_];
    if (c == '(') {
      advance();
      while (true) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unclosed '('", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    e.is_atom = true;
    if (c == '"') {
      advance();
      while (pos_ < text_.size() && text_[pos_] != '"') {
        e.atom += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", e.line, e.column);
      advance();
      return e;
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"' || d == ';') break;
      e.atom += d;
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

template <class F>
auto at_node(const SExpr& e, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ParseError(ex.what(), e.line, e.column);
  }
}

inline TermPtr build_term(const BaseCategory& base, const SExpr& e) {
  if (e.is_atom || e.items.empty() || !e.items[0].is_atom)
    throw ParseError("expected a term of the form (head ...)", e.line, e.column);
  const std::string& head = e.items[0].atom;
  std::size_t argc = e.items.size() - 1;
  auto atom = [&](std::size_t i) -> const std::string& {
    const auto& x = e.items[i];
    if (!x.is_atom) throw ParseError("expected an atom", x.line, x.column);
    return x.atom;
  };
  auto need = [&](std::size_t n) {
    if (argc != n)
      throw ParseError("'" + head + "' takes " + std::to_string(n) + " arguments, got " + std::to_string(argc), e.line,
                       e.column);
  };
  auto word = [&](std::size_t i) { return at_node(e.items[i], [&] { return base.parse_object(atom(i)); }); };
  auto object = [&](std::size_t i) { return at_node(e.items[i], [&] { return parse_object_spec(base, atom(i)); }); };
  auto children = [&](std::size_t from) {
    std::vector<TermPtr> out;
    for (std::size_t i = from; i < e.items.size(); ++i) out.push_back(build_term(base, e.items[i]));
    if (out.empty()) throw ParseError("'" + head + "' needs at least one operand", e.line, e.column);
    return out;
  };

  if (head == "id") {
    need(1);
    return term::identity(object(1));
  }
  if (head == "gen") {
    if (argc < 2) throw ParseError("'gen' needs source, target and coordinates", e.line, e.column);
    std::vector<Rational> c;
    for (std::size_t i = 3; i < e.items.size(); ++i)
      c.push_back(at_node(e.items[i], [&] { return parse_rational(atom(i)); }));
    return term::gen(word(1), word(2), std::move(c));
  }
  if (head == "mu" || head == "delta") {
    need(2);
    return head == "mu" ? term::mu(word(1), word(2)) : term::delta(word(1), word(2));
  }
  if (head == "iota" || head == "eps") {
    need(0);
    return head == "iota" ? term::iota() : term::eps();
  }
  if (head == "braid" || head == "braid-inv") {
    need(2);
    return head == "braid" ? term::braid(object(1), object(2)) : term::braid_inv(object(1), object(2));
  }
  if (head == "compose") return term::compose(children(1));
  if (head == "tensor") return term::tensor(children(1));
  if (head == "sum") return term::sum(children(1));
  if (head == "scale") {
    need(2);
    const std::string& s = atom(1);
    auto c = at_node(e.items[1], [&] {
      return (s == "t" || (!s.empty() && s.front() == '[')) ? RankPolynomial::parse(s) : RankPolynomial(parse_rational(s));
    });
    return term::scale(std::move(c), build_term(base, e.items[2]));
  }
  throw ParseError("unknown generator '" + head + "'", e.items[0].line, e.items[0].column);
}

}  // namespace detail

inline TermPtr parse_term(const BaseCategory& base, std::string_view text) {
  auto e = detail::SExprReader(text).read_document();
  return detail::build_term(base, e);
}

// ---------------------------------------------------------------------------------------------
// Evaluation.

template <RankContext Rank>
Morphism<Rank> evaluate(const BasePtr& base, const Rank& rank, const Term& t) {
  auto mismatch = [&](const std::string& what) {
    return ArgumentError(what + " in " + term_to_string(*base, t));
  };
  switch (t.kind) {
    case TermKind::Identity:
      return identity(base, rank, t.a);
    case TermKind::Gen:
      return gen(base, rank, t.u, t.v, t.coords);
    case TermKind::Mu:
      return mu(base, rank, t.u, t.v);
    case TermKind::Delta:
      return delta(base, rank, t.u, t.v);
    case TermKind::Iota:
      return iota(base, rank);
    case TermKind::Eps:
      return eps(base, rank);
    case TermKind::Braid:
      return braiding(base, rank, t.a, t.b);
    case TermKind::BraidInv:
      return braiding_inverse(base, rank, t.a, t.b);
    case TermKind::Scale:
      return rank.lift_polynomial(t.scalar) * evaluate(base, rank, *t.children[0]);
    case TermKind::Compose: {
      auto acc = evaluate(base, rank, *t.children.back());
      for (std::size_t i = t.children.size() - 1; i-- > 0;) {
        auto g = evaluate(base, rank, *t.children[i]);
        if (!(g.source() == acc.target()))
          throw mismatch("type mismatch: " + object_to_string(*base, acc.target()) + " cannot feed " +
                         object_to_string(*base, g.source()));
        acc = compose(g, acc);
      }
      return acc;
    }
    case TermKind::Tensor: {
      auto acc = evaluate(base, rank, *t.children[0]);
      for (std::size_t i = 1; i < t.children.size(); ++i) acc = tensor(acc, evaluate(base, rank, *t.children[i]));
      return acc;
    }
    case TermKind::Sum: {
      auto acc = evaluate(base, rank, *t.children[0]);
      for (std::size_t i = 1; i < t.children.size(); ++i) {
        auto x = evaluate(base, rank, *t.children[i]);
        if (!(x.source() == acc.source()) || !(x.target() == acc.target()))
          throw mismatch("summands of different types");
        acc += x;
      }
      return acc;
    }
  }
  throw ArgumentError("unknown term kind");
}

// ---------------------------------------------------------------------------------------------
// Standard form for maps <U_1> x ... x <U_m> -> <V_1> x ... x <V_n>.

// Parts of p, in the chosen order, with sorted source and target indices.
struct Shape {
  struct Part {
    std::vector<std::size_t> sources, targets;
  };
  std::vector<Part> parts;
  std::vector<std::size_t> labels;  // canonical block label of each part

  std::vector<std::size_t> source_sequence() const {
    std::vector<std::size_t> s;
    for (const auto& p : parts) s.insert(s.end(), p.sources.begin(), p.sources.end());
    return s;
  }
  std::vector<std::size_t> target_sequence() const {
    std::vector<std::size_t> s;
    for (const auto& p : parts) s.insert(s.end(), p.targets.begin(), p.targets.end());
    return s;
  }
};

// Parts in the given order of canonical block labels.
inline Shape make_shape(const Recollement& p, std::size_t m, const std::vector<std::size_t>& order) {
  if (order.size() != p.block_count()) throw ArgumentError("shape must list every part exactly once");
  std::vector<char> seen(order.size(), 0);
  Shape s;
  for (auto b : order) {
    if (b >= order.size() || seen[b]) throw ArgumentError("shape must list every part exactly once");
    seen[b] = 1;
    Shape::Part part;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.label(i) == b) (i < m ? part.sources : part.targets).push_back(i < m ? i : i - m);
    s.parts.push_back(std::move(part));
    s.labels.push_back(b);
  }
  return s;
}

// Parts ordered by their least source index; canonical labels already have this order.
inline Shape default_shape(const Recollement& p, std::size_t m) {
  std::vector<std::size_t> order(p.block_count());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  return make_shape(p, m, order);
}

namespace detail {

inline std::vector<Word> singleton_words(const Object& a) {
  std::vector<Word> out;
  for (const auto& f : a.factors()) {
    if (f.size() != 1) throw ArgumentError("standard form needs a tensor product of singleton brackets");
    out.push_back(f.entries[0]);
  }
  return out;
}

inline Object strands(const std::vector<Word>& w) {
  std::vector<Bracket> f;
  for (const auto& x : w) f.push_back(Bracket{{x}});
  return Object(std::move(f));
}

// Positive braid taking strands in natural order to the order `seq`.
inline TermPtr permutation_braid(const std::vector<Word>& words, const std::vector<std::size_t>& seq) {
  std::vector<std::size_t> cur(words.size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = i;
  std::vector<TermPtr> layers;  // applied first to last
  for (std::size_t k = 0; k < seq.size(); ++k) {
    std::size_t j = static_cast<std::size_t>(std::find(cur.begin(), cur.end(), seq[k]) - cur.begin());
    for (; j > k; --j) {
      std::vector<Word> pre, post;
      for (std::size_t i = 0; i + 1 < j; ++i) pre.push_back(words[cur[i]]);
      for (std::size_t i = j + 1; i < cur.size(); ++i) post.push_back(words[cur[i]]);
      layers.push_back(term::tensor({term::identity(strands(pre)),
                                     term::braid(strands({words[cur[j - 1]]}), strands({words[cur[j]]})),
                                     term::identity(strands(post))}));
      std::swap(cur[j - 1], cur[j]);
    }
  }
  if (layers.empty()) return term::identity(strands(words));
  std::reverse(layers.begin(), layers.end());
  return term::compose(std::move(layers));
}

// Inverse of permutation_braid, built from inverse crossings in reverse order.
inline TermPtr inverse_permutation_braid(const std::vector<Word>& words, const std::vector<std::size_t>& seq) {
  auto fwd = permutation_braid(words, seq);
  if (fwd->kind == TermKind::Identity) return term::identity(strands([&] {
           std::vector<Word> w;
           for (auto i : seq) w.push_back(words[i]);
           return w;
         }()));
  std::vector<TermPtr> layers;
  auto invert_layer = [](const TermPtr& layer) {
    Term t = *layer;
    for (auto& c : t.children)
      if (c->kind == TermKind::Braid) c = term::braid_inv(c->a, c->b);
    return term::make(std::move(t));
  };
  if (fwd->kind == TermKind::Compose) {
    for (const auto& layer : fwd->children) layers.push_back(invert_layer(layer));
    std::reverse(layers.begin(), layers.end());
  } else {
    layers.push_back(invert_layer(fwd));
  }
  return term::compose(std::move(layers));
}

inline Word tensor_all(const BaseCategory& base, const std::vector<Word>& w, const std::vector<std::size_t>& idx) {
  Word acc = base.unit();
  for (auto i : idx) acc = base.tensor(acc, w[i]);
  return acc;
}

// <W_1> x ... x <W_a> -> <W_1 x ... x W_a>, or iota when a = 0.
inline TermPtr merge_strands(const BaseCategory& base, const std::vector<Word>& w) {
  if (w.empty()) return term::iota();
  std::vector<TermPtr> steps;  // applied first to last
  Word acc = w[0];
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::vector<Word> rest(w.begin() + static_cast<long>(k) + 1, w.end());
    steps.push_back(term::tensor({term::mu(acc, w[k]), term::identity(strands(rest))}));
    acc = base.tensor(acc, w[k]);
  }
  if (steps.empty()) return term::identity(strands(w));
  std::reverse(steps.begin(), steps.end());
  return term::compose(std::move(steps));
}

// <W_1 x ... x W_b> -> <W_1> x ... x <W_b>, or eps when b = 0.
inline TermPtr split_strands(const BaseCategory& base, const std::vector<Word>& w) {
  if (w.empty()) return term::eps();
  if (w.size() == 1) return term::identity(strands(w));
  std::vector<TermPtr> steps;  // applied first to last
  for (std::size_t k = w.size() - 1; k >= 1; --k) {
    Word head = base.unit();
    for (std::size_t i = 0; i < k; ++i) head = base.tensor(head, w[i]);
    std::vector<Word> rest(w.begin() + static_cast<long>(k) + 1, w.end());
    steps.push_back(term::tensor({term::delta(head, w[k]), term::identity(strands(rest))}));
  }
  std::reverse(steps.begin(), steps.end());
  return term::compose(std::move(steps));
}

struct ShapeFrame {
  TermPtr left, right;  // (tau^h)^-1 o Delta^p and mu^p o tau^g
  std::vector<Word> merged_sources, merged_targets;
};

inline ShapeFrame shape_frame(const BaseCategory& base, const std::vector<Word>& us, const std::vector<Word>& vs,
                              const Shape& s) {
  ShapeFrame fr;
  std::vector<TermPtr> merges, splits;
  for (const auto& p : s.parts) {
    std::vector<Word> a, b;
    for (auto i : p.sources) a.push_back(us[i]);
    for (auto j : p.targets) b.push_back(vs[j]);
    merges.push_back(merge_strands(base, a));
    splits.push_back(split_strands(base, b));
    fr.merged_sources.push_back(tensor_all(base, us, p.sources));
    fr.merged_targets.push_back(tensor_all(base, vs, p.targets));
  }
  fr.right = term::compose({term::tensor(merges), permutation_braid(us, s.source_sequence())});
  fr.left = term::compose({inverse_permutation_braid(vs, s.target_sequence()), term::tensor(splits)});
  return fr;
}

// Reorders a coefficient vector on a tensor product of blocks from canonical order to `order`.
template <class V>
std::vector<V> permute_blocks(const std::vector<V>& v, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& order) {
  auto strides = strides_of(dims);
  std::vector<std::size_t> new_dims;
  for (auto b : order) new_dims.push_back(dims[b]);
  auto new_strides = strides_of(new_dims);
  std::vector<V> out(v.size());
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    std::size_t target = 0;
    for (std::size_t k = 0; k < order.size(); ++k) target += ((idx / strides[order[k]]) % dims[order[k]]) * new_strides[k];
    out[target] = v[idx];
  }
  return out;
}

}  // namespace detail

// f_p(Phi) as a term: a sum of standard-form diagrams, one per nonzero basis tensor of Phi.
inline TermPtr standard_form_term(const BaseCategory& base, const Object& a, const Object& b, const Recollement& p,
                                  const Shape& s, const std::vector<Rational>& phi) {
  auto us = detail::singleton_words(a), vs = detail::singleton_words(b);
  auto fr = detail::shape_frame(base, us, vs, s);
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k < s.parts.size(); ++k) dims.push_back(base.hom_dim(fr.merged_sources[k], fr.merged_targets[k]));
  std::vector<std::size_t> canon_dims(dims.size());
  for (std::size_t k = 0; k < s.labels.size(); ++k) canon_dims[s.labels[k]] = dims[k];
  auto v = detail::permute_blocks(phi, canon_dims, s.labels);
  auto strides = detail::strides_of(dims);
  std::vector<TermPtr> terms;
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    if (sgn(v[idx]) == 0) continue;
    std::vector<TermPtr> gens;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      std::vector<Rational> e(dims[k]);
      e[(idx / strides[k]) % dims[k]] = 1;
      gens.push_back(term::gen(fr.merged_sources[k], fr.merged_targets[k], std::move(e)));
    }
    auto diagram = term::compose({fr.left, term::tensor(std::move(gens)), fr.right});
    terms.push_back(v[idx] == 1 ? diagram : term::scale(RankPolynomial(v[idx]), diagram));
  }
  if (terms.empty()) {
    std::vector<TermPtr> zeros;
    for (std::size_t k = 0; k < dims.size(); ++k)
      zeros.push_back(term::gen(fr.merged_sources[k], fr.merged_targets[k], std::vector<Rational>(dims[k])));
    return term::scale(RankPolynomial(), term::compose({fr.left, term::tensor(std::move(zeros)), fr.right}));
  }
  return term::sum(std::move(terms));
}

namespace detail {

// f_p(Phi) evaluated directly: the frame halves once, the middle by linearity in Phi.
template <RankContext Rank>
Morphism<Rank> standard_form_value(const BasePtr& base, const Rank& rank, const Object& a, const Object& b,
                                   const Shape& s, const std::vector<typename Rank::value_type>& phi) {
  auto fr = shape_frame(*base, singleton_words(a), singleton_words(b), s);
  std::vector<std::size_t> dims, canon_dims(s.parts.size());
  std::vector<Bracket> src, tgt;
  for (std::size_t k = 0; k < s.parts.size(); ++k) {
    dims.push_back(base->hom_dim(fr.merged_sources[k], fr.merged_targets[k]));
    canon_dims[s.labels[k]] = dims.back();
    src.push_back(Bracket{{fr.merged_sources[k]}});
    tgt.push_back(Bracket{{fr.merged_targets[k]}});
  }
  auto v = permute_blocks(phi, canon_dims, s.labels);
  auto strides = strides_of(dims);
  Morphism<Rank> middle(base, rank, Object(src), Object(tgt));
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    if (is_zero(v[idx])) continue;
    Morphism<Rank> piece = identity(base, rank, Object());
    for (std::size_t k = 0; k < dims.size(); ++k) {
      std::vector<Rational> e(dims[k]);
      e[(idx / strides[k]) % dims[k]] = 1;
      piece = tensor(piece, gen(base, rank, fr.merged_sources[k], fr.merged_targets[k], e));
    }
    middle += v[idx] * piece;
  }
  return compose(evaluate(base, rank, *fr.left), compose(middle, evaluate(base, rank, *fr.right)));
}

}  // namespace detail

using ShapeMap = std::map<Recollement, Shape>;

// Coordinates Phi_p with f = sum_p f_p(Phi_p), by descending induction from the finest partitions.
template <RankContext Rank>
std::map<Recollement, std::vector<typename Rank::value_type>> standard_coordinates(const Morphism<Rank>& f,
                                                                                   const ShapeMap* shapes = nullptr) {
  auto us = detail::singleton_words(f.source());
  detail::singleton_words(f.target());
  std::size_t m = us.size();
  auto parts = recollements(f.sizes());
  std::vector<Recollement> order(parts.begin(), parts.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const Recollement& x, const Recollement& y) { return x.block_count() > y.block_count(); });
  std::map<Recollement, std::vector<typename Rank::value_type>> out;
  Morphism<Rank> rest = f;
  for (const auto& p : order) {
    auto phi = rest.component(p);
    bool nonzero = false;
    for (const auto& x : phi)
      if (!is_zero(x)) nonzero = true;
    if (!nonzero) continue;
    Shape s;
    if (shapes) {
      auto it = shapes->find(p);
      if (it == shapes->end()) throw ArgumentError("no shape given for partition " + p.to_string());
      s = it->second;
    } else {
      s = default_shape(p, m);
    }
    rest -= detail::standard_form_value(f.base_ptr(), f.rank(), f.source(), f.target(), s, phi);
    out.emplace(p, std::move(phi));
  }
  if (!rest.is_zero()) throw ArgumentError("standard-form extraction left a nonzero remainder");
  return out;
}

// ---------------------------------------------------------------------------------------------
// Relation suite.

struct RelationResult {
  int id = 0;
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  bool skipped = false;
  std::string note;  // first failure, skip reason, or the value of the dimension relation
  bool ok() const { return failures == 0; }
};

struct RelationReport {
  std::string rank;
  std::vector<RelationResult> relations;
  bool ok() const {
    for (const auto& r : relations)
      if (!r.ok()) return false;
    return true;
  }
};

namespace detail {

inline std::vector<Word> words_up_to(const BaseCategory& base, std::size_t len) {
  std::vector<Word> out{base.unit()};
  std::vector<Word> layer{base.unit()};
  for (std::size_t l = 0; l < len; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (const auto& g : base.generators()) next.push_back(base.tensor(w, g));
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline std::vector<Rational> random_coords(const BaseCategory& base, const Word& u, const Word& v, RandomSource& rng) {
  std::vector<Rational> c(base.hom_dim(u, v));
  for (auto& x : c) x = rng.small_rational();
  return c;
}

template <RankContext Rank>
struct RelationChecker {
  BasePtr base;
  Rank rank;
  RelationResult* result;

  void check(const TermPtr& lhs, const TermPtr& rhs) {
    ++result->instances;
    auto l = evaluate(base, rank, *lhs);
    auto r = evaluate(base, rank, *rhs);
    if (l == r) return;
    if (result->failures++ == 0) result->note = term_to_string(*base, *lhs) + " != " + term_to_string(*base, *rhs);
  }
  void check_value(const TermPtr& lhs, const Morphism<Rank>& rhs) {
    ++result->instances;
    if (evaluate(base, rank, *lhs) == rhs) return;
    if (result->failures++ == 0) result->note = term_to_string(*base, *lhs) + " differs from the expected morphism";
  }
};

}  // namespace detail

// Both sides of relations (1)-(9) on all words of length at most `max_len`.
template <RankContext Rank>
RelationReport relation_suite(const BasePtr& base, const Rank& rank, std::uint64_t seed = 1, std::size_t max_len = 2) {
  using namespace term;
  const auto& B = *base;
  RelationReport rep;
  rep.rank = rank.describe();
  RandomSource rng(seed);
  auto pool = detail::words_up_to(B, max_len);
  std::vector<Word> small = detail::words_up_to(B, std::min<std::size_t>(max_len, 1));
  auto one = [](const Word& w) { return Object::bracket({w}); };
  auto T = [&](const Word& x, const Word& y) { return B.tensor(x, y); };
  auto add = [&](int id, std::string name) -> detail::RelationChecker<Rank> {
    rep.relations.push_back(RelationResult{id, std::move(name), 0, 0, false, ""});
    return {base, rank, &rep.relations.back()};
  };
  rep.relations.reserve(9);

  {
    auto c = add(1, "linear functor");
    for (const auto& u : pool) {
      c.check(gen(u, u, B.identity(u)), identity(one(u)));
      for (const auto& v : small)
        for (const auto& w : small) {
          auto f = detail::random_coords(B, u, v, rng), g = detail::random_coords(B, v, w, rng);
          auto h = detail::random_coords(B, u, v, rng);
          c.check(gen(u, w, B.compose(u, v, w, f, g)), compose({gen(v, w, g), gen(u, v, f)}));
          std::vector<Rational> lin(f.size());
          Rational a = rng.small_rational(), b = rng.small_rational();
          for (std::size_t i = 0; i < f.size(); ++i) lin[i] = a * f[i] + b * h[i];
          c.check(gen(u, v, lin), sum({scale(a, gen(u, v, f)), scale(b, gen(u, v, h))}));
        }
    }
  }
  {
    auto c = add(2, "naturality of mu and delta");
    for (const auto& u : small)
      for (const auto& v : small)
        for (const auto& u2 : small)
          for (const auto& v2 : small) {
            auto f = detail::random_coords(B, u, u2, rng), g = detail::random_coords(B, v, v2, rng);
            auto fg = B.tensor_morphisms(u, u2, v, v2, f, g);
            c.check(compose({mu(u2, v2), tensor({gen(u, u2, f), gen(v, v2, g)})}),
                    compose({gen(T(u, v), T(u2, v2), fg), mu(u, v)}));
            c.check(compose({tensor({gen(u, u2, f), gen(v, v2, g)}), delta(u, v)}),
                    compose({delta(u2, v2), gen(T(u, v), T(u2, v2), fg)}));
          }
  }
  {
    auto c = add(3, "associativity of mu and coassociativity of delta");
    for (const auto& u : pool)
      for (const auto& v : pool)
        for (const auto& w : small) {
          c.check(compose({mu(T(u, v), w), tensor({mu(u, v), identity(one(w))})}),
                  compose({mu(u, T(v, w)), tensor({identity(one(u)), mu(v, w)})}));
          c.check(compose({tensor({delta(u, v), identity(one(w))}), delta(T(u, v), w)}),
                  compose({tensor({identity(one(u)), delta(v, w)}), delta(u, T(v, w))}));
        }
  }
  {
    auto c = add(4, "unit and counit");
    auto unit = B.unit();
    for (const auto& u : pool) {
      c.check(compose({mu(unit, u), tensor({iota(), identity(one(u))})}), identity(one(u)));
      c.check(compose({mu(u, unit), tensor({identity(one(u)), iota()})}), identity(one(u)));
      c.check(compose({tensor({eps(), identity(one(u))}), delta(unit, u)}), identity(one(u)));
      c.check(compose({tensor({identity(one(u)), eps()}), delta(u, unit)}), identity(one(u)));
    }
  }
  bool braided = B.has_braiding() || B.generators().empty();
  {
    auto c = add(5, "mu and delta commute with braidings");
    if (!braided) {
      rep.relations.back().skipped = true;
      rep.relations.back().note = "base has no braiding";
    } else {
      for (const auto& u : pool)
        for (const auto& v : pool) {
          auto s = B.braiding(u, v);
          c.check(compose({mu(v, u), braid(one(u), one(v))}), compose({gen(T(u, v), T(v, u), s), mu(u, v)}));
          c.check(compose({braid(one(u), one(v)), delta(u, v)}), compose({delta(v, u), gen(T(u, v), T(v, u), s)}));
        }
    }
  }
  {
    auto c = add(6, "Frobenius compatibility");
    for (const auto& u : pool)
      for (const auto& v : small)
        for (const auto& w : small) {
          c.check(compose({tensor({mu(u, v), identity(one(w))}), tensor({identity(one(u)), delta(v, w)})}),
                  compose({delta(T(u, v), w), mu(u, T(v, w))}));
          c.check(compose({tensor({identity(one(u)), mu(v, w)}), tensor({delta(u, v), identity(one(w))})}),
                  compose({delta(u, T(v, w)), mu(T(u, v), w)}));
        }
  }
  {
    auto c = add(7, "mu is a retraction of delta");
    for (const auto& u : pool)
      for (const auto& v : pool) c.check(compose({mu(u, v), delta(u, v)}), identity(one(T(u, v))));
  }
  {
    auto c = add(8, "quadratic relation");
    if (!braided) {
      rep.relations.back().skipped = true;
      rep.relations.back().note = "base has no braiding";
    } else {
      for (const auto& u : pool)
        for (const auto& v : pool) {
          auto s = B.braiding(u, v), si = B.braiding_inverse(v, u);
          std::vector<Rational> diff(s.size());
          for (std::size_t i = 0; i < s.size(); ++i) diff[i] = s[i] - si[i];
          c.check(sum({braid(one(u), one(v)), scale(Rational(-1), braid_inv(one(v), one(u)))}),
                  compose({delta(v, u), gen(T(u, v), T(v, u), diff), mu(u, v)}));
        }
    }
  }
  {
    auto c = add(9, "dimension of the unit bracket");
    auto lhs = compose({eps(), iota()});
    auto expect = rank.rank() * identity(base, rank, Object());
    c.check_value(lhs, expect);
    auto val = evaluate(base, rank, *lhs);
    std::string value = "0";
    if (!val.components().empty()) {
      const auto& x = val.components().begin()->second.at(0);
      if constexpr (std::is_same_v<std::decay_t<decltype(x)>, RankPolynomial>)
        value = x.pretty();
      else
        value = to_string(x);
    }
    rep.relations.back().note = "eps o iota = " + value;
  }
  return rep;
}

inline std::string format_report(const RelationReport& rep) {
  std::string s;
  for (const auto& r : rep.relations) {
    s += "(" + std::to_string(r.id) + ") " + r.name + ": ";
    if (r.skipped)
      s += "skipped";
    else
      s += (r.ok() ? "pass" : "FAIL") + std::string(" [") + std::to_string(r.instances) + " instances]";
    if (!r.note.empty()) s += "  " + r.note;
    s += '\n';
  }
  return s;
}

}  // namespace interpcat
