#pragma once

// Plain-text file formats. Every document starts with a header line "interpcat-<kind> <version>";
// blank lines and lines starting with '#' are ignored (';' for term files).

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "algtools.hpp"
#include "basecat.hpp"
#include "diagrams.hpp"
#include "interp.hpp"
#include "karoubi.hpp"

namespace interpcat::io {

inline constexpr int kFormatVersion = 1;

struct Token {
  std::string text;
  std::size_t column = 1;
};

struct Line {
  std::size_t number = 0;
  std::string raw;
  std::vector<Token> tokens;

  // Text from token `k` to the end of the line, trimmed.
  std::string rest(std::size_t k) const {
    if (k >= tokens.size()) return "";
    std::string s = raw.substr(tokens[k].column - 1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  }
  [[noreturn]] void fail(const std::string& what, std::size_t k = 0) const {
    std::size_t col = k < tokens.size() ? tokens[k].column : raw.size() + 1;
    throw ParseError(what, number, col);
  }
  void expect_arity(std::size_t n) const {
    if (tokens.size() < n) fail("'" + tokens[0].text + "' needs " + std::to_string(n - 1) + " argument(s)", tokens.size());
    if (tokens.size() > n) fail("unexpected extra token", n);
  }
};

class LineReader {
 public:
  explicit LineReader(std::string_view text, char comment = '#') {
    std::size_t number = 0, pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string_view raw = text.substr(pos, nl == text.npos ? text.npos : nl - pos);
      ++number;
      Line line{number, std::string(raw), {}};
      if (!line.raw.empty() && line.raw.back() == '\r') line.raw.pop_back();
      std::size_t i = 0;
      while (i < line.raw.size()) {
        if (std::isspace(static_cast<unsigned char>(line.raw[i]))) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < line.raw.size() && !std::isspace(static_cast<unsigned char>(line.raw[j]))) ++j;
        line.tokens.push_back({line.raw.substr(i, j - i), i + 1});
        i = j;
      }
      if (!line.tokens.empty() && line.tokens[0].text[0] != comment) lines_.push_back(std::move(line));
      if (nl == text.npos) break;
      pos = nl + 1;
    }
    last_line_ = number;
  }

  bool done() const { return next_ >= lines_.size(); }
  const Line& peek() const { return lines_.at(next_); }
  const Line& next() { return lines_.at(next_++); }
  std::size_t last_line() const { return last_line_; }

 private:
  std::vector<Line> lines_;
  std::size_t next_ = 0, last_line_ = 0;
};

inline std::string header(const std::string& kind) { return "interpcat-" + kind + " " + std::to_string(kFormatVersion); }

// Kind named by the header line ("presentation", "bialgebra", ...), without checking the version.
inline std::string detect_kind(std::string_view text) {
  LineReader r(text, '\0');
  while (!r.done()) {
    const auto& l = r.next();
    const auto& first = l.tokens[0].text;
    if (first[0] == '#' || first[0] == ';') continue;
    if (first.rfind("interpcat-", 0) != 0) l.fail("missing header line 'interpcat-<kind> <version>'");
    return first.substr(10);
  }
  throw ParseError("empty document", 1, 1);
}

inline void expect_header(LineReader& r, const std::string& kind) {
  if (r.done()) throw ParseError("empty document, expected '" + header(kind) + "'", 1, 1);
  const auto& l = r.next();
  if (l.tokens[0].text != "interpcat-" + kind) l.fail("expected header '" + header(kind) + "'");
  if (l.tokens.size() < 2) l.fail("header lacks a format version", 1);
  if (l.tokens[1].text != std::to_string(kFormatVersion))
    l.fail("unsupported " + kind + " format version '" + l.tokens[1].text + "'", 1);
  l.expect_arity(2);
}

namespace detail {

inline std::size_t parse_index_text(const Line& l, std::size_t k, const std::string& s, std::size_t bound) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != s.npos) l.fail("expected an index", k);
  std::size_t v = std::stoul(s);
  if (v >= bound) l.fail("index " + s + " out of range (bound " + std::to_string(bound) + ")", k);
  return v;
}

inline std::size_t parse_index(const Line& l, std::size_t k, std::size_t bound = SIZE_MAX) {
  return parse_index_text(l, k, l.tokens.at(k).text, bound);
}

inline Rational parse_rat(const Line& l, std::size_t k, std::string_view text) {
  try {
    return parse_rational(text);
  } catch (const ArgumentError& e) {
    l.fail(e.what(), k);
  }
}

template <class V>
V parse_value(const Line& l, std::size_t k, std::string_view text) {
  if constexpr (std::is_same_v<V, RankPolynomial>) {
    try {
      return RankPolynomial::parse(text);
    } catch (const ArgumentError& e) {
      l.fail(e.what(), k);
    }
  } else {
    return parse_rat(l, k, text);
  }
}

template <class V>
std::string value_text(const V& v) {
  if constexpr (std::is_same_v<V, RankPolynomial>)
    return v.to_string();
  else
    return v.get_str();
}

// Tokens "k:v" from position `from` into a dense vector of length n; repeated indices are rejected.
template <class V>
std::vector<V> parse_sparse(const Line& l, std::size_t from, std::size_t n) {
  std::vector<V> out(n);
  std::vector<bool> seen(n);
  for (std::size_t k = from; k < l.tokens.size(); ++k) {
    const auto& s = l.tokens[k].text;
    auto colon = s.find(':');
    if (colon == s.npos) l.fail("expected an entry 'index:value'", k);
    std::size_t i = parse_index_text(l, k, s.substr(0, colon), n);
    if (seen[i]) l.fail("repeated index " + std::to_string(i), k);
    seen[i] = true;
    out[i] = parse_value<V>(l, k, std::string_view(s).substr(colon + 1));
  }
  return out;
}

template <class V>
std::string sparse_text(const std::vector<V>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (is_zero(v[i])) continue;
    s += ' ' + std::to_string(i) + ':' + value_text(v[i]);
  }
  return s;
}

inline void check_name(const Line& l, std::size_t k) {
  const auto& s = l.tokens.at(k).text;
  if (s.find_first_of(".,|()") != s.npos) l.fail("name may not contain any of . , | ( )", k);
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Presentation:
//   name <name>
//   objects <label>...
//   unit <label>
//   hom <a> <b> <dim>
//   id <a> <k> <value>
//   comp <a> <b> <c> <i> <j> <k> <value>     coefficient of basis k of Hom(a,c) in g_j o f_i

inline Presentation read_presentation(std::string_view text) {
  LineReader r(text);
  expect_header(r, "presentation");
  Presentation p;
  bool have_name = false, have_objects = false, have_unit = false;
  std::map<std::string, std::size_t> index;
  auto object = [&](const Line& l, std::size_t k) {
    if (!have_objects) l.fail("'objects' must come first", 0);
    auto it = index.find(l.tokens[k].text);
    if (it == index.end()) l.fail("unknown object '" + l.tokens[k].text + "'", k);
    return it->second;
  };
  auto nonzero = [](const Line& l, std::size_t k, const Rational& v) {
    if (sgn(v) == 0) l.fail("explicit zero entry", k);
  };
  while (!r.done()) {
    const auto& l = r.next();
    const auto& key = l.tokens[0].text;
    if (key == "name") {
      if (have_name) l.fail("duplicate 'name'");
      if (l.tokens.size() < 2) l.fail("'name' needs a value", 1);
      p.name = l.rest(1);
      have_name = true;
    } else if (key == "objects") {
      if (have_objects) l.fail("duplicate 'objects'");
      if (l.tokens.size() < 2) l.fail("'objects' needs at least one label", 1);
      for (std::size_t k = 1; k < l.tokens.size(); ++k) {
        detail::check_name(l, k);
        if (!index.emplace(l.tokens[k].text, k - 1).second) l.fail("duplicate object label", k);
        p.objects.push_back(l.tokens[k].text);
      }
      have_objects = true;
    } else if (key == "unit") {
      l.expect_arity(2);
      if (have_unit) l.fail("duplicate 'unit'");
      p.unit = object(l, 1);
      have_unit = true;
    } else if (key == "hom") {
      l.expect_arity(4);
      auto a = object(l, 1), b = object(l, 2);
      if (p.hom_dims.count({a, b})) l.fail("duplicate hom dimension");
      auto d = detail::parse_index(l, 3);
      if (d > 0) p.hom_dims[{a, b}] = d;
    } else if (key == "id") {
      l.expect_arity(4);
      auto a = object(l, 1);
      auto d = p.dim(a, a);
      auto k = detail::parse_index(l, 2, d);
      auto v = detail::parse_rat(l, 3, l.tokens[3].text);
      nonzero(l, 3, v);
      auto& vec = p.identities[a];
      vec.resize(d);
      if (sgn(vec[k]) != 0) l.fail("repeated identity entry", 2);
      vec[k] = v;
    } else if (key == "comp") {
      l.expect_arity(8);
      auto a = object(l, 1), b = object(l, 2), c = object(l, 3);
      auto i = detail::parse_index(l, 4, p.dim(a, b));
      auto j = detail::parse_index(l, 5, p.dim(b, c));
      auto k = detail::parse_index(l, 6, p.dim(a, c));
      auto v = detail::parse_rat(l, 7, l.tokens[7].text);
      nonzero(l, 7, v);
      auto [it, fresh] = p.compositions.try_emplace({a, b, c}, p.dim(a, b), p.dim(b, c), p.dim(a, c));
      auto& cell = it->second.entries[i * it->second.second_dim + j];
      for (const auto& [kk, _] : cell)
        if (kk == k) l.fail("repeated composition entry", 6);
      cell.emplace_back(static_cast<std::uint32_t>(k), v);
      std::sort(cell.begin(), cell.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    } else {
      l.fail("unknown keyword '" + key + "'");
    }
  }
  std::size_t end = r.last_line();
  if (!have_name) throw ParseError("missing 'name'", end, 1);
  if (!have_objects) throw ParseError("missing 'objects'", end, 1);
  if (!have_unit) throw ParseError("missing 'unit'", end, 1);
  for (std::size_t a = 0; a < p.objects.size(); ++a) {
    auto it = p.identities.find(a);
    if (it != p.identities.end()) it->second.resize(p.dim(a, a));
  }
  return p;
}

inline std::string write_presentation(const Presentation& p) {
  std::ostringstream o;
  o << header("presentation") << '\n' << "name " << p.name << '\n' << "objects";
  for (const auto& s : p.objects) o << ' ' << s;
  o << '\n' << "unit " << p.objects.at(p.unit) << '\n';
  for (const auto& [ab, d] : p.hom_dims)
    if (d) o << "hom " << p.objects[ab.first] << ' ' << p.objects[ab.second] << ' ' << d << '\n';
  for (const auto& [a, v] : p.identities)
    for (std::size_t k = 0; k < v.size(); ++k)
      if (sgn(v[k]) != 0) o << "id " << p.objects[a] << ' ' << k << ' ' << v[k].get_str() << '\n';
  for (const auto& [abc, t] : p.compositions)
    for (std::size_t i = 0; i < t.first_dim; ++i)
      for (std::size_t j = 0; j < t.second_dim; ++j) {
        auto cell = t.at(i, j);
        std::sort(cell.begin(), cell.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [k, v] : cell)
          if (sgn(v) != 0)
            o << "comp " << p.objects[abc[0]] << ' ' << p.objects[abc[1]] << ' ' << p.objects[abc[2]] << ' ' << i << ' '
              << j << ' ' << k << ' ' << v.get_str() << '\n';
      }
  return o.str();
}

// ---------------------------------------------------------------------------------------------
// Bialgebra with its generating modules:
//   name <name>
//   dim <n>
//   basis <label>...                 optional
//   unit <k> <value>                 counit <k> <value>
//   mult <i> <j> <k> <value>         coefficient of e_k in e_i e_j
//   comult <i> <j> <k> <value>       coefficient of e_j (x) e_k in Delta(e_i)
//   antipode <row> <col> <value>     optional; column j holds S(e_j)
//   module <name> <dim>
//   act <module> <i> <row> <col> <value>

struct BialgebraDocument {
  Bialgebra algebra;
  std::vector<ModuleData> modules;
};

inline BialgebraDocument read_bialgebra(std::string_view text) {
  LineReader r(text);
  expect_header(r, "bialgebra");
  BialgebraDocument doc;
  auto& b = doc.algebra;
  bool have_name = false;
  std::size_t n = 0;
  std::set<std::string> seen;
  std::map<std::string, std::size_t> modules;
  auto need_dim = [&](const Line& l) {
    if (n == 0) l.fail("'dim' must precede structure constants");
  };
  auto once = [&](const Line& l, std::string key) {
    if (!seen.insert(std::move(key)).second) l.fail("repeated entry");
  };
  auto value = [&](const Line& l, std::size_t k) {
    auto v = detail::parse_rat(l, k, l.tokens[k].text);
    if (sgn(v) == 0) l.fail("explicit zero entry", k);
    return v;
  };
  while (!r.done()) {
    const auto& l = r.next();
    const auto& key = l.tokens[0].text;
    if (key == "name") {
      if (have_name) l.fail("duplicate 'name'");
      l.expect_arity(2);
      b.name = l.tokens[1].text;
      have_name = true;
    } else if (key == "dim") {
      l.expect_arity(2);
      if (n) l.fail("duplicate 'dim'");
      n = detail::parse_index(l, 1);
      if (n == 0 || n > 64) l.fail("dimension must lie in 1..64", 1);
      b.dim = n;
      b.mult.assign(n * n * n, Rational(0));
      b.comult.assign(n * n * n, Rational(0));
      b.unit.assign(n, Rational(0));
      b.counit.assign(n, Rational(0));
    } else if (key == "basis") {
      need_dim(l);
      if (!b.basis_names.empty()) l.fail("duplicate 'basis'");
      l.expect_arity(n + 1);
      for (std::size_t k = 1; k <= n; ++k) b.basis_names.push_back(l.tokens[k].text);
    } else if (key == "unit" || key == "counit") {
      need_dim(l);
      l.expect_arity(3);
      auto k = detail::parse_index(l, 1, n);
      once(l, key + " " + std::to_string(k));
      (key == "unit" ? b.unit : b.counit)[k] = value(l, 2);
    } else if (key == "mult" || key == "comult") {
      need_dim(l);
      l.expect_arity(5);
      auto i = detail::parse_index(l, 1, n), j = detail::parse_index(l, 2, n), k = detail::parse_index(l, 3, n);
      once(l, key + " " + std::to_string(i) + " " + std::to_string(j) + " " + std::to_string(k));
      (key == "mult" ? b.mult : b.comult)[(i * n + j) * n + k] = value(l, 4);
    } else if (key == "antipode") {
      need_dim(l);
      l.expect_arity(4);
      auto i = detail::parse_index(l, 1, n), j = detail::parse_index(l, 2, n);
      once(l, "antipode " + std::to_string(i) + " " + std::to_string(j));
      if (!b.antipode) b.antipode = QMatrix(n, n);
      (*b.antipode)(i, j) = value(l, 3);
    } else if (key == "module") {
      need_dim(l);
      l.expect_arity(3);
      detail::check_name(l, 1);
      if (l.tokens[1].text == "1") l.fail("'1' names the unit object", 1);
      if (!modules.emplace(l.tokens[1].text, doc.modules.size()).second) l.fail("duplicate module", 1);
      auto d = detail::parse_index(l, 2);
      if (d == 0) l.fail("module dimension must be positive", 2);
      doc.modules.push_back({l.tokens[1].text, std::vector<QMatrix>(n, QMatrix(d, d))});
    } else if (key == "act") {
      need_dim(l);
      l.expect_arity(6);
      auto it = modules.find(l.tokens[1].text);
      if (it == modules.end()) l.fail("unknown module '" + l.tokens[1].text + "'", 1);
      auto& m = doc.modules[it->second];
      std::size_t d = m.dim();
      auto i = detail::parse_index(l, 2, n), row = detail::parse_index(l, 3, d), col = detail::parse_index(l, 4, d);
      once(l, "act " + l.tokens[1].text + " " + std::to_string(i) + " " + std::to_string(row) + " " + std::to_string(col));
      m.action[i](row, col) = value(l, 5);
    } else {
      l.fail("unknown keyword '" + key + "'");
    }
  }
  std::size_t end = r.last_line();
  if (!have_name) throw ParseError("missing 'name'", end, 1);
  if (!n) throw ParseError("missing 'dim'", end, 1);
  return doc;
}

inline std::string write_bialgebra(const Bialgebra& b, const std::vector<ModuleData>& modules) {
  std::ostringstream o;
  std::size_t n = b.dim;
  o << header("bialgebra") << '\n' << "name " << b.name << '\n' << "dim " << n << '\n';
  if (!b.basis_names.empty()) {
    o << "basis";
    for (const auto& s : b.basis_names) o << ' ' << s;
    o << '\n';
  }
  for (std::size_t k = 0; k < n; ++k)
    if (sgn(b.unit[k]) != 0) o << "unit " << k << ' ' << b.unit[k].get_str() << '\n';
  for (std::size_t k = 0; k < n; ++k)
    if (sgn(b.counit[k]) != 0) o << "counit " << k << ' ' << b.counit[k].get_str() << '\n';
  for (const char* key : {"mult", "comult"}) {
    const auto& t = std::string(key) == "mult" ? b.mult : b.comult;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (sgn(t[(i * n + j) * n + k]) != 0)
            o << key << ' ' << i << ' ' << j << ' ' << k << ' ' << t[(i * n + j) * n + k].get_str() << '\n';
  }
  if (b.antipode)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (sgn((*b.antipode)(i, j)) != 0) o << "antipode " << i << ' ' << j << ' ' << (*b.antipode)(i, j).get_str() << '\n';
  for (const auto& m : modules) {
    o << "module " << m.name << ' ' << m.dim() << '\n';
    for (std::size_t i = 0; i < m.action.size(); ++i)
      for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
          if (sgn(m.action[i](r, c)) != 0)
            o << "act " << m.name << ' ' << i << ' ' << r << ' ' << c << ' ' << m.action[i](r, c).get_str() << '\n';
  }
  return o.str();
}

// ---------------------------------------------------------------------------------------------
// Base categories from files or builtin names.

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline BasePtr base_from_text(std::string_view text) {
  auto kind = detect_kind(text);
  if (kind == "presentation") return std::make_shared<PresentedCategory>(read_presentation(text));
  if (kind == "bialgebra") {
    auto doc = read_bialgebra(text);
    auto name = doc.algebra.name;
    return std::make_shared<ModuleCategory>(name, std::move(doc.algebra), std::move(doc.modules));
  }
  throw ParseError("a base category file must be a presentation or a bialgebra, not '" + kind + "'", 1, 1);
}

// A builtin base name or the path of a presentation or bialgebra file.
inline BasePtr load_base(const std::string& spec) {
  for (const auto& n : builtin_base_names())
    if (n == spec) return builtin_base(spec);
  std::ifstream probe(spec);
  if (!probe) throw ArgumentError("'" + spec + "' is neither a builtin base nor a readable file");
  return base_from_text(read_file(spec));
}

inline std::string write_base(const BaseCategory& base) {
  if (auto p = dynamic_cast<const PresentedCategory*>(&base)) return write_presentation(p->presentation());
  if (auto m = dynamic_cast<const ModuleCategory*>(&base)) {
    Bialgebra b = m->bialgebra();
    b.name = m->name();
    return write_bialgebra(b, m->generator_modules());
  }
  throw CapabilityError("base '" + base.name() + "' has no file representation");
}

// ---------------------------------------------------------------------------------------------
// Morphisms:
//   base <name>
//   rank symbolic | rank <rational>
//   source <object spec>
//   target <object spec>
//   component <labels> <k:v>...     labels are comma separated block labels, '-' when empty

using AnyMorphism = std::variant<Morphism<SymbolicRank>, Morphism<SpecializedRank>>;

namespace detail {

inline BasePtr resolve_base(const Line& l, const BasePtr& given) {
  auto name = l.rest(1);
  if (given) {
    if (given->name() != name) l.fail("file refers to base '" + name + "' but '" + given->name() + "' was supplied", 1);
    return given;
  }
  try {
    return builtin_base(name);
  } catch (const ArgumentError&) {
    l.fail("unknown base '" + name + "'; supply it explicitly", 1);
  }
}

inline std::variant<SymbolicRank, SpecializedRank> parse_rank_line(const Line& l) {
  l.expect_arity(2);
  if (l.tokens[1].text == "symbolic") return SymbolicRank{};
  return SpecializedRank{parse_rat(l, 1, l.tokens[1].text)};
}

inline Object parse_object_line(const Line& l, const BaseCategory& base) {
  if (l.tokens.size() < 2) l.fail("missing object specification", 1);
  try {
    return parse_object_spec(base, l.rest(1));
  } catch (const ArgumentError& e) {
    l.fail(e.what(), 1);
  }
}

template <RankContext Rank>
void read_component(const Line& l, Morphism<Rank>& f) {
  if (l.tokens.size() < 2) l.fail("component needs block labels", 1);
  std::vector<std::size_t> labels;
  const auto& s = l.tokens[1].text;
  if (s != "-") {
    std::size_t start = 0;
    while (true) {
      auto comma = s.find(',', start);
      auto piece = s.substr(start, comma == s.npos ? s.npos : comma - start);
      if (piece.empty() || piece.find_first_not_of("0123456789") != piece.npos || piece.size() > 6)
        l.fail("malformed block label list", 1);
      labels.push_back(std::stoul(piece));
      if (comma == s.npos) break;
      start = comma + 1;
    }
  }
  Recollement r;
  try {
    r = Recollement::from_labels(f.sizes(), labels);
  } catch (const ArgumentError& e) {
    l.fail(e.what(), 1);
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != r.label(i)) l.fail("block labels must be in first-occurrence order", 1);
  if (f.components().count(r)) l.fail("duplicate component", 1);
  auto v = parse_sparse<typename Rank::value_type>(l, 2, product_dim(f.layout(r)));
  bool any = false;
  for (const auto& x : v) any = any || !is_zero(x);
  if (!any) l.fail("component has no nonzero coefficient", 1);
  f.add(r, v);
}

template <RankContext Rank>
void write_components(std::ostringstream& o, const Morphism<Rank>& f) {
  for (const auto& [r, v] : f.components()) {
    o << "component ";
    if (r.size() == 0) o << '-';
    for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r.label(i);
    o << sparse_text(v) << '\n';
  }
}

template <RankContext Rank>
std::string rank_text(const Rank& rank) {
  if constexpr (std::is_same_v<Rank, SymbolicRank>)
    return "symbolic";
  else
    return rank.t0.get_str();
}

}  // namespace detail

template <RankContext Rank>
std::string write_morphism(const Morphism<Rank>& f) {
  std::ostringstream o;
  o << header("morphism") << '\n'
    << "base " << f.base().name() << '\n'
    << "rank " << detail::rank_text(f.rank()) << '\n'
    << "source " << object_to_string(f.base(), f.source()) << '\n'
    << "target " << object_to_string(f.base(), f.target()) << '\n';
  detail::write_components(o, f);
  return o.str();
}

inline std::string write_morphism(const AnyMorphism& f) {
  return std::visit([](const auto& g) { return write_morphism(g); }, f);
}

// Reads a morphism; `base` resolves the base line when it does not name a builtin base.
inline AnyMorphism read_morphism(std::string_view text, const BasePtr& base = nullptr) {
  LineReader r(text);
  expect_header(r, "morphism");
  auto take = [&](const char* k) -> const Line& {
    if (r.done()) throw ParseError(std::string("missing '") + k + "'", r.last_line(), 1);
    const auto& l = r.next();
    if (l.tokens[0].text != k) l.fail(std::string("expected '") + k + "'");
    return l;
  };
  BasePtr b = detail::resolve_base(take("base"), base);
  auto rank = detail::parse_rank_line(take("rank"));
  Object src = detail::parse_object_line(take("source"), *b);
  Object tgt = detail::parse_object_line(take("target"), *b);
  return std::visit(
      [&](const auto& rk) -> AnyMorphism {
        using R = std::decay_t<decltype(rk)>;
        Morphism<R> f(b, rk, src, tgt);
        while (!r.done()) {
          const auto& l = r.next();
          if (l.tokens[0].text != "component") l.fail("expected 'component'");
          detail::read_component(l, f);
        }
        return f;
      },
      rank);
}

// ---------------------------------------------------------------------------------------------
// Formal objects of the Karoubi envelope: a morphism-file preamble, one 'summand' line per summand,
// then 'entry <i> <j>' lines each followed by the components of e[i][j].

template <RankContext Rank>
std::string write_formal(const FormalObject<Rank>& x) {
  std::ostringstream o;
  o << header("formal") << '\n'
    << "base " << x.base_ptr()->name() << '\n'
    << "rank " << detail::rank_text(x.rank()) << '\n';
  for (const auto& s : x.summands()) o << "summand " << object_to_string(*x.base_ptr(), s) << '\n';
  const auto& e = x.idempotent();
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e[i].size(); ++j) {
      if (e[i][j].is_zero()) continue;
      o << "entry " << i << ' ' << j << '\n';
      detail::write_components(o, e[i][j]);
    }
  return o.str();
}

using AnyFormalObject = std::variant<FormalObject<SymbolicRank>, FormalObject<SpecializedRank>>;

inline AnyFormalObject read_formal(std::string_view text, const BasePtr& base = nullptr) {
  LineReader r(text);
  expect_header(r, "formal");
  auto take = [&](const char* k) -> const Line& {
    if (r.done()) throw ParseError(std::string("missing '") + k + "'", r.last_line(), 1);
    const auto& l = r.next();
    if (l.tokens[0].text != k) l.fail(std::string("expected '") + k + "'");
    return l;
  };
  BasePtr b = detail::resolve_base(take("base"), base);
  auto rank = detail::parse_rank_line(take("rank"));
  std::vector<Object> summands;
  while (!r.done() && r.peek().tokens[0].text == "summand") summands.push_back(detail::parse_object_line(r.next(), *b));
  return std::visit(
      [&](const auto& rk) -> AnyFormalObject {
        using R = std::decay_t<decltype(rk)>;
        std::size_t n = summands.size();
        MorphismGrid<R> e(n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) e[i].emplace_back(b, rk, summands[j], summands[i]);
        std::set<std::pair<std::size_t, std::size_t>> seen;
        Morphism<R>* current = nullptr;
        while (!r.done()) {
          const auto& l = r.next();
          if (l.tokens[0].text == "entry") {
            l.expect_arity(3);
            auto i = detail::parse_index(l, 1, n), j = detail::parse_index(l, 2, n);
            if (!seen.insert({i, j}).second) l.fail("duplicate entry", 1);
            current = &e[i][j];
          } else if (l.tokens[0].text == "component") {
            if (!current) l.fail("component before any 'entry'");
            detail::read_component(l, *current);
          } else {
            l.fail("expected 'entry' or 'component'");
          }
        }
        try {
          return FormalObject<R>(b, rk, summands, e);
        } catch (const ArgumentError& ex) {
          throw ParseError(ex.what(), r.last_line(), 1);
        }
      },
      rank);
}

// ---------------------------------------------------------------------------------------------
// Algebra tables:
//   field rational | field polynomial
//   dim <n>
//   unit <k:v>...
//   label <i> <text>
//   prod <i> <j> <k:v>...

template <class V>
std::string write_table(const AlgebraTable<V>& a) {
  std::ostringstream o;
  o << header("table") << '\n'
    << "field " << (std::is_same_v<V, RankPolynomial> ? "polynomial" : "rational") << '\n'
    << "dim " << a.dim << '\n'
    << "unit" << detail::sparse_text(a.unit) << '\n';
  for (std::size_t i = 0; i < a.labels.size(); ++i)
    if (!a.labels[i].empty()) o << "label " << i << ' ' << a.labels[i] << '\n';
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      auto cell = a.product(i, j);
      if (cell.empty()) continue;
      std::sort(cell.begin(), cell.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      std::vector<V> dense(a.dim);
      for (const auto& [k, v] : cell) dense[k] += v;
      auto s = detail::sparse_text(dense);
      if (!s.empty()) o << "prod " << i << ' ' << j << s << '\n';
    }
  return o.str();
}

using AnyTable = std::variant<AlgebraTable<RankPolynomial>, AlgebraTable<Rational>>;

inline AnyTable read_table(std::string_view text) {
  LineReader r(text);
  expect_header(r, "table");
  auto take = [&](const char* k) -> const Line& {
    if (r.done()) throw ParseError(std::string("missing '") + k + "'", r.last_line(), 1);
    const auto& l = r.next();
    if (l.tokens[0].text != k) l.fail(std::string("expected '") + k + "'");
    return l;
  };
  const auto& fl = take("field");
  fl.expect_arity(2);
  bool poly = fl.tokens[1].text == "polynomial";
  if (!poly && fl.tokens[1].text != "rational") fl.fail("field must be 'rational' or 'polynomial'", 1);
  const auto& dl = take("dim");
  dl.expect_arity(2);
  std::size_t n = detail::parse_index(dl, 1);
  auto body = [&](auto tag) -> AnyTable {
    using V = decltype(tag);
    AlgebraTable<V> a;
    a.dim = n;
    a.products.assign(n * n, {});
    a.unit = detail::parse_sparse<V>(take("unit"), 1, n);
    std::vector<bool> seen(n * n);
    while (!r.done()) {
      const auto& l = r.next();
      const auto& key = l.tokens[0].text;
      if (key == "label") {
        if (l.tokens.size() < 3) l.fail("'label' needs an index and text", l.tokens.size());
        auto i = detail::parse_index(l, 1, n);
        a.labels.resize(n);
        if (!a.labels[i].empty()) l.fail("duplicate label", 1);
        a.labels[i] = l.rest(2);
      } else if (key == "prod") {
        if (l.tokens.size() < 3) l.fail("'prod' needs two indices", l.tokens.size());
        auto i = detail::parse_index(l, 1, n), j = detail::parse_index(l, 2, n);
        if (seen[i * n + j]) l.fail("duplicate product", 1);
        seen[i * n + j] = true;
        auto v = detail::parse_sparse<V>(l, 3, n);
        for (std::size_t k = 0; k < n; ++k)
          if (!is_zero(v[k])) a.products[i * n + j].emplace_back(static_cast<std::uint32_t>(k), v[k]);
      } else {
        l.fail("unknown keyword '" + key + "'");
      }
    }
    return a;
  };
  return poly ? body(RankPolynomial()) : body(Rational());
}

// ---------------------------------------------------------------------------------------------
// Terms: the header line followed by one s-expression.

inline TermPtr read_term(const BaseCategory& base, std::string_view text) {
  LineReader r(text, ';');
  std::size_t header_line = r.done() ? 0 : r.peek().number;
  expect_header(r, "term");
  // Blank out everything up to the end of the header line so positions stay those of the file.
  std::string body(text);
  std::size_t line = 1;
  for (std::size_t i = 0; i < body.size() && line <= header_line; ++i) {
    if (body[i] == '\n')
      ++line;
    else
      body[i] = ' ';
  }
  return parse_term(base, body);
}

inline std::string write_term(const BaseCategory& base, const Term& t) {
  return header("term") + "\n" + term_to_string(base, t) + "\n";
}

}  // namespace interpcat::io
