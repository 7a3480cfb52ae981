// Command-line front end. Exit status: 0 when every check passes, 1 when a check fails,
// 2 on malformed input, 3 when the base category lacks a required capability.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include "interpcat/interpcat.hpp"

namespace ic = interpcat;

namespace {

using AnyRank = std::variant<ic::SymbolicRank, ic::SpecializedRank>;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AnyRank parse_rank(const std::string& text) {
  if (text == "symbolic" || text == "t") return ic::SymbolicRank{};
  try {
    return ic::SpecializedRank{ic::parse_rational(text)};
  } catch (const ic::ArgumentError& e) {
    throw InputError("--t expects 'symbolic' or a rational number: " + std::string(e.what()));
  }
}

std::string rank_label(const AnyRank& r) {
  return std::holds_alternative<ic::SymbolicRank>(r) ? "symbolic" : std::get<ic::SpecializedRank>(r).t0.get_str();
}

ic::Rational require_rational(const AnyRank& r, const std::string& what) {
  if (auto s = std::get_if<ic::SpecializedRank>(&r)) return s->t0;
  throw InputError(what + " needs a rational --t");
}

std::size_t default_trials() {
  if (const char* env = std::getenv("INTERPCAT_TRIALS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 50;
}

// Reads a file and prefixes parse diagnostics with its path.
template <class F>
auto with_file(const std::string& path, F&& f) {
  std::string text = ic::io::read_file(path);
  try {
    return f(text);
  } catch (const ic::ParseError& e) {
    throw FileParseError(path + ": " + e.what());
  }
}

ic::BasePtr load_base(const std::string& spec) {
  for (const auto& n : ic::builtin_base_names())
    if (n == spec) return ic::builtin_base(spec);
  return with_file(spec, [](const std::string& text) { return ic::io::base_from_text(text); });
}

int verdict(bool ok) {
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------------------------

int cmd_validate(const std::string& path, const std::optional<std::string>& base_spec, const AnyRank& rank) {
  return with_file(path, [&](const std::string& text) {
    auto kind = ic::io::detect_kind(text);
    ic::BasePtr base = base_spec ? load_base(*base_spec) : nullptr;
    if (kind == "presentation") {
      auto p = ic::io::read_presentation(text);
      auto rep = ic::validate(p);
      std::cout << "presentation '" << p.name << "': " << rep.summary() << '\n';
      return verdict(rep.ok());
    }
    if (kind == "bialgebra") {
      auto doc = ic::io::read_bialgebra(text);
      auto rep = ic::validate(doc.algebra);
      if (rep.ok())
        for (const auto& m : doc.modules) {
          auto r = ic::validate(m, doc.algebra);
          for (auto& v : r.violations) rep.violations.push_back("module " + m.name + ": " + v);
        }
      std::cout << "bialgebra '" << doc.algebra.name << "' with " << doc.modules.size() << " module(s): " << rep.summary()
                << '\n';
      if (rep.ok()) {
        ic::ModuleCategory cat(doc.algebra.name, doc.algebra, doc.modules);
        std::cout << "cocommutative: " << (cat.cocommutative() ? "yes" : "no") << '\n';
      }
      return verdict(rep.ok());
    }
    if (kind == "morphism") {
      auto f = ic::io::read_morphism(text, base);
      std::visit([](const auto& g) { std::cout << "morphism " << ic::describe(g) << '\n'; }, f);
      return verdict(true);
    }
    if (kind == "formal") {
      auto x = ic::io::read_formal(text, base);
      std::visit([](const auto& y) { std::cout << "formal object with " << y.size() << " summand(s), idempotent\n"; }, x);
      return verdict(true);
    }
    if (kind == "table") {
      auto t = ic::io::read_table(text);
      return std::visit(
          [](const auto& a) {
            std::cout << "algebra table of dimension " << a.dim << '\n';
            try {
              a.validate();
            } catch (const ic::ValidationError& e) {
              std::cout << e.what() << '\n';
              return verdict(false);
            }
            std::cout << "unit and associativity laws hold\n";
            return verdict(true);
          },
          t);
    }
    if (kind == "term") {
      if (!base) base = ic::builtin_base("triv");
      auto term = ic::io::read_term(*base, text);
      return std::visit(
          [&](const auto& r) {
            auto f = ic::evaluate(base, r, *term);
            std::cout << "term evaluates to " << ic::describe(f) << '\n';
            return verdict(true);
          },
          rank);
    }
    throw InputError("unknown document kind '" + kind + "'");
  });
}

int cmd_eval(const std::string& path, const std::string& base_spec, const AnyRank& rank) {
  auto base = load_base(base_spec);
  auto term = with_file(path, [&](const std::string& text) { return ic::io::read_term(*base, text); });
  std::visit([&](const auto& r) { std::cout << ic::io::write_morphism(ic::evaluate(base, r, *term)); }, rank);
  return 0;
}

int cmd_binary(const std::string& op, const std::string& p1, const std::string& p2,
               const std::optional<std::string>& base_spec) {
  ic::BasePtr base = base_spec ? load_base(*base_spec) : nullptr;
  auto read = [&](const std::string& p) {
    return with_file(p, [&](const std::string& text) { return ic::io::read_morphism(text, base); });
  };
  auto a = read(p1), b = read(p2);
  if (a.index() != b.index()) throw InputError("the two morphisms live over different kinds of rank");
  std::visit(
      [&](const auto& f) {
        using M = std::decay_t<decltype(f)>;
        const auto& g = std::get<M>(b);
        if (!(f.rank() == g.rank())) throw InputError("the two morphisms live over different ranks");
        if (f.base_ptr() != g.base_ptr() && f.base().name() != g.base().name())
          throw InputError("the two morphisms live over different bases");
        if (op == "compose") {
          if (!(g.target() == f.source()))
            throw InputError("cannot compose: target of the second file differs from the source of the first");
          std::cout << ic::io::write_morphism(ic::compose(f, g));
        } else {
          std::cout << ic::io::write_morphism(ic::tensor(f, g));
        }
      },
      a);
  return 0;
}

int cmd_oracle(const std::string& base_spec, std::size_t d, std::size_t trials, std::uint64_t seed) {
  auto base = load_base(base_spec);
  std::cout << "oracle: base=" << base->name() << " d=" << d << " trials=" << trials << " seed=" << seed << '\n';
  ic::RandomSource rng(seed);
  std::size_t passed = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto a = ic::random_object(*base, rng), b = ic::random_object(*base, rng), c = ic::random_object(*base, rng);
    auto f = ic::random_morphism(base, ic::SymbolicRank{}, a, b, rng);
    auto g = ic::random_morphism(base, ic::SymbolicRank{}, b, c, rng);
    auto rep = ic::oracle_check(g, f, d);
    if (rep.ok) {
      ++passed;
    } else {
      std::cout << "trial " << i << " failed: " << ic::object_to_string(*base, a) << " -> "
                << ic::object_to_string(*base, b) << " -> " << ic::object_to_string(*base, c) << ": " << rep.detail
                << '\n';
    }
  }
  std::cout << "passed " << passed << "/" << trials << '\n';
  return verdict(passed == trials);
}

int cmd_relations(const std::string& base_spec, const AnyRank& rank, std::uint64_t seed, std::size_t max_len) {
  auto base = load_base(base_spec);
  std::cout << "relations: base=" << base->name() << " t=" << rank_label(rank) << " seed=" << seed
            << " max-len=" << max_len << '\n';
  return std::visit(
      [&](const auto& r) {
        auto rep = ic::relation_suite(base, r, seed, max_len);
        std::cout << ic::format_report(rep);
        bool ok = true;
        for (const auto& x : rep.relations) ok = ok && (x.skipped || x.ok());
        return verdict(ok);
      },
      rank);
}

int cmd_dim(const std::string& base_spec, const std::string& object, const AnyRank& rank) {
  auto base = load_base(base_spec);
  ic::Object a;
  try {
    a = ic::parse_object_spec(*base, object);
  } catch (const ic::ArgumentError& e) {
    throw InputError("--object: " + std::string(e.what()));
  }
  std::cout << "object " << ic::object_to_string(*base, a) << " over " << base->name() << " at t=" << rank_label(rank)
            << '\n';
  std::cout << "dim End = " << ic::hom_dimension(*base, a, a) << '\n';
  std::visit(
      [&](const auto& r) {
        auto d = ic::dimension(base, r, a);
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, ic::RankPolynomial>)
          std::cout << "categorical dimension = " << d.pretty() << '\n';
        else
          std::cout << "categorical dimension = " << d.get_str() << '\n';
      },
      rank);
  return 0;
}

struct EndalgOptions {
  std::string base = "triv";
  std::string object;
  std::string t = "symbolic";
  std::string analyze = "simples";
  std::string basis = "bracket";
  std::uint64_t seed = 1;
};

int cmd_endalg(const EndalgOptions& o) {
  auto base = load_base(o.base);
  auto rank = parse_rank(o.t);
  ic::Object a;
  try {
    a = ic::parse_object_spec(*base, o.object);
  } catch (const ic::ArgumentError& e) {
    throw InputError("--object: " + std::string(e.what()));
  }
  auto basis = o.basis == "double" ? ic::EndBasis::DoubleBracket : ic::EndBasis::Bracket;
  std::cout << "endalg: base=" << base->name() << " object=" << ic::object_to_string(*base, a)
            << " t=" << rank_label(rank) << " basis=" << o.basis << '\n';

  if (o.analyze == "quotient") {
    auto t0 = require_rational(rank, "quotient analysis");
    auto br = a.as_bracket();
    if (br.entries.empty()) throw InputError("quotient analysis needs a nonempty bracket");
    for (const auto& w : br.entries)
      if (!(w == br.entries[0])) throw InputError("quotient analysis needs a bracket with equal entries");
    std::size_t m = br.entries.size();
    auto q = ic::symmetric_quotient(base, ic::SpecializedRank{t0}, br.entries[0], m);
    std::cout << "dim = " << q.algebra.dim << ", ideal dim = " << q.ideal.size() << ", quotient dim = " << q.quotient.table.dim
              << '\n';
    std::cout << "matches Q[S_" << m << "]: dimension " << (q.check.dimension_matches ? "yes" : "no")
              << ", independent " << (q.check.images_independent ? "yes" : "no") << ", multiplicative "
              << (q.check.multiplicative ? "yes" : "no") << ", unit " << (q.check.unit_preserved ? "yes" : "no") << '\n';
    return verdict(q.check.ok());
  }

  if (std::holds_alternative<ic::SymbolicRank>(rank)) {
    auto e = ic::end_algebra(base, ic::SymbolicRank{}, a, basis);
    std::cout << "dim = " << e.dim << '\n';
    if (o.analyze == "table") {
      std::cout << ic::io::write_table(e);
      return 0;
    }
    if (o.analyze != "gram") throw InputError("analysis '" + o.analyze + "' needs a rational --t");
    auto g = ic::gram_det(e);
    std::cout << "gram_det = " << g.pretty() << '\n';
    bool natural = true;
    if (g.is_zero()) {
      std::cout << "gram_det vanishes identically\n";
      return verdict(false);
    }
    std::cout << "rational roots:";
    for (const auto& r : ic::rational_roots(g)) {
      std::cout << ' ' << r.value.get_str() << "^" << r.multiplicity;
      natural = natural && r.value.get_den() == 1 && sgn(r.value) >= 0;
    }
    std::cout << "\nall rational roots natural: " << (natural ? "yes" : "no") << '\n';
    return verdict(natural);
  }

  auto t0 = std::get<ic::SpecializedRank>(rank).t0;
  auto e = ic::end_algebra(base, ic::SpecializedRank{t0}, a, basis);
  std::cout << "dim = " << e.dim << '\n';
  if (o.analyze == "table") {
    std::cout << ic::io::write_table(e);
    return 0;
  }
  if (o.analyze == "gram") {
    auto g = ic::gram_det(e);
    std::cout << "gram_det = " << g.get_str() << '\n';
    std::cout << (sgn(g) != 0 ? "semisimple" : "not semisimple") << '\n';
    return 0;
  }
  if (o.analyze == "radical") {
    auto r = ic::radical(e);
    std::cout << "radical dim = " << r.basis.size() << ", two-sided " << (r.two_sided ? "yes" : "no") << ", nilpotent "
              << (r.nilpotent ? "yes" : "no") << '\n';
    return verdict(r.two_sided && r.nilpotent);
  }
  if (o.analyze == "simples") {
    std::cout << "seed = " << o.seed << '\n';
    auto rep = ic::count_simples(e, o.seed);
    std::cout << rep.blocks.size() << " blocks, center dim " << rep.center_dim << '\n';
    std::cout << "degrees:";
    for (const auto& b : rep.blocks) {
      if (b.split)
        std::cout << ' ' << b.degree;
      else
        std::cout << " [non-split, dim " << b.dimension << ", center dim " << b.center_dim << "]";
    }
    std::cout << '\n';
    bool ok = rep.all_split() && rep.sum_of_squares() == e.dim;
    if (rep.all_split()) std::cout << "sum of squares = " << rep.sum_of_squares() << " (dim " << e.dim << ")\n";
    return verdict(ok);
  }
  if (o.analyze == "local") {
    auto rep = ic::is_local(e);
    std::cout << rep.describe() << '\n';
    return 0;
  }
  throw InputError("unknown analysis '" + o.analyze + "'");
}

int cmd_bases(const std::optional<std::string>& export_name) {
  if (export_name) {
    std::cout << ic::io::write_base(*load_base(*export_name));
    return 0;
  }
  for (const auto& name : ic::builtin_base_names()) {
    auto b = ic::builtin_base(name);
    std::cout << name << ": objects";
    for (const auto& w : ic::object_pool(*b)) std::cout << ' ' << b->object_label(w);
    std::cout << "; braided " << (b->has_braiding() ? "yes" : "no") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations in interpolation categories S_t(C)"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all subcommand help");

  std::optional<std::string> opt_base;
  std::string base = "triv", t = "symbolic", file1, file2, object;
  std::uint64_t seed = 1;
  std::size_t trials = default_trials(), d = 2, max_len = 2;

  auto* validate = app.add_subcommand("validate", "Check a file of any supported kind");
  validate->add_option("file", file1, "Input file")->required();
  validate->add_option("--base", opt_base, "Builtin base name or base file for morphism, formal and term files");
  validate->add_option("--t", t, "Rank used to evaluate term files");

  auto* eval = app.add_subcommand("eval", "Evaluate a term file and print the morphism");
  eval->add_option("file", file1, "Term file")->required();
  eval->add_option("--base", base, "Builtin base name or base file");
  eval->add_option("--t", t, "'symbolic' or a rational rank");

  auto* compose = app.add_subcommand("compose", "Print g o f for morphism files g and f");
  compose->add_option("g", file1, "Outer morphism")->required();
  compose->add_option("f", file2, "Inner morphism")->required();
  compose->add_option("--base", opt_base, "Base file when the morphisms do not use a builtin base");

  auto* tensor = app.add_subcommand("tensor", "Print the tensor product of two morphism files");
  tensor->add_option("f", file1, "Left factor")->required();
  tensor->add_option("g", file2, "Right factor")->required();
  tensor->add_option("--base", opt_base, "Base file when the morphisms do not use a builtin base");

  auto* oracle = app.add_subcommand("oracle", "Compare symbolic composition against the cell model at rank d");
  oracle->add_option("--base", base, "Builtin base name or base file");
  oracle->add_option("--rank", d, "Natural number d")->check(CLI::Range(0, 8));
  oracle->add_option("--trials", trials, "Random composable pairs (default from INTERPCAT_TRIALS or 50)");
  oracle->add_option("--seed", seed, "Random seed");

  EndalgOptions eo;
  auto* endalg = app.add_subcommand("endalg", "Analyse the endomorphism algebra of an object");
  endalg->add_option("--base", eo.base, "Builtin base name or base file");
  endalg->add_option("--object", eo.object, "Object such as '1,1' or 'reg|1'")->required();
  endalg->add_option("--t", eo.t, "'symbolic' or a rational rank");
  endalg->add_option("--analyze", eo.analyze, "gram, radical, simples, quotient, local or table")
      ->check(CLI::IsMember({"gram", "radical", "simples", "quotient", "local", "table"}));
  endalg->add_option("--basis", eo.basis, "bracket or double")->check(CLI::IsMember({"bracket", "double"}));
  endalg->add_option("--seed", eo.seed, "Random seed for the center computation");

  auto* relations = app.add_subcommand("relations", "Run the relation suite for the diagram generators");
  relations->add_option("--base", base, "Builtin base name or base file");
  relations->add_option("--t", t, "'symbolic' or a rational rank");
  relations->add_option("--seed", seed, "Random seed");
  relations->add_option("--max-len", max_len, "Longest base word used")->check(CLI::Range(1, 4));

  auto* dim = app.add_subcommand("dim", "Dimension of End and categorical dimension of an object");
  dim->add_option("--base", base, "Builtin base name or base file");
  dim->add_option("--object", object, "Object such as '1,1'")->required();
  dim->add_option("--t", t, "'symbolic' or a rational rank");

  std::optional<std::string> export_name;
  auto* bases = app.add_subcommand("bases", "List builtin bases or print one as a file");
  bases->add_option("--export", export_name, "Base to print in its file format");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file1, opt_base, parse_rank(t));
    if (*eval) return cmd_eval(file1, base, parse_rank(t));
    if (*compose) return cmd_binary("compose", file1, file2, opt_base);
    if (*tensor) return cmd_binary("tensor", file1, file2, opt_base);
    if (*oracle) return cmd_oracle(base, d, trials, seed);
    if (*endalg) return cmd_endalg(eo);
    if (*relations) return cmd_relations(base, parse_rank(t), seed, max_len);
    if (*dim) return cmd_dim(base, object, parse_rank(t));
    if (*bases) return cmd_bases(export_name);
  } catch (const FileParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ic::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ic::CapabilityError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ic::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const ic::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ic::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
