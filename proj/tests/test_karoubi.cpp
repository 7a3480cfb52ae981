#include <gtest/gtest.h>

#include <interpcat/karoubi.hpp>
#include <interpcat/random.hpp>

using namespace interpcat;

namespace {

const Rational kT0(7, 2);
const SpecializedRank kSpec{kT0};
const SymbolicRank kSym{};

Object ones(const BasePtr& base, std::size_t n) { return Object::bracket(std::vector<Word>(n, base->unit())); }

template <RankContext Rank>
MorphismGrid<Rank> random_grid(const BasePtr& base, const Rank& rank, const std::vector<Object>& src,
                               const std::vector<Object>& tgt, RandomSource& rng) {
  MorphismGrid<Rank> m;
  for (const auto& t : tgt) {
    m.emplace_back();
    for (const auto& s : src) m.back().push_back(random_morphism(base, rank, s, t, rng, 0.6));
  }
  return m;
}

// <<x>> in End(<1>): the double-bracket element on the recollement with source and target apart.
template <RankContext Rank>
Morphism<Rank> separated_double_bracket(const BasePtr& base, const Rank& rank) {
  auto a = ones(base, 1);
  auto r = Recollement::from_labels({1, 1}, {0, 1});
  return from_double_bracket(DoubleBracket<Rank>(basis_morphism(base, rank, a, a, r, 0)));
}

std::vector<std::vector<std::size_t>> partitions_of(std::size_t n, std::size_t max_part) {
  if (n == 0) return {{}};
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = std::min(n, max_part); k >= 1; --k)
    for (auto rest : partitions_of(n - k, k)) {
      rest.insert(rest.begin(), k);
      out.push_back(rest);
    }
  return out;
}

std::size_t hook_dimension(const std::vector<std::size_t>& lambda) {
  std::size_t n = 0;
  for (auto x : lambda) n += x;
  std::size_t fact = 1, hooks = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= k;
  for (std::size_t r = 0; r < lambda.size(); ++r)
    for (std::size_t c = 0; c < lambda[r]; ++c) {
      std::size_t below = 0;
      for (std::size_t r2 = r + 1; r2 < lambda.size() && lambda[r2] > c; ++r2) ++below;
      hooks *= (lambda[r] - c - 1) + below + 1;
    }
  return fact / hooks;
}

}  // namespace

TEST(HomCoordinates, RoundTrip) {
  auto base = builtin_base("z2group");
  RandomSource rng(3);
  auto a = parse_object_spec(*base, "reg,1"), b = parse_object_spec(*base, "reg");
  auto f = random_morphism(base, kSym, a, b, rng, 0.8);
  auto c = hom_coordinates(f);
  EXPECT_EQ(c.size(), hom_dimension(*base, a, b));
  EXPECT_EQ(from_hom_coordinates(base, kSym, a, b, c), f);
  c.pop_back();
  EXPECT_THROW(from_hom_coordinates(base, kSym, a, b, c), ArgumentError);
}

TEST(DirectSum, EmptySumIsTheZeroObject) {
  auto base = builtin_base("triv");
  auto z = FormalObject<SpecializedRank>::direct_sum(base, kSpec, {});
  EXPECT_TRUE(z.is_zero_object());
  EXPECT_EQ(hom_dimension(z, z), 0u);
  auto x = FormalObject<SpecializedRank>::direct_sum(base, kSpec, {ones(base, 1)});
  auto xz = direct_sum<SpecializedRank>({x, z});
  EXPECT_EQ(xz, x);
  EXPECT_EQ(hom_dimension(xz, xz), 2u);
}

TEST(DirectSum, BlockCompositionMatchesExpansion) {
  auto base = builtin_base("z2group");
  RandomSource rng(5);
  std::vector<Object> a{ones(base, 1), parse_object_spec(*base, "reg")};
  std::vector<Object> b{parse_object_spec(*base, "reg"), Object()};
  std::vector<Object> c{ones(base, 2), parse_object_spec(*base, "reg")};
  auto A = FormalObject<SymbolicRank>::direct_sum(base, kSym, a);
  auto B = FormalObject<SymbolicRank>::direct_sum(base, kSym, b);
  auto C = FormalObject<SymbolicRank>::direct_sum(base, kSym, c);
  auto f = random_grid(base, kSym, a, b, rng), g = random_grid(base, kSym, b, c, rng);
  auto gf = compose(MatrixMorphism<SymbolicRank>(B, C, g), MatrixMorphism<SymbolicRank>(A, B, f));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      EXPECT_EQ(gf.entry(i, j), compose(g[i][0], f[0][j]) + compose(g[i][1], f[1][j]));
  EXPECT_THROW(compose(MatrixMorphism<SymbolicRank>(A, B, f), MatrixMorphism<SymbolicRank>(B, C, g)), ArgumentError);
}

TEST(DirectSum, BlockCompositionIsAssociative) {
  auto base = builtin_base("z2lines");
  RandomSource rng(7);
  auto pool = object_pool(*base);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<std::vector<Object>> objs(4);
    for (auto& o : objs)
      for (int k = 0; k < 2; ++k) o.push_back(Object::bracket(random_bracket(pool, rng, 2).entries));
    std::vector<FormalObject<SymbolicRank>> F;
    for (const auto& o : objs) F.push_back(FormalObject<SymbolicRank>::direct_sum(base, kSym, o));
    MatrixMorphism<SymbolicRank> f(F[0], F[1], random_grid(base, kSym, objs[0], objs[1], rng));
    MatrixMorphism<SymbolicRank> g(F[1], F[2], random_grid(base, kSym, objs[1], objs[2], rng));
    MatrixMorphism<SymbolicRank> h(F[2], F[3], random_grid(base, kSym, objs[2], objs[3], rng));
    EXPECT_EQ(compose(h, compose(g, f)), compose(compose(h, g), f));
  }
}

TEST(Image, IdentityAndZero) {
  auto base = builtin_base("triv");
  auto x = FormalObject<SpecializedRank>::direct_sum(base, kSpec, {ones(base, 1), ones(base, 2)});
  EXPECT_EQ(image(MatrixMorphism<SpecializedRank>::identity(x)), x);
  auto z = image(MatrixMorphism<SpecializedRank>::zero(x, x));
  EXPECT_TRUE(z.is_zero_object());
  EXPECT_EQ(hom_dimension(z, z), 0u);
  EXPECT_EQ(hom_dimension(x, x), 2u + 3u + 3u + 7u);
}

TEST(Image, NormalizedDoubleBracketIsAnIdempotentWithOneDimensionalEnd) {
  auto base = builtin_base("triv");
  auto xs = separated_double_bracket(base, kSym);
  EXPECT_EQ(compose(xs, xs), RankPolynomial::variable() * xs);
  auto x = separated_double_bracket(base, kSpec);
  auto one = FormalObject<SpecializedRank>::direct_sum(base, kSpec, {ones(base, 1)});
  MatrixMorphism<SpecializedRank> e(one, one, {{(Rational(1) / kT0) * x}});
  auto im = image(e);
  EXPECT_EQ(hom_dimension(im, im), 1u);
  EXPECT_TRUE(splits_as_biproduct(e));
  auto rest = image(MatrixMorphism<SpecializedRank>::identity(one) - e);
  EXPECT_EQ(hom_dimension(rest, rest), 1u);
  EXPECT_EQ(hom_dimension(im, rest), 0u);
}

TEST(Image, NonIdempotentReportsTheResidual) {
  auto base = builtin_base("triv");
  auto one = FormalObject<SpecializedRank>::direct_sum(base, kSpec, {ones(base, 1)});
  MatrixMorphism<SpecializedRank> e(one, one, {{separated_double_bracket(base, kSpec)}});
  try {
    image(e);
    FAIL() << "expected an error";
  } catch (const ArgumentError& err) {
    EXPECT_NE(std::string(err.what()).find("residual"), std::string::npos);
  }
}

TEST(Young, TrivialAndSignShapes) {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto e = young_symmetrizer({n});
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= k;
    GroupAlgebraElement expected(n);
    for (const auto& g : permutations(n)) expected.add(g, make_rational(1, static_cast<long>(fact)));
    EXPECT_EQ(e, expected);
  }
  GroupAlgebraElement sign2(2);
  sign2.add({0, 1}, make_rational(1, 2));
  sign2.add({1, 0}, make_rational(-1, 2));
  EXPECT_EQ(young_symmetrizer({1, 1}), sign2);
}

TEST(Young, IdempotentWithHookLengthIdealDimension) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (const auto& lambda : partitions_of(n, n)) {
      auto e = young_symmetrizer(lambda);
      EXPECT_EQ(e * e, e);
      std::vector<std::vector<Rational>> ideal;
      for (const auto& g : permutations(n)) ideal.push_back((GroupAlgebraElement::basis(g) * e).coordinates());
      EXPECT_EQ(span_rank(ideal), hook_dimension(lambda)) << "n=" << n;
    }
  EXPECT_THROW(young_symmetrizer({3, 3}), ResourceError);
  EXPECT_THROW(young_symmetrizer({1, 2}), ArgumentError);
}

TEST(Young, SpectralFallbackIsIdempotent) {
  // Unnormalized symmetrizer of shape (2,1).
  GroupAlgebraElement a(3), b(3);
  a.add({0, 1, 2}, 1);
  a.add({1, 0, 2}, 1);
  b.add({0, 1, 2}, 1);
  b.add({2, 1, 0}, -1);
  auto e = detail::spectral_idempotent(a * b);
  EXPECT_EQ(e * e, e);
  EXPECT_FALSE(e.terms().empty());
}

TEST(SymAction, IdentityAndTranspositions) {
  auto base = builtin_base("triv");
  auto a = ones(base, 3);
  EXPECT_EQ(sym_action(base, kSym, Permutation{0, 1, 2}, a), identity(base, kSym, a));
  auto s = sym_action(base, kSym, Permutation{1, 0, 2}, a);
  EXPECT_EQ(compose(s, s), identity(base, kSym, a));
  EXPECT_THROW(sym_action(base, kSym, Permutation{0, 0, 1}, a), ArgumentError);
  auto z = builtin_base("z2group");
  EXPECT_THROW(sym_action(z, kSym, Permutation{1, 0}, parse_object_spec(*z, "reg,1")), ArgumentError);
}

TEST(SymAction, GroupLawOnThreeStrands) {
  auto base = builtin_base("triv");
  auto a = ones(base, 3);
  for (const auto& g : permutations(3))
    for (const auto& h : permutations(3))
      EXPECT_EQ(compose(sym_action(base, kSym, g, a), sym_action(base, kSym, h, a)),
                sym_action(base, kSym, multiply(g, h), a));
}

TEST(SymAction, GroupLawOverANontrivialBase) {
  auto base = builtin_base("z2group");
  auto a = parse_object_spec(*base, "reg,reg");
  for (const auto& g : permutations(2))
    for (const auto& h : permutations(2))
      EXPECT_EQ(compose(sym_action(base, kSpec, g, a), sym_action(base, kSpec, h, a)),
                sym_action(base, kSpec, multiply(g, h), a));
}

TEST(SymAction, YoungSymmetrizersStayIdempotent) {
  auto base = builtin_base("triv");
  for (std::size_t n = 2; n <= 3; ++n)
    for (const auto& lambda : partitions_of(n, n)) {
      auto a = ones(base, n);
      auto f = sym_action(base, kSym, young_symmetrizer(lambda), a);
      EXPECT_EQ(compose(f, f), f);
    }
  auto a = ones(base, 2);
  auto obj = FormalObject<SpecializedRank>::direct_sum(base, kSpec, {a});
  MatrixMorphism<SpecializedRank> e(obj, obj, {{sym_action(base, kSpec, young_symmetrizer({2}), a)}});
  EXPECT_TRUE(splits_as_biproduct(e));
  auto plus = image(e);
  auto minus = image(MatrixMorphism<SpecializedRank>::identity(obj) - e);
  EXPECT_EQ(hom_dimension(plus, plus) + hom_dimension(minus, minus) + 2 * hom_dimension(plus, minus),
            hom_dimension(obj, obj));
}
