#include <gtest/gtest.h>

#include <algorithm>
#include <interpcat/algtools.hpp>

using namespace interpcat;

namespace {

const SymbolicRank kSym{};
const Rational kT0(7, 2);

Object ones(const BasePtr& base, std::size_t n) { return Object::bracket(std::vector<Word>(n, base->unit())); }

AlgebraTable<Rational> deligne(std::size_t m, const Rational& t0) {
  return end_algebra(builtin_base("triv"), SpecializedRank{t0}, ones(builtin_base("triv"), m));
}

// Upper triangular 2x2 matrices on E11, E12, E22.
AlgebraTable<Rational> upper_triangular() {
  std::vector<std::vector<Rational>> dense(9, std::vector<Rational>(3));
  auto set = [&](std::size_t i, std::size_t j, std::size_t k) { dense[i * 3 + j][k] = 1; };
  set(0, 0, 0);
  set(0, 1, 1);
  set(1, 2, 1);
  set(2, 2, 2);
  return table_from_products<Rational>(3, dense, {Rational(1), Rational(0), Rational(1)});
}

// Q x Q.
AlgebraTable<Rational> split_pair() {
  std::vector<std::vector<Rational>> dense(4, std::vector<Rational>(2));
  dense[0][0] = 1;
  dense[3][1] = 1;
  return table_from_products<Rational>(2, dense, {Rational(1), Rational(1)});
}

// Q(i) as a 2-dimensional Q-algebra.
AlgebraTable<Rational> gaussian() {
  std::vector<std::vector<Rational>> dense(4, std::vector<Rational>(2));
  dense[0][0] = 1;
  dense[1][1] = 1;
  dense[2][1] = 1;
  dense[3][0] = -1;
  return table_from_products<Rational>(2, dense, {Rational(1), Rational(0)});
}

using Dense = std::vector<std::vector<Rational>>;

Dense mat_mul(const Dense& a, const Dense& b) {
  Dense c(a.size(), std::vector<Rational>(b.front().size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b.front().size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Center by successive restriction: keep the subspace commuting with b_0, ..., b_i.
std::vector<std::vector<Rational>> brute_center(const AlgebraTable<Rational>& a) {
  std::size_t n = a.dim;
  std::vector<std::vector<Rational>> k;  // columns of the current subspace
  for (std::size_t i = 0; i < n; ++i) k.push_back(a.basis_vector(i));
  for (std::size_t i = 0; i < n && !k.empty(); ++i) {
    auto b = a.basis_vector(i);
    QMatrix m(n, k.size());
    for (std::size_t c = 0; c < k.size(); ++c) {
      auto l = a.multiply(b, k[c]), r = a.multiply(k[c], b);
      for (std::size_t row = 0; row < n; ++row) m(row, c) = l[row] - r[row];
    }
    std::vector<std::vector<Rational>> next;
    for (const auto& y : nullspace(m).basis) {
      std::vector<Rational> v(n);
      for (std::size_t c = 0; c < k.size(); ++c)
        for (std::size_t row = 0; row < n; ++row) v[row] += y[c] * k[c][row];
      next.push_back(std::move(v));
    }
    k = std::move(next);
  }
  return k;
}

// Block sizes from eigenvalue multiplicities of left multiplication by a random central element.
std::vector<std::size_t> brute_block_sizes(const AlgebraTable<Rational>& a) {
  auto center = brute_center(a);
  RandomSource rng(99);
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::vector<Rational> z(a.dim);
    for (const auto& v : center) {
      Rational c(rng.uniform(-9, 9));
      for (std::size_t i = 0; i < a.dim; ++i) z[i] += c * v[i];
    }
    auto l = a.left_matrix(z);
    // Characteristic polynomial by interpolation of det(x - L) at dim + 1 integer points.
    std::size_t n = a.dim;
    RankPolynomial chi;
    for (std::size_t p = 0; p <= n; ++p) {
      Rational x(static_cast<long>(p));
      QMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? x : Rational(0)) - l[i][j];
      Rational d = determinant(m);
      RankPolynomial lag(1);
      for (std::size_t q = 0; q <= n; ++q)
        if (q != p)
          lag = lag * RankPolynomial::from_coefficients({Rational(-static_cast<long>(q)), Rational(1)}) *
                (Rational(1) / Rational(static_cast<long>(p) - static_cast<long>(q)));
      chi += lag * d;
    }
    auto roots = rational_roots(chi);
    if (roots.size() != center.size()) continue;
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (const auto& r : roots) {
      auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(r.multiplicity))));
      EXPECT_EQ(d * d, r.multiplicity);
      sizes.push_back(d);
      total += r.multiplicity;
    }
    EXPECT_EQ(total, n);
    std::sort(sizes.begin(), sizes.end());
    return sizes;
  }
  ADD_FAILURE() << "no separating central element";
  return {};
}

std::vector<std::size_t> sorted_degrees(const SimplesReport& r) {
  std::vector<std::size_t> d;
  for (const auto& b : r.blocks) d.push_back(b.degree);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST(EndAlgebra, EmptyBracketIsOneDimensional) {
  auto a = end_algebra(builtin_base("triv"), kSym, Object());
  EXPECT_EQ(a.dim, 1u);
  a.validate();
}

TEST(EndAlgebra, DeligneTwoPointsHasDimensionSeven) {
  auto a = end_algebra(builtin_base("triv"), kSym, ones(builtin_base("triv"), 2));
  EXPECT_EQ(a.dim, 7u);
  a.validate();
  deligne(2, kT0).validate();
  end_algebra(builtin_base("triv"), kSym, ones(builtin_base("triv"), 2), EndBasis::DoubleBracket).validate();
}

TEST(EndAlgebra, DoubleBracketSquareIsRankTimesItself) {
  auto base = builtin_base("triv");
  auto a = end_algebra(base, kSym, ones(base, 1), EndBasis::DoubleBracket);
  ASSERT_EQ(a.dim, 2u);
  auto hb = hom_basis<SymbolicRank>(*base, ones(base, 1), ones(base, 1));
  std::size_t x = hb[0].first.block_count() == 2 ? 0 : 1;
  auto sq = a.product(x, x);
  ASSERT_EQ(sq.size(), 1u);
  EXPECT_EQ(sq[0].first, x);
  EXPECT_EQ(sq[0].second, RankPolynomial::variable());
}

TEST(EndAlgebra, OverAFormalObjectUsesTheCompressedBasis) {
  auto base = builtin_base("z2group");
  auto obj = FormalObject<SpecializedRank>::direct_sum(base, SpecializedRank{kT0}, {parse_object_spec(*base, "reg")});
  auto a = end_algebra(obj);
  EXPECT_EQ(a.dim, hom_dimension(obj, obj));
  a.validate();
}

TEST(TraceForm, MatchesExplicitTraceOfProducts) {
  auto a = end_algebra(builtin_base("z2group"), SpecializedRank{kT0}, parse_object_spec(*builtin_base("z2group"), "reg"));
  auto g = trace_form(a);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      auto p = mat_mul(a.left_matrix(a.basis_vector(i)), a.left_matrix(a.basis_vector(j)));
      Rational tr;
      for (std::size_t k = 0; k < a.dim; ++k) tr += p[k][k];
      EXPECT_EQ(g[i][j], tr);
    }
}

TEST(GramDet, OnePointDeligneIsTSquared) {
  // Basis <id>, <x>: <x><x> = (t - 2)<x> + (t - 1)<id>, so G = [[2, t-2], [t-2, (t-2)^2 + 2(t-1)]].
  auto base = builtin_base("triv");
  auto a = end_algebra(base, kSym, ones(base, 1));
  auto t = RankPolynomial::variable();
  EXPECT_EQ(gram_det(a), t * t);
  auto roots = rational_roots(gram_det(a));
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0].value, Rational(0));
}

TEST(GramDet, TwoPointDeligneRootsAreNaturalNumbers) {
  auto base = builtin_base("triv");
  auto d = gram_det(end_algebra(base, kSym, ones(base, 2)));
  ASSERT_FALSE(d.is_zero());
  auto roots = rational_roots(d);
  EXPECT_FALSE(roots.empty());
  for (const auto& r : roots) {
    EXPECT_EQ(r.value.get_den(), 1);
    EXPECT_GE(r.value, 0);
  }
  // The symbolic determinant specializes to the determinant at a point.
  EXPECT_EQ(d(kT0), gram_det(deligne(2, kT0)));
}

TEST(RationalRoots, FindsRootsWithMultiplicity) {
  auto x = RankPolynomial::variable();
  auto p = (x - RankPolynomial(Rational(3, 2))) * (x - RankPolynomial(Rational(3, 2))) * (x + RankPolynomial(5)) *
           (x * x - RankPolynomial(2));
  auto roots = rational_roots(p);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_EQ(roots[0].value, Rational(-5));
  EXPECT_EQ(roots[0].multiplicity, 1u);
  EXPECT_EQ(roots[1].value, make_rational(3, 2));
  EXPECT_EQ(roots[1].multiplicity, 2u);
  EXPECT_TRUE(rational_roots(RankPolynomial(3)).empty());
}

TEST(Radical, SemisimpleExamplesHaveZeroRadical) {
  EXPECT_TRUE(radical(symmetric_group_algebra(2)).basis.empty());
  EXPECT_TRUE(radical(deligne(2, kT0)).basis.empty());
  EXPECT_TRUE(radical(deligne(2, Rational(-1))).basis.empty());
  EXPECT_TRUE(radical(deligne(2, make_rational(1, 3))).basis.empty());
}

TEST(Radical, SomeIntegerRankIsNotSemisimple) {
  bool found = false;
  for (long t0 = 0; t0 <= 3; ++t0) {
    auto r = radical(deligne(2, Rational(t0)));
    if (!r.basis.empty()) {
      found = true;
      EXPECT_TRUE(r.two_sided);
      EXPECT_TRUE(r.nilpotent);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Radical, UpperTriangularMatrices) {
  auto a = upper_triangular();
  a.validate();
  auto r = radical(a);
  ASSERT_EQ(r.basis.size(), 1u);
  EXPECT_EQ(r.basis[0], (std::vector<Rational>{0, 1, 0}));
  EXPECT_TRUE(r.two_sided);
  EXPECT_TRUE(r.nilpotent);
}

TEST(Quotient, FiltrationQuotientIsTheSymmetricGroupAlgebra) {
  auto base = builtin_base("triv");
  for (std::size_t m = 1; m <= 3; ++m) {
    auto s = symmetric_quotient(base, SpecializedRank{kT0}, base->unit(), m);
    std::size_t fact = m == 3 ? 6 : m;
    EXPECT_EQ(s.quotient.table.dim, fact);
    EXPECT_TRUE(s.check.ok()) << "m=" << m;
    s.quotient.table.validate();
  }
}

TEST(Quotient, ByZeroIdealIsTheAlgebra) {
  auto a = deligne(2, kT0);
  auto q = quotient_by_ideal(a, {});
  EXPECT_EQ(q.table.dim, a.dim);
  EXPECT_EQ(q.table.products, a.products);
  EXPECT_EQ(q.table.unit, a.unit);
}

TEST(Quotient, OneSidedSubspaceIsRejectedWithAWitness) {
  auto a = upper_triangular();
  try {
    quotient_by_ideal(a, {{Rational(1), Rational(0), Rational(0)}});
    FAIL() << "expected an error";
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("leaves the subspace"), std::string::npos);
  }
}

TEST(Quotient, FiltrationIdealsAreTwoSided) {
  auto base = builtin_base("triv");
  SpecializedRank rank{kT0};
  for (std::size_t m = 0; m <= 3; ++m) {
    auto a = ones(base, m);
    auto alg = end_algebra(base, rank, a);
    for (std::size_t d = 0; d <= 2 * m; ++d) {
      std::vector<std::vector<Rational>> ideal;
      for (const auto& f : filtration_span(base, rank, a, a, d)) ideal.push_back(hom_coordinates(f));
      EXPECT_FALSE(two_sided_witness(alg, ideal).has_value()) << "m=" << m << " d=" << d;
    }
  }
}

TEST(Simples, SymmetricGroupOnThreeLetters) {
  auto r = count_simples(symmetric_group_algebra(3));
  EXPECT_EQ(sorted_degrees(r), (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_TRUE(r.all_split());
  EXPECT_EQ(sorted_degrees(r), brute_block_sizes(symmetric_group_algebra(3)));
}

TEST(Simples, OneDimensionalAlgebra) {
  auto r = count_simples(symmetric_group_algebra(1));
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].degree, 1u);
}

TEST(Simples, DeligneBlocksMatchYoungDiagramCounts) {
  const std::size_t expected[] = {1, 2, 4, 7};
  for (std::size_t m = 1; m <= 3; ++m) {
    auto a = deligne(m, kT0);
    auto r = count_simples(a);
    EXPECT_EQ(r.blocks.size(), expected[m]) << "m=" << m;
    EXPECT_TRUE(r.all_split());
    EXPECT_EQ(r.sum_of_squares(), a.dim);
    EXPECT_EQ(sorted_degrees(r), brute_block_sizes(a)) << "m=" << m;
  }
}

TEST(Simples, TwoPointDeligneBlockSizes) {
  EXPECT_EQ(sorted_degrees(count_simples(deligne(2, kT0))), (std::vector<std::size_t>{1, 1, 1, 2}));
}

TEST(Simples, NonSplitCenterIsReported) {
  auto r = count_simples(gaussian());
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_FALSE(r.blocks[0].split);
  EXPECT_EQ(r.blocks[0].factor.degree(), 2);
}

TEST(Simples, RequiresSemisimplicity) { EXPECT_THROW(count_simples(upper_triangular()), ArgumentError); }

TEST(Simples, GradedLinesSplitIntoDeligneTimesSymmetricGroup) {
  // Over the Z/2-graded lines, the L strands only see a symmetric group, and the unit strands see
  // the Deligne category at rank t minus the number of L strands.
  auto lines = builtin_base("z2lines");
  auto triv = builtin_base("triv");
  Word l = lines->generators().back();
  SpecializedRank rank{kT0};
  auto ll = count_simples(end_algebra(lines, rank, Object::bracket({l, l})));
  EXPECT_EQ(ll.blocks.size(), count_simples(symmetric_group_algebra(2)).blocks.size());
  auto mixed = end_algebra(lines, kSym, Object::bracket({lines->unit(), l}));
  auto reference = end_algebra(triv, kSym, ones(triv, 1));
  EXPECT_EQ(mixed.dim, reference.dim);
  EXPECT_EQ(gram_det(mixed), gram_det(reference).shifted(Rational(-1)));
  EXPECT_EQ(count_simples(specialize(mixed, kT0)).blocks.size(),
            count_simples(specialize(reference, kT0 - 1)).blocks.size() * count_simples(symmetric_group_algebra(1)).blocks.size());
  EXPECT_FALSE(radical(specialize(mixed, Rational(1))).basis.empty());
}

TEST(Locality, Examples) {
  EXPECT_EQ(is_local(symmetric_group_algebra(1)).verdict, Locality::Local);
  EXPECT_EQ(is_local(split_pair()).verdict, Locality::NotLocal);
  EXPECT_EQ(is_local(upper_triangular()).verdict, Locality::NotLocal);
  EXPECT_EQ(is_local(gaussian()).verdict, Locality::Inconclusive);
  auto base = builtin_base("triv");
  SpecializedRank rank{kT0};
  auto a = ones(base, 1);
  auto r = Recollement::from_labels({1, 1}, {0, 1});
  auto x = from_double_bracket(DoubleBracket<SpecializedRank>(basis_morphism(base, rank, a, a, r, 0)));
  auto one = FormalObject<SpecializedRank>::direct_sum(base, rank, {a});
  auto im = image(MatrixMorphism<SpecializedRank>(one, one, {{(Rational(1) / kT0) * x}}));
  EXPECT_EQ(is_local(end_algebra(im)).verdict, Locality::Local);
  EXPECT_EQ(is_local(end_algebra(one)).verdict, Locality::NotLocal);
}
