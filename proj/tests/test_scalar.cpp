#include <gtest/gtest.h>

#include <interpcat/scalar.hpp>

using namespace interpcat;

static_assert(RankContext<SymbolicRank>);
static_assert(RankContext<SpecializedRank>);

TEST(Rational, ParsesCanonicalForms) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational(" -7 "), Rational(-7));
  EXPECT_EQ(parse_rational("+2/3"), Rational(2, 3));
  EXPECT_EQ(to_string(parse_rational("-10/5")), "-2");
}

TEST(Rational, RejectsMalformedLiterals) {
  for (const char* bad : {"", "1/", "/2", "a", "1/0", "1.5", "--1", "1/2/3"})
    EXPECT_THROW(parse_rational(bad), ArgumentError) << bad;
}

TEST(RankPolynomial, ArithmeticAgreesWithPointwiseEvaluation) {
  auto p = RankPolynomial::from_coefficients({Rational(1), Rational(-2, 3), Rational(5)});
  auto q = RankPolynomial::from_coefficients({Rational(-4), Rational(1)});
  for (long x = -5; x <= 5; ++x) {
    Rational t = make_rational(x, 2);
    EXPECT_EQ((p * q)(t), p(t) * q(t));
    EXPECT_EQ((p + q)(t), p(t) + q(t));
    EXPECT_EQ((p - q)(t), p(t) - q(t));
    EXPECT_EQ(p.shifted(Rational(3))(t), p(t + 3));
  }
}

TEST(RankPolynomial, NormalizesTrailingZeros) {
  auto p = RankPolynomial::from_coefficients({Rational(1), Rational(0), Rational(0)});
  EXPECT_EQ(p.degree(), 0);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((p - p).degree(), -1);
}

TEST(RankPolynomial, DivisionIdentity) {
  auto a = RankPolynomial::from_coefficients({Rational(4), Rational(0), Rational(-1), Rational(2)});
  auto b = RankPolynomial::from_coefficients({Rational(1), Rational(1)});
  auto [q, r] = RankPolynomial::divmod(a, b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.degree(), b.degree());
  EXPECT_THROW(RankPolynomial::divide_exact(a, b), ArgumentError);
  EXPECT_EQ(RankPolynomial::divide_exact(a * b, b), a);
}

TEST(RankPolynomial, ExtendedGcd) {
  auto x = RankPolynomial::variable();
  auto a = (x - RankPolynomial(1)) * (x - RankPolynomial(2));
  auto b = (x - RankPolynomial(1)) * (x + RankPolynomial(5));
  auto [g, s, u] = RankPolynomial::extended_gcd(a, b);
  EXPECT_EQ(g, x - RankPolynomial(1));
  EXPECT_EQ(s * a + u * b, g);
}

TEST(RankPolynomial, TextRoundTrip) {
  auto p = RankPolynomial::from_coefficients({Rational(1, 2), Rational(0), Rational(-3)});
  EXPECT_EQ(p.to_string(), "[1/2,0,-3]");
  EXPECT_EQ(RankPolynomial::parse(p.to_string()), p);
  EXPECT_EQ(RankPolynomial::parse("[]"), RankPolynomial());
  EXPECT_EQ(RankPolynomial::parse("t"), RankPolynomial::variable());
  EXPECT_THROW(RankPolynomial::parse("[1,"), ArgumentError);
}

TEST(FallingFactorial, MatchesDirectProduct) {
  for (std::size_t lo = 0; lo < 4; ++lo)
    for (std::size_t hi = lo; hi < 7; ++hi) {
      auto p = falling_factorial(lo, hi);
      EXPECT_EQ(p.degree(), static_cast<long>(hi - lo));
      for (long x = -3; x <= 8; ++x) {
        Rational direct = 1;
        for (std::size_t a = lo; a < hi; ++a) direct *= Rational(x - static_cast<long>(a));
        EXPECT_EQ(p(Rational(x)), direct);
        EXPECT_EQ(falling_factorial_value(Rational(x), lo, hi), direct);
      }
    }
  EXPECT_EQ(falling_factorial(2, 4), RankPolynomial::from_coefficients({Rational(6), Rational(-5), Rational(1)}));
  EXPECT_THROW(falling_factorial(3, 2), ArgumentError);
}

TEST(RankContexts, AgreeAfterSpecialization) {
  SymbolicRank sym;
  SpecializedRank sp{Rational(7, 2)};
  for (std::size_t lo = 0; lo < 3; ++lo)
    for (std::size_t hi = lo; hi < 5; ++hi) EXPECT_EQ(sym.falling(lo, hi)(sp.t0), sp.falling(lo, hi));
  EXPECT_EQ(sym.rank()(sp.t0), sp.rank());
}
