#include <gtest/gtest.h>

#include "interpcat/random.hpp"
#include "interpcat/structures.hpp"

namespace interpcat {
namespace {

const SymbolicRank kSym{};
const RankPolynomial t = RankPolynomial::variable();

Object one(const Word& w) { return Object::bracket({w}); }

std::vector<Rational> random_coords(const BaseCategory& base, const Word& u, const Word& v, RandomSource& rng) {
  std::vector<Rational> c(base.hom_dim(u, v));
  for (auto& x : c) x = rng.small_rational();
  return c;
}

class PerBase : public ::testing::TestWithParam<std::string> {
 protected:
  BasePtr base = builtin_base(GetParam());
  std::vector<Word> pool = object_pool(*base);
};

TEST_P(PerBase, SnakesHoldForEveryGenerator) {
  for (const auto& u : pool) {
    auto d = bracket_dual(base, kSym, u);
    EXPECT_TRUE(snakes_hold(d)) << base->object_label(u);
    auto dd = bracket_dual(base, kSym, d.dual.as_bracket().entries[0]);
    EXPECT_TRUE(snakes_hold(dd));
  }
}

TEST_P(PerBase, TraceOfIdentityIsRankTimesDimension) {
  for (const auto& u : pool) {
    // Base dimension of U from the base trace of its identity.
    auto id = base->identity(u);
    auto tr = BaseCategory::apply_table(base->trace_table(base->unit(), base->unit(), u), id, {Rational(1)});
    EXPECT_EQ(dimension(base, kSym, one(u)), t * tr.at(0));
  }
  EXPECT_EQ(dimension(base, kSym, one(base->unit())), t);
  EXPECT_EQ(dimension(base, kSym, Object()), RankPolynomial(1));
}

TEST_P(PerBase, DimensionOfLongBracketIsFallingFactorial) {
  for (const auto& u : pool)
    for (const auto& v : pool) {
      auto du = dimension(base, kSym, one(u)), dv = dimension(base, kSym, one(v));
      // dim <U> = t dim U, so dim <U,V> = t(t-1) dim U dim V.
      auto expected = (du * dv) * (t - RankPolynomial(1));
      expected = RankPolynomial::divide_exact(expected, t);
      EXPECT_EQ(dimension(base, kSym, Object::bracket({u, v})), expected);
      EXPECT_EQ(dimension(base, kSym, one(u) * one(v)), du * dv);
    }
}

TEST_P(PerBase, TraceOfBracketedBaseMapIsBracketedTrace) {
  RandomSource rng(31);
  for (const auto& u : pool)
    for (const auto& v : pool)
      for (const auto& x : pool) {
        Word ux = base->tensor(u, x), vx = base->tensor(v, x);
        auto phi = random_coords(*base, ux, vx, rng);
        auto lifted = compose(delta(base, kSym, v, x), compose(gen(base, kSym, ux, vx, phi), mu(base, kSym, u, x)));
        auto tr = BaseCategory::apply_table(base->trace_table(u, v, x), phi, {Rational(1)});
        EXPECT_EQ(trace(lifted, one(x)), gen(base, kSym, u, v, tr));
      }
}

TEST_P(PerBase, PureComponentThroughTheTracedStrand) {
  RandomSource rng(37);
  for (const auto& u : pool)
    for (const auto& x : pool) {
      Word ux = base->tensor(u, x);
      auto psi = random_coords(*base, ux, ux, rng);
      Morphism<SymbolicRank> f(base, kSym, one(u) * one(x), one(u) * one(x));
      f.add(Recollement::from_labels(f.sizes(), {0, 0, 0, 0}), lift_vector<RankPolynomial>(psi));
      auto tr = BaseCategory::apply_table(base->trace_table(u, u, x), psi, {Rational(1)});
      EXPECT_EQ(trace(f, one(x)), gen(base, kSym, u, u, tr));
    }
}

TEST_P(PerBase, SlidingAxiom) {
  RandomSource rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    auto pick = [&] { return pool[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(pool.size()) - 1))]; };
    Object u = one(pick()), v = one(pick()), x = one(pick()), y = one(pick());
    auto phi = random_morphism(base, kSym, u * y, v * x, rng, 0.7);
    auto psi = random_morphism(base, kSym, x, y, rng, 0.9);
    auto lhs = trace(compose(phi, tensor(identity(base, kSym, u), psi)), x);
    auto rhs = trace(compose(tensor(identity(base, kSym, v), psi), phi), y);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST_P(PerBase, TensorAxiom) {
  RandomSource rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    auto pick = [&] { return pool[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(pool.size()) - 1))]; };
    Object p = one(pick()), q = one(pick()), u = one(pick()), v = one(pick()), x = one(pick());
    auto phi = random_morphism(base, kSym, p, q, rng, 0.8);
    auto psi = random_morphism(base, kSym, u * x, v * x, rng, 0.7);
    EXPECT_EQ(trace(tensor(phi, psi), x), tensor(phi, trace(psi, x)));
  }
}

TEST_P(PerBase, TraceOverMergedBracketMatchesIteratedTrace) {
  RandomSource rng(47);
  for (const auto& xw : pool)
    for (const auto& yw : pool) {
      Word xy = base->tensor(xw, yw);
      Object a = one(pool.back());
      auto f = random_morphism(base, kSym, a * one(xy), a * one(xy), rng, 0.7);
      auto id_a = identity(base, kSym, a);
      auto expanded = compose(tensor(id_a, delta(base, kSym, xw, yw)), compose(f, tensor(id_a, mu(base, kSym, xw, yw))));
      EXPECT_EQ(trace(f, one(xy)), trace(expanded, one(xw) * one(yw)));
      EXPECT_EQ(trace(f, one(xy)), trace(trace(expanded, one(yw)), one(xw)));
    }
}

TEST_P(PerBase, TwistOfBraidingIsBracketedBaseTwist) {
  for (const auto& x : pool) {
    auto lhs = trace(braiding(base, kSym, one(x), one(x)), one(x));
    auto s = base->braiding(x, x);
    auto tr = BaseCategory::apply_table(base->trace_table(x, x, x), s, {Rational(1)});
    EXPECT_EQ(lhs, gen(base, kSym, x, x, tr));
  }
  EXPECT_EQ(twist(base, kSym, Object()), identity(base, kSym, Object()));
}

TEST_P(PerBase, TwistBalancing) {
  for (const auto& u : pool)
    for (const auto& v : pool) {
      Object a = one(u), b = one(v);
      auto lhs = twist(base, kSym, a * b);
      auto rhs = compose(braiding(base, kSym, b, a),
                         compose(tensor(twist(base, kSym, b), twist(base, kSym, a)), braiding(base, kSym, a, b)));
      EXPECT_EQ(lhs, rhs);
    }
}

TEST_P(PerBase, TraceRejectsMismatchedObjects) {
  auto f = identity(base, kSym, one(base->unit()));
  EXPECT_THROW(trace(f, one(base->unit()) * one(base->unit())), ArgumentError);
}

INSTANTIATE_TEST_SUITE_P(Bases, PerBase, ::testing::Values("triv", "z2lines", "z2group"));

TEST(Duals, UnitEvaluationAfterCoevaluationIsTheRank) {
  auto base = builtin_base("triv");
  auto d = bracket_dual(base, kSym, base->unit());
  EXPECT_EQ(compose(d.ev, d.coev), t * identity(base, kSym, Object()));
}

TEST(Trace, UnknotAtASpecializedRank) {
  auto base = builtin_base("z2group");
  SpecializedRank r{make_rational(7, 2)};
  Word reg = base->generators()[0];
  EXPECT_EQ(dimension(base, r, one(reg)), Rational(7));
  EXPECT_EQ(dimension(base, r, one(base->unit())), make_rational(7, 2));
}

TEST(Trace, MissingBaseTraceIsACapabilityError) {
  Presentation p;
  p.name = "two";
  p.objects = {"1", "P"};
  p.unit = 0;
  p.hom_dims = {{{0, 0}, 1}, {{1, 1}, 1}};
  p.identities = {{0, {Rational(1)}}, {1, {Rational(1)}}};
  for (std::size_t k : {0, 1}) {
    StructureTable tab(1, 1, 1);
    tab.set(0, 0, {Rational(1)});
    p.compositions[{k, k, k}] = tab;
  }
  BasePtr base = std::make_shared<PresentedCategory>(p);
  auto w = base->parse_object("P");
  auto f = identity(base, kSym, one(w));
  EXPECT_THROW(trace(f, one(w)), CapabilityError);
}

}  // namespace
}  // namespace interpcat
