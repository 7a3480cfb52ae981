#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include <interpcat/partcomb.hpp>

using namespace interpcat;

namespace {

// Bell numbers from the Bell triangle.
std::vector<std::size_t> bell_triangle(std::size_t n) {
  std::vector<std::size_t> bell{1};
  std::vector<std::size_t> row{1};
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<std::size_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    bell.push_back(next.front());
    row = next;
  }
  return bell;
}

// All recollements by filtering every set partition of the ground set.
std::vector<Recollement> brute_recollements(const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  std::vector<Recollement> out;
  for (const auto& p : enumerate_partitions(n)) {
    std::vector<std::size_t> raw(p.labels().begin(), p.labels().end());
    try {
      out.push_back(Recollement::from_labels(sizes, raw));
    } catch (const ArgumentError&) {
    }
  }
  return out;
}

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Partitions, CountsAreBellNumbers) {
  auto bell = bell_triangle(9);
  for (std::size_t n = 0; n <= 9; ++n) EXPECT_EQ(enumerate_partitions(n).size(), bell[n]) << n;
}

TEST(Partitions, EnumerationIsStrictlyIncreasing) {
  auto ps = enumerate_partitions(6);
  for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_LT(ps[i - 1], ps[i]);
}

TEST(Partitions, LimitIsEnforced) {
  EXPECT_THROW(enumerate_partitions(13), ResourceError);
  EXPECT_THROW(enumerate_recollements({7, 7}), ResourceError);
  EXPECT_NO_THROW(enumerate_partitions(4, 4));
  EXPECT_THROW(enumerate_partitions(5, 4), ResourceError);
}

TEST(Partitions, RefinementOrder) {
  auto fine = SetPartition::from_labels({0, 1, 2});
  auto coarse = SetPartition::from_labels({0, 0, 1});
  EXPECT_TRUE(coarser_or_equal(coarse, fine));
  EXPECT_FALSE(coarser_or_equal(fine, coarse));
  auto p = SetPartition::from_labels({0, 0, 1, 1});
  auto q = SetPartition::from_labels({0, 1, 1, 2});
  EXPECT_EQ(common_refinement(p, q), SetPartition::from_labels({0, 1, 2, 3}));
  EXPECT_EQ(common_coarsening(p, q), SetPartition::from_labels({0, 0, 0, 0}));
}

TEST(Recollements, CountsMatchClosedForm) {
  // |R(m,n)| = sum_k k! C(m,k) C(n,k).
  for (std::size_t m = 0; m <= 4; ++m)
    for (std::size_t n = 0; n <= 4; ++n) {
      std::size_t expected = 0, fact = 1;
      for (std::size_t k = 0; k <= std::min(m, n); ++k) {
        if (k) fact *= k;
        expected += fact * binom(m, k) * binom(n, k);
      }
      EXPECT_EQ(enumerate_recollements({m, n}).size(), expected) << m << "," << n;
    }
  EXPECT_EQ(enumerate_recollements({1, 1}).size(), 2u);
  EXPECT_EQ(enumerate_recollements({2, 2}).size(), 7u);
  EXPECT_EQ(enumerate_recollements({3, 3}).size(), 34u);
}

TEST(Recollements, AgreeWithBruteForceFilter) {
  for (auto sizes : std::vector<std::vector<std::size_t>>{{2, 3}, {1, 1, 1}, {2, 2, 1}, {3}, {}, {1, 2, 2}})
    EXPECT_EQ(enumerate_recollements(sizes), brute_recollements(sizes));
}

TEST(Recollements, SingletonFactorsGiveAllPartitions) {
  auto bell = bell_triangle(6);
  for (std::size_t m = 1; m <= 3; ++m)
    EXPECT_EQ(enumerate_recollements(std::vector<std::size_t>(2 * m, 1)).size(), bell[2 * m]);
}

TEST(Recollements, RejectsNonInjectiveLabels) {
  EXPECT_THROW(Recollement::from_labels({2, 1}, {0, 0, 1}), ArgumentError);
  EXPECT_NO_THROW(Recollement::from_labels({2, 1}, {0, 1, 0}));
}

TEST(Recollements, RestrictionKeepsTraces) {
  auto r = Recollement::from_labels({2, 1, 2}, {0, 1, 1, 2, 0});
  auto res = restrict_to(r, {0, 2});
  EXPECT_EQ(res.result, Recollement::from_labels({2, 2}, {0, 1, 2, 0}));
  EXPECT_EQ(res.block_map[0], std::optional<std::size_t>(0));
  EXPECT_EQ(res.block_map[1], std::optional<std::size_t>(1));
  EXPECT_EQ(res.block_map[2], std::optional<std::size_t>(2));
  auto res2 = restrict_to(r, {1});
  EXPECT_FALSE(res2.block_map[0].has_value());
}

class FiberOracle : public ::testing::TestWithParam<int> {};

TEST_P(FiberOracle, ComposeFibersMatchBruteForce) {
  std::mt19937 rng(GetParam());
  std::uniform_int_distribution<std::size_t> sz(0, 2);
  std::vector<std::size_t> sa{sz(rng)}, sb{sz(rng)}, sc{sz(rng)};
  auto rs = enumerate_recollements({sa[0], sb[0]});
  auto ss = enumerate_recollements({sb[0], sc[0]});
  const auto& r = rs[rng() % rs.size()];
  const auto& s = ss[rng() % ss.size()];
  std::vector<Recollement> expected;
  for (const auto& u : enumerate_recollements({sa[0], sb[0], sc[0]}))
    if (restrict_to(u, {0, 1}).result == r && restrict_to(u, {1, 2}).result == s) expected.push_back(u);
  auto got = enumerate_compose_fibers(r, s);
  EXPECT_EQ(got, expected);
  auto closure = generated_closure(r, s);
  ASSERT_TRUE(closure.has_value());
  // The closure is the finest fiber: it refines every other fiber.
  for (const auto& u : got) EXPECT_TRUE(coarser_or_equal(u.partition(), closure->partition()));
  EXPECT_NE(std::find(got.begin(), got.end(), *closure), got.end());
}

TEST_P(FiberOracle, TensorFibersMatchBruteForce) {
  std::mt19937 rng(1000 + GetParam());
  std::uniform_int_distribution<std::size_t> sz(0, 2);
  std::size_t a = sz(rng), b = sz(rng), c = sz(rng), d = sz(rng);
  auto rs = enumerate_recollements({a, b});
  auto ss = enumerate_recollements({c, d});
  const auto& r = rs[rng() % rs.size()];
  const auto& s = ss[rng() % ss.size()];
  std::vector<Recollement> expected;
  for (const auto& u : enumerate_recollements({a, c, b, d}))
    if (restrict_to(u, {0, 2}).result == r && restrict_to(u, {1, 3}).result == s) expected.push_back(u);
  EXPECT_EQ(enumerate_tensor_fibers(r, 1, s, 1), expected);
}

TEST_P(FiberOracle, MultiFactorMiddle) {
  std::mt19937 rng(2000 + GetParam());
  std::vector<std::size_t> sizes{1, 1, 1, 1};  // A | M1 M2 | C
  auto rs = enumerate_recollements({1, 1, 1});
  auto ss = enumerate_recollements({1, 1, 1});
  const auto& r = rs[rng() % rs.size()];
  const auto& s = ss[rng() % ss.size()];
  std::vector<Recollement> expected;
  for (const auto& u : enumerate_recollements(sizes))
    if (restrict_to(u, {0, 1, 2}).result == r && restrict_to(u, {1, 2, 3}).result == s) expected.push_back(u);
  EXPECT_EQ(enumerate_compose_fibers(r, s, 2), expected);
}

INSTANTIATE_TEST_SUITE_P(Seeds, FiberOracle, ::testing::Range(0, 40));

TEST(Fibers, InconsistentClosureGivesNoFiber) {
  // Factors A(1), M1(2), M2(1), C(1). r joins m1_0 with m2, s joins m1_1 with m2.
  auto r = Recollement::from_labels({1, 2, 1}, {0, 1, 2, 1});
  auto s = Recollement::from_labels({2, 1, 1}, {0, 1, 1, 2});
  EXPECT_FALSE(generated_closure(r, s, 2).has_value());
  EXPECT_TRUE(enumerate_compose_fibers(r, s, 2).empty());
  // A single middle factor never produces a clash.
  for (const auto& x : enumerate_recollements({2, 2}))
    for (const auto& y : enumerate_recollements({2, 1})) EXPECT_TRUE(generated_closure(x, y).has_value());
}

TEST(Mobius, IntervalSumsVanish) {
  auto all = enumerate_recollements({2, 2});
  for (const auto& s : all)
    for (const auto& r : all) {
      if (s == r || !coarser_or_equal(s.partition(), r.partition())) continue;
      long total = 0;
      for (const auto& u : all)
        if (coarser_or_equal(s.partition(), u.partition()) && coarser_or_equal(u.partition(), r.partition()))
          total += mobius(u, r);
      EXPECT_EQ(total, 0);
    }
  auto r = Recollement::from_labels({1, 1}, {0, 1});
  auto s = Recollement::from_labels({1, 1}, {0, 0});
  EXPECT_EQ(mobius(s, r), -1);
  EXPECT_EQ(mobius(r, r), 1);
  EXPECT_EQ(mobius(r, s), 0);
  EXPECT_THROW(mobius(Recollement::from_labels({1, 1, 1}, {0, 1, 2}), Recollement::from_labels({1, 1, 1}, {0, 1, 2})),
               ArgumentError);
}
