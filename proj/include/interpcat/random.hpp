#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "interp.hpp"

namespace interpcat {

// Seeded generator for reproducible random objects and morphisms.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(engine_); }
  std::mt19937_64& engine() { return engine_; }

  Rational small_rational(long range = 3) {
    long num = uniform(-range, range);
    long den = chance(0.25) ? uniform(1, 3) : 1;
    return make_rational(num, den);
  }

 private:
  std::mt19937_64 engine_;
};

// Unit plus the generating objects.
inline std::vector<Word> object_pool(const BaseCategory& base) {
  std::vector<Word> pool{base.unit()};
  for (const auto& g : base.generators()) pool.push_back(g);
  return pool;
}

inline Bracket random_bracket(const std::vector<Word>& pool, RandomSource& rng, std::size_t max_size) {
  Bracket b;
  auto n = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(max_size)));
  for (std::size_t i = 0; i < n; ++i)
    b.entries.push_back(pool[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(pool.size()) - 1))]);
  return b;
}

// Tensor product of up to `max_factors` random brackets, each of size at most `max_size`.
inline Object random_object(const BaseCategory& base, RandomSource& rng, std::size_t max_factors = 2,
                            std::size_t max_size = 2) {
  auto pool = object_pool(base);
  std::vector<Bracket> f;
  auto n = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(max_factors)));
  for (std::size_t i = 0; i < n; ++i) f.push_back(random_bracket(pool, rng, max_size));
  return Object(std::move(f));
}

template <RankContext Rank>
typename Rank::value_type random_value(RandomSource& rng) {
  if constexpr (std::is_same_v<typename Rank::value_type, RankPolynomial>) {
    return RankPolynomial::from_coefficients({rng.small_rational(), rng.chance(0.5) ? rng.small_rational() : Rational(0)});
  } else {
    return rng.small_rational();
  }
}

// Each recollement gets a component with probability `density`; entries are small and sparse.
template <RankContext Rank>
Morphism<Rank> random_morphism(BasePtr base, Rank rank, const Object& a, const Object& b, RandomSource& rng,
                               double density = 0.5) {
  Morphism<Rank> f(base, rank, a, b);
  for (const auto& r : recollements(concat_sizes(a, b))) {
    if (!rng.chance(density)) continue;
    std::size_t n = product_dim(f.layout(r));
    std::vector<typename Rank::value_type> v(n);
    for (auto& x : v)
      if (rng.chance(0.7)) x = random_value<Rank>(rng);
    f.add(r, v);
  }
  return f;
}

}  // namespace interpcat
