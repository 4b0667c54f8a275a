#include <cmath>

#include "doctest.h"
#include "oneshot/hashing.hpp"
#include "oneshot/errors.hpp"

using namespace oneshot;

TEST_CASE("seed drawing") {
  RngStream rng(7, 0);
  const HashSeed empty = draw_seed(8, 0, rng);
  CHECK(empty.rows.empty());
  CHECK(hash_eval(empty, 3) == 0);

  RngStream a(7, 1), b(7, 1);
  const HashSeed s1 = draw_seed(256, 16, a);
  const HashSeed s2 = draw_seed(256, 16, b);
  CHECK(s1.rows == s2.rows);

  // marginal bit frequencies across many draws
  RngStream rng2(8, 0);
  const int draws = 10000;
  int ones = 0;
  for (int i = 0; i < draws; ++i) {
    const HashSeed s = draw_seed(2, 1, rng2);
    ones += static_cast<int>(s.rows[0] & 1);
  }
  const double sigma = std::sqrt(0.25 / draws);
  CHECK(std::fabs(static_cast<double>(ones) / draws - 0.5) < 4 * sigma);
}

TEST_CASE("hash evaluation") {
  HashSeed zero;
  zero.input_bits = 3;
  zero.output_bits = 2;
  zero.rows = {0, 0};
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(hash_eval(zero, x) == 0);

  HashSeed identity;
  identity.input_bits = 3;
  identity.output_bits = 3;
  identity.rows = {1, 2, 4};
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(hash_eval(identity, x) == x);

  CHECK_THROWS_AS(hash_eval(identity, 8), DomainError);
}

TEST_CASE("exact pairwise collision probability") {
  // every pair collides with probability exactly 2^-l under seed enumeration
  for (unsigned l : {1u, 2u, 3u}) {
    const CollisionStats stats = collision_probability_exact(8, l);
    CHECK(stats.exact);
    CHECK(stats.max_pair_probability == std::exp2(-static_cast<double>(l)));
    CHECK(stats.mean_pair_probability == doctest::Approx(std::exp2(-static_cast<double>(l))));
  }
  const CollisionStats degenerate = collision_probability_exact(8, 0);
  CHECK(degenerate.max_pair_probability == 1.0);
  CHECK_THROWS_AS(collision_probability_exact(1 << 13, 2), ResourceCapError);
}

TEST_CASE("monte carlo collision probability") {
  RngStream rng(9, 0);
  const std::uint64_t trials = 100000;
  const CollisionStats stats = collision_probability_monte_carlo(1 << 16, 8, trials, rng);
  const double p = std::exp2(-8.0);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  CHECK(std::fabs(stats.mean_pair_probability - p) < 4 * sigma);
}

TEST_CASE("seed hex round trip") {
  RngStream rng(10, 0);
  const HashSeed seed = draw_seed(100, 9, rng);
  const HashSeed back = HashSeed::from_hex(seed.to_hex());
  CHECK(back.rows == seed.rows);
  CHECK(back.input_bits == seed.input_bits);
  CHECK(back.output_bits == seed.output_bits);
  CHECK_THROWS_AS(HashSeed::from_hex("3:zz"), DomainError);
}

TEST_CASE("code length cap") {
  RngStream rng(11, 0);
  CHECK_THROWS_AS(draw_seed(4, 65, rng), DomainError);
}
