#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "softmin/random.hpp"

using namespace softmin;

// Known-answer vectors published with Random123 (kat_vectors, philox4x32 R=10).
TEST(Philox, KnownAnswerZero) {
  const auto r = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r[0], 0x6627e8d5u);
  EXPECT_EQ(r[1], 0xe169c58du);
  EXPECT_EQ(r[2], 0xbc57ac4cu);
  EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto r = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(r[0], 0x408f276du);
  EXPECT_EQ(r[1], 0x41c83b0eu);
  EXPECT_EQ(r[2], 0xa20bc7c6u);
  EXPECT_EQ(r[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(r[0], 0xd16cfe09u);
  EXPECT_EQ(r[1], 0x94fdccebu);
  EXPECT_EQ(r[2], 0x5001e420u);
  EXPECT_EQ(r[3], 0x24126ea1u);
}

TEST(SplitMix, FirstOutputFromZero) {
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafull);
}

TEST(DeriveSeed, StableAndDistinct) {
  EXPECT_EQ(derive_seed(7, 2, 3), derive_seed(7, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (std::uint64_t r = 0; r < 50; ++r) seen.insert(derive_seed(0, s, r));
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(0, 0, 1), derive_seed(0, 1, 0));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(0, 0, 0));
}

TEST(CounterRng, UniformsInOpenInterval) {
  const CounterRng rng(42, Stream::sampling);
  std::vector<double> u(100001);
  rng.fill_uniform(3, u);
  double sum = 0.0;
  for (double v : u) {
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += v;
  }
  EXPECT_NEAR(sum / static_cast<double>(u.size()), 0.5, 0.005);
}

TEST(CounterRng, NormalMoments) {
  const CounterRng rng(9, Stream::noise);
  std::vector<double> z(200000);
  rng.fill_normal(0, z);
  double m = 0.0;
  double m2 = 0.0;
  for (double v : z) {
    m += v;
    m2 += v * v;
  }
  m /= static_cast<double>(z.size());
  m2 /= static_cast<double>(z.size());
  EXPECT_NEAR(m, 0.0, 0.01);
  EXPECT_NEAR(m2 - m * m, 1.0, 0.01);
}

TEST(CounterRng, PureFunctionOfCoordinates) {
  const CounterRng a(5, Stream::noise);
  const CounterRng b(5, Stream::noise);
  std::vector<double> x(17);
  std::vector<double> y(17);
  a.fill_normal(11, x);
  b.fill_normal(12, y);
  b.fill_normal(11, y);
  EXPECT_EQ(x, y);
  EXPECT_EQ(a.normal_pair(4, 2), b.normal_pair(4, 2));
}

TEST(CounterRng, StreamsAndSeedsDiffer) {
  const CounterRng noise(5, Stream::noise);
  const CounterRng init(5, Stream::init);
  const CounterRng other(6, Stream::noise);
  EXPECT_NE(noise.uniform_pair(0, 0), init.uniform_pair(0, 0));
  EXPECT_NE(noise.uniform_pair(0, 0), other.uniform_pair(0, 0));
  EXPECT_NE(noise.uniform_pair(0, 0), noise.uniform_pair(1, 0));
}

TEST(CounterRng, OddLengthFillMatchesPrefix) {
  const CounterRng rng(3, Stream::init);
  std::vector<double> odd(5);
  std::vector<double> even(6);
  rng.fill_uniform(2, odd);
  rng.fill_uniform(2, even);
  for (std::size_t i = 0; i < odd.size(); ++i) EXPECT_EQ(odd[i], even[i]);
}
