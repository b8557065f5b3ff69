#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "pdefr/rng.hpp"

using namespace pdefr;

// Reference vectors from the Random123 known-answer file (philox4x32_10).
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPiDigits) {
  const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, IsConstexpr) {
  constexpr auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5u);
}

TEST(CounterRng, SequentialMatchesRandomAccess) {
  CounterRng a(42, 7);
  const CounterRng b(42, 7);
  for (std::uint64_t c = 0; c < 20; ++c) {
    const auto w = b.at(c);
    EXPECT_EQ(a(), w[0]);
    EXPECT_EQ(a(), w[1]);
  }
}

TEST(CounterRng, StreamsAndSeedsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed = 0; seed < 8; ++seed)
    for (std::uint32_t idx = 0; idx < 8; ++idx) firsts.insert(CounterRng(seed, stream_id(StreamPurpose::Sampling, idx))());
  EXPECT_EQ(firsts.size(), 64u);
  EXPECT_NE(stream_id(StreamPurpose::Sampling, 3), stream_id(StreamPurpose::Noise, 3));
}

TEST(CounterRng, OpenUnitInterval) {
  EXPECT_GT(CounterRng::to_open_unit(0), 0.0);
  EXPECT_LT(CounterRng::to_open_unit(~std::uint64_t{0}), 1.0);
  CounterRng r(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(CounterRng, GaussianMoments) {
  CounterRng r(5, stream_id(StreamPurpose::Test, 0));
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = r.gaussian();
    s1 += g;
    s2 += g * g;
    s4 += g * g * g * g;
  }
  EXPECT_NEAR(s1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(CounterRng, BoxMullerClosedForm) {
  EXPECT_DOUBLE_EQ(CounterRng::box_muller(std::exp(-0.5), 0.0), 1.0);
  EXPECT_NEAR(CounterRng::box_muller(std::exp(-2.0), 0.5), -2.0, 1e-15);
}

TEST(CounterRng, UniformIndexChiSquare) {
  CounterRng r(11, stream_id(StreamPurpose::Test, 1));
  const int k = 7, n = 70000;
  std::vector<int> counts(k);
  for (int i = 0; i < n; ++i) {
    const auto v = r.uniform_index(k);
    ASSERT_LT(v, static_cast<std::uint64_t>(k));
    ++counts[v];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / double(k)) * (c - n / double(k)) / (n / double(k));
  EXPECT_LT(chi2, 22.46);  // 0.999 quantile, 6 dof
  EXPECT_EQ(CounterRng(1, 1).uniform_index(1), 0u);
}
