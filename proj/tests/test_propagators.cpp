#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pdefr/propagators.hpp"

using namespace pdefr;

namespace {

constexpr double kPi = std::numbers::pi;

TrigPolynomial mode_pair(int d, const IntVec& k, double amp) {
  TrigPolynomial::Terms t;
  t[k] = amp;
  t[negated(k)] = amp;
  return {d, t};
}

FamilySpec family(Family f, int d, std::uint64_t seed) {
  FamilySpec s;
  s.family = f;
  s.d = d;
  s.K = d == 3 ? 4 : 8;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Multipliers, Wave) {
  EXPECT_DOUBLE_EQ(wave_multiplier({0, 0, 0}, 0.1), 0.1);
  EXPECT_NEAR(wave_multiplier({1, 0, 0}, 0.5), 0.0, 1e-16);
  EXPECT_NEAR(wave_multiplier({0, 1, 0}, 1e-8), 1e-8, 1e-10);
  EXPECT_THROW(wave_multiplier({1, 0, 0}, -1.0), Error);
}

TEST(Multipliers, Heat) {
  EXPECT_DOUBLE_EQ(heat_multiplier({0, 0, 0}, 3.0), 1.0);
  EXPECT_DOUBLE_EQ(heat_multiplier({5, 2, 1}, 0.0), 1.0);
  EXPECT_NEAR(heat_multiplier({0, 0, 1}, 1.0 / (4.0 * kPi * kPi)), std::exp(-1.0), 1e-15);
}

TEST(Multipliers, WaveOrderMinusOne) {
  for (int a = -6; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b) {
      const IntVec k{a, b, 3};
      for (double t : {0.01, 0.13, 0.25, 0.7, 2.3})
        ASSERT_LE(std::abs(wave_multiplier(k, t)), 1.0 / (2.0 * kPi * freq_norm(k)) + 1e-16);
    }
}

TEST(PdeKind, Validation) {
  EXPECT_THROW(PdeKind(Pde::Heat, -0.1), Error);
  EXPECT_THROW(PdeKind(Pde::Wave, NAN), Error);
  EXPECT_EQ(parse_pde("wave"), Pde::Wave);
  EXPECT_THROW(parse_pde("schrodinger"), Error);
}

TEST(Snapshot, HeatAtZeroIsIdentity) {
  const TrigPolynomial f = random_trig_poly(family(Family::RandomTrig, 2, 4));
  EXPECT_EQ(apply_snapshot(f, PdeKind(Pde::Heat, 0.0)).terms(), f.terms());
  const GridField a = snapshot_grid(f, PdeKind(Pde::Heat, 0.0), 32);
  const GridField b = discretize(f, 32);
  EXPECT_EQ(a.values(), b.values());
}

TEST(Snapshot, HeatScalesModePair) {
  const IntVec k0{2, -1, 0};
  const TrigPolynomial g = apply_snapshot(mode_pair(2, k0, 0.7), PdeKind(Pde::Heat, 0.03));
  EXPECT_NEAR(g.coefficient(k0).real(), 0.7 * std::exp(-4.0 * kPi * kPi * 0.03 * 5.0), 1e-15);
}

TEST(Snapshot, WaveExceptionalTime) {
  const TrigPolynomial g = apply_snapshot(mode_pair(3, {0, 1, 0}, 1.0), PdeKind(Pde::Wave, 0.5));
  EXPECT_NEAR(std::abs(g.coefficient({0, 1, 0})), 0.0, 1e-16);
}

TEST(Snapshot, WaveDimensionGuard) {
  const TrigPolynomial f = mode_pair(2, {1, 1, 0}, 1.0);
  try {
    apply_snapshot(f, PdeKind(Pde::Wave, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WaveDimensionMismatch);
  }
  EXPECT_NO_THROW(apply_snapshot(f, PdeKind(Pde::Wave, 0.1), true));
}

TEST(Snapshot, ConstantUnderHeatAndWave) {
  TrigPolynomial::Terms t;
  t[{0, 0, 0}] = 2.0;
  const TrigPolynomial c(3, t);
  EXPECT_DOUBLE_EQ(mean(apply_snapshot(c, PdeKind(Pde::Heat, 0.4))), 2.0);
  EXPECT_DOUBLE_EQ(mean(apply_snapshot(c, PdeKind(Pde::Wave, 0.4))), 0.8);
  EXPECT_EQ(grid_l2_norm(snapshot_grid(c, PdeKind(Pde::Wave, 0.0), 4)), 0.0);
}

TEST(Snapshot, AliasFreeMultiplierIdentity) {
  const TrigPolynomial f = random_trig_poly(family(Family::RandomTrig, 3, 2));  // support radius 8
  const int N = 18;
  for (const PdeKind& pde : {PdeKind(Pde::Wave, 0.23), PdeKind(Pde::Heat, 0.01)}) {
    const Spectrum sp = dft(snapshot_grid(f, pde, N));
    const GridShape& s = sp.shape();
    for (std::size_t m = 0; m < s.size(); ++m) {
      const IntVec k = wrapped_representative(GridIndex::from_flat(s, m));
      const Complex expected = s.sqrt_size() * multiplier(pde, k) * f.coefficient(k);
      ASSERT_LT(std::abs(sp[m] - expected), 1e-10 * (1.0 + std::abs(expected)));
    }
  }
}

TEST(Snapshot, HeatSemigroupAndContraction) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const TrigPolynomial f = make_family(family(Family::RandomTrig, 2, seed));
    const TrigPolynomial ab = apply_snapshot(apply_snapshot(f, PdeKind(Pde::Heat, 0.01)), PdeKind(Pde::Heat, 0.02));
    const TrigPolynomial direct = apply_snapshot(f, PdeKind(Pde::Heat, 0.03));
    for (const auto& [k, a] : direct.terms()) ASSERT_NEAR(std::abs(ab.coefficient(k) - a), 0.0, 1e-12);
    double prev = continuous_l2(f);
    for (double t : {0.001, 0.01, 0.1, 1.0}) {
      const double cur = continuous_l2(apply_snapshot(f, PdeKind(Pde::Heat, t)));
      EXPECT_LE(cur, prev);
      prev = cur;
    }
  }
}

TEST(Snapshot, OutputStaysReal) {
  const TrigPolynomial f = make_family(family(Family::BumpSum, 3, 2));
  for (const PdeKind& pde : {PdeKind(Pde::Wave, 0.37), PdeKind(Pde::Heat, 0.2)}) {
    const TrigPolynomial g = apply_snapshot(f, pde);
    for (const auto& [k, a] : g.terms()) ASSERT_EQ(g.coefficient(negated(k)), std::conj(a));
  }
}

TEST(Snapshot, HeatFourierRatioNonIncreasing) {
  for (Family fam : {Family::RandomTrig, Family::RoughSpectrum}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const int N = 64;
      const TrigPolynomial f = make_family_for_grid(family(fam, 2, seed), N);
      double prev = INFINITY;
      for (double t : {0.0, 0.01, 0.05, 0.1}) {
        const double fr = fourier_ratio(snapshot_grid(f, PdeKind(Pde::Heat, t), N));
        EXPECT_LE(fr, prev * 1.01) << to_string(fam) << " seed=" << seed << " t=" << t;
        prev = fr;
      }
    }
  }
}
