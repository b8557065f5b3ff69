#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pdefr/fourier.hpp"

using namespace pdefr;

namespace {

GridField random_field(int N, int d, std::uint64_t seed) {
  const GridShape s(N, d);
  return {s, oracle::random_values(s.size(), seed)};
}

}  // namespace

TEST(GridShape, RowMajorLayout) {
  const GridShape s(4, 3);
  EXPECT_EQ(s.flatten({1, 2, 3}), 1u * 16 + 2u * 4 + 3u);
  EXPECT_EQ(s.unflatten(27), (IntVec{1, 2, 3}));
  EXPECT_EQ(s.negate(s.flatten({1, 0, 3})), s.flatten({3, 0, 1}));
  EXPECT_EQ(s.reduce({-1, 9, 4}), (IntVec{3, 1, 0}));
  EXPECT_THROW(GridShape(1, 2), Error);
  EXPECT_THROW(GridShape(8, 4), Error);
}

TEST(GridIndex, RejectsOutOfRange) {
  EXPECT_THROW(GridIndex(GridShape(8, 1), {8, 0, 0}), Error);
  EXPECT_THROW(GridIndex(GridShape(8, 2), {0, -1, 0}), Error);
}

TEST(Wrapped, Representatives) {
  const GridShape s(8, 1);
  EXPECT_EQ(wrapped_representative(GridIndex(s, {5, 0, 0}))[0], -3);
  EXPECT_EQ(wrapped_representative(GridIndex(s, {3, 0, 0}))[0], 3);
  EXPECT_EQ(wrapped_representative(GridIndex(s, {4, 0, 0}))[0], -4);
  EXPECT_EQ(wrap_coordinate(3, 7), 3);
  EXPECT_EQ(wrap_coordinate(4, 7), -3);
}

TEST(Wrapped, Magnitudes) {
  for (int N : {5, 8}) {
    const GridShape s(N, 3);
    EXPECT_DOUBLE_EQ(wrapped_magnitude(GridIndex(s, {N - 1, 0, 0})), 1.0);
    EXPECT_DOUBLE_EQ(wrapped_magnitude(GridIndex(s, {0, 0, 0})), 0.0);
  }
  EXPECT_DOUBLE_EQ(wrapped_magnitude(GridIndex(GridShape(8, 2), {5, 5, 0})), std::sqrt(18.0));
}

TEST(Wrapped, MagnitudeBoundedByHalfDiagonal) {
  for (int N : {2, 3, 8, 9}) {
    for (int d = 1; d <= 3; ++d) {
      const GridShape s(N, d);
      for (std::size_t m = 0; m < s.size(); ++m) {
        const double w = wrapped_magnitude(GridIndex::from_flat(s, m));
        ASSERT_LE(w, N / 2.0 * std::sqrt(d) + 1e-12);
        ASSERT_EQ(w == 0.0, m == 0);
        ASSERT_EQ(static_cast<double>(wrapped_magnitude_sq(s, m)), std::round(w * w));
      }
    }
  }
}

TEST(Dft, ConstantField) {
  const GridShape s(6, 2);
  const Spectrum sp = dft(GridField(s, std::vector<double>(s.size(), 2.5)));
  EXPECT_NEAR(sp[0].real(), 2.5 * 6.0, 1e-12);
  for (std::size_t m = 1; m < s.size(); ++m) EXPECT_NEAR(std::abs(sp[m]), 0.0, 1e-12);
}

TEST(Dft, DeltaField) {
  const GridShape s(5, 3);
  std::vector<double> v(s.size(), 0.0);
  v[0] = 1.0;
  const Spectrum sp = dft(GridField(s, v));
  for (std::size_t m = 0; m < s.size(); ++m) EXPECT_NEAR(std::abs(sp[m] - Complex(std::pow(5.0, -1.5), 0)), 0.0, 1e-14);
}

TEST(Dft, SineModeFourPoints) {
  const Spectrum sp = dft(GridField(GridShape(4, 1), {0.0, 1.0, 0.0, -1.0}));
  EXPECT_NEAR(std::abs(sp[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sp[1] - Complex(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sp[2]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sp[3] - Complex(0, 1)), 0.0, 1e-15);
}

TEST(Dft, MatchesNaiveSumSmallGrids) {
  std::uint64_t seed = 1;
  for (int d = 1; d <= 3; ++d) {
    for (int N = 2; N <= 8; ++N) {
      const GridField h = random_field(N, d, seed++);
      const Spectrum sp = dft(h);
      const auto ref = oracle::naive_dft(h.shape(), h.values());
      EXPECT_LT(oracle::max_abs_diff(sp.coeffs(), ref), 1e-12) << "N=" << N << " d=" << d;
    }
  }
}

TEST(Fft1d, MatchesNaiveAllSmallLengths) {
  std::vector<Complex> scratch;
  for (std::size_t n : {1u, 2u, 3u, 5u, 6u, 7u, 12u, 16u, 17u, 31u, 64u, 100u, 127u}) {
    const auto re = oracle::random_values(n, n);
    const auto im = oracle::random_values(n, n + 1000);
    std::vector<Complex> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = {re[i], im[i]};
    for (auto dir : {FftDirection::Forward, FftDirection::Inverse}) {
      std::vector<Complex> b = a;
      Fft1d(n).run(b.data(), dir, scratch);
      const auto ref = oracle::naive_dft_1d(a, static_cast<int>(dir));
      EXPECT_LT(oracle::max_abs_diff(b, ref), 1e-11 * std::sqrt(static_cast<double>(n))) << "n=" << n;
    }
  }
}

class ParsevalRoundTrip : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(ParsevalRoundTrip, HoldsToTightTolerance) {
  const auto [N, d] = GetParam();
  const GridField h = random_field(N, d, 77 + N * 10 + d);
  const Spectrum sp = dft(h);
  const double norm = grid_l2_norm(h);
  EXPECT_LE(std::abs(l2_norm(sp.coeffs()) - norm), 1e-10 * norm);
  const GridField back = idft(sp);
  double err = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) err += (back[i] - h[i]) * (back[i] - h[i]);
  EXPECT_LE(std::sqrt(err), 1e-10 * norm);
  EXPECT_LE(hermitian_defect(sp), 1e-12 * norm);
}

INSTANTIATE_TEST_SUITE_P(Grids, ParsevalRoundTrip,
                         ::testing::Values(std::pair{4, 1}, std::pair{9, 1}, std::pair{128, 1}, std::pair{4, 2},
                                           std::pair{12, 2}, std::pair{128, 2}, std::pair{4, 3}, std::pair{10, 3},
                                           std::pair{32, 3}));

TEST(Idft, ConstantFromZeroMode) {
  const GridShape s(8, 2);
  std::vector<Complex> c(s.size());
  c[0] = 8.0;
  const GridField f = idft(Spectrum(s, c));
  for (double v : f.values()) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(Idft, RejectsNonHermitian) {
  const GridShape s(8, 1);
  std::vector<Complex> c(s.size());
  c[1] = 1.0;
  try {
    idft(Spectrum(s, c));
    FAIL() << "expected NonHermitianSpectrum";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHermitianSpectrum);
  }
}

TEST(FourierRatio, ReferenceValues) {
  const GridShape s(8, 2);
  EXPECT_NEAR(fourier_ratio(GridField(s, std::vector<double>(s.size(), -3.0))), 1.0, 1e-12);
  std::vector<double> delta(s.size(), 0.0);
  delta[5] = 2.0;
  EXPECT_NEAR(fourier_ratio(GridField(s, delta)), 8.0, 1e-12);
  EXPECT_EQ(fourier_ratio(GridField::zeros(s)), 0.0);
}

TEST(FourierRatio, BoundsScaleAndShiftInvariance) {
  for (int d = 1; d <= 3; ++d) {
    const int N = d == 3 ? 6 : 16;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const GridField h = random_field(N, d, 500 + seed * 3 + d);
      const double fr = fourier_ratio(h);
      EXPECT_GE(fr, 1.0);
      EXPECT_LE(fr, h.shape().sqrt_size() + 1e-12);

      std::vector<double> scaled(h.values());
      for (double& v : scaled) v *= -7.25;
      EXPECT_NEAR(fourier_ratio(GridField(h.shape(), scaled)), fr, 1e-12 * fr);

      std::vector<double> shifted(h.size());
      const GridShape& s = h.shape();
      for (std::size_t x = 0; x < h.size(); ++x) {
        IntVec c = s.unflatten(x);
        c[0] += 3;
        if (d > 1) c[d - 1] += 1;
        shifted[s.flatten(s.reduce(c))] = h[x];
      }
      EXPECT_NEAR(fourier_ratio(GridField(s, shifted)), fr, 1e-12 * fr);
    }
  }
}

TEST(Norms, EmpiricalNorm) {
  const GridShape s(4, 2);
  const GridField c(s, std::vector<double>(s.size(), -1.5));
  const std::vector<std::size_t> some{1, 5, 9};
  EXPECT_DOUBLE_EQ(empirical_norm(c, some), 1.5);

  const GridField h = random_field(4, 2, 3);
  std::vector<std::size_t> all(s.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  EXPECT_NEAR(empirical_norm(h, all), grid_l2_norm(h) / 4.0, 1e-14);
  const std::vector<std::size_t> one{7};
  EXPECT_DOUBLE_EQ(empirical_norm(h, one), std::abs(h[7]));
  try {
    empirical_norm(h, std::vector<std::size_t>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySampleSet);
  }
}

TEST(GridField, ValidatesConstruction) {
  EXPECT_THROW(GridField(GridShape(4, 1), {1.0, 2.0}), Error);
  EXPECT_THROW(GridField(GridShape(2, 1), {1.0, NAN}), Error);
  EXPECT_THROW(Spectrum(GridShape(2, 1), {Complex{}, Complex{INFINITY, 0}}), Error);
}
