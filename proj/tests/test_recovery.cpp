#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pdefr/propagators.hpp"
#include "pdefr/recovery.hpp"

using namespace pdefr;

namespace {

constexpr double kPi = std::numbers::pi;

GridField cosine_mode(int N, int k, double amp, double phase = 0.0) {
  std::vector<double> v(static_cast<std::size_t>(N));
  for (int x = 0; x < N; ++x) v[x] = amp * std::cos(2.0 * kPi * k * x / N + phase);
  return {GridShape(N, 1), v};
}

std::vector<std::size_t> all_indices(const GridShape& s) {
  std::vector<std::size_t> v(s.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

void expect_certified(const RecoveryResult& r, const SampleSet& s, const GridField& truth) {
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.feasibility_residual, 1e-6 * (1.0 + l2_norm(s.values())));
  EXPECT_LE(r.lower_bound, r.objective * (1.0 + 1e-12));
  if (feasibility_residual(truth, s) == 0.0) {
    EXPECT_LE(r.objective, l1_norm(dft(truth).coeffs()) * (1.0 + 1e-6));
  }
  EXPECT_LE(r.imag_residue, 1e-10);
}

}  // namespace

TEST(SampleUniform, FullGridAndErrors) {
  const auto all = sample_uniform(4, 2, 16, 9);
  EXPECT_EQ(all, all_indices(GridShape(4, 2)));
  for (std::size_t M : {0u, 17u}) {
    try {
      sample_uniform(4, 2, M, 1);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadCardinality);
    }
  }
}

TEST(SampleUniform, SortedDistinctDeterministic) {
  const auto a = sample_uniform(32, 2, 300, 5);
  EXPECT_EQ(a, sample_uniform(32, 2, 300, 5));
  EXPECT_NE(a, sample_uniform(32, 2, 300, 6));
  for (std::size_t i = 1; i < a.size(); ++i) ASSERT_LT(a[i - 1], a[i]);
  EXPECT_LT(a.back(), 1024u);
}

TEST(SampleUniform, NestedAlongOneStream) {
  const GridShape s(16, 2);
  CounterRng r1(3, stream_id(StreamPurpose::Sampling, 7));
  CounterRng r2(3, stream_id(StreamPurpose::Sampling, 7));
  const auto small = sample_uniform(s, 40, r1);
  const auto big = sample_uniform(s, 120, r2);
  EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end()));
}

TEST(SampleUniform, SingletonChiSquare) {
  const int N = 4;
  const int draws = 10000;
  std::vector<int> count(N, 0);
  for (int seed = 0; seed < draws; ++seed) ++count[sample_uniform(N, 1, 1, static_cast<std::uint64_t>(seed))[0]];
  const double expected = static_cast<double>(draws) / N;
  const double sd = std::sqrt(draws * (1.0 / N) * (1.0 - 1.0 / N));
  double chi2 = 0.0;
  for (int c : count) {
    EXPECT_LE(std::abs(c - expected), 3.0 * sd);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 16.27);  // chi-square(3) at p = 0.001
}

TEST(SampleUniform, PairFrequenciesUniform) {
  // Every 2-subset of Z_6 is equally likely: 15 cells.
  std::vector<int> count(36, 0);
  const int draws = 15000;
  for (int seed = 0; seed < draws; ++seed) {
    const auto p = sample_uniform(6, 1, 2, static_cast<std::uint64_t>(seed) + 100000);
    ++count[p[0] * 6 + p[1]];
  }
  double chi2 = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) chi2 += std::pow(count[a * 6 + b] - 1000.0, 2) / 1000.0;
  EXPECT_LT(chi2, 36.12);  // chi-square(14) at p = 0.001
}

TEST(Observe, NoiselessIsExact) {
  const GridField f = cosine_mode(16, 3, 1.5);
  const SampleSet s = observe(f, {1, 4, 9}, 0.0, 1);
  EXPECT_EQ(s.tau(), 0.0);
  EXPECT_EQ(s.values(), (std::vector<double>{f[1], f[4], f[9]}));
}

TEST(Observe, NoiseNormEqualsTau) {
  const GridShape sh(32, 2);
  const GridField f(sh, oracle::random_values(sh.size(), 4));
  for (double sigma : {0.01, 0.3}) {
    const auto X = sample_uniform(32, 2, 200, 2);
    const SampleSet s = observe(f, X, sigma, 11);
    EXPECT_NEAR(s.tau(), sigma * grid_l2_norm(f), 1e-12);
    double n2 = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) n2 += std::pow(s.values()[i] - f[X[i]], 2);
    EXPECT_NEAR(std::sqrt(n2), s.tau(), 1e-12);
  }
  EXPECT_THROW(observe(f, {0}, -0.1, 1), Error);
}

TEST(SampleSet, Validation) {
  const GridShape s(4, 1);
  EXPECT_THROW(SampleSet(s, {}, {}, 0.0), Error);
  EXPECT_THROW(SampleSet(s, {2, 1}, {0.0, 0.0}, 0.0), Error);
  EXPECT_THROW(SampleSet(s, {1, 1}, {0.0, 0.0}, 0.0), Error);
  EXPECT_THROW(SampleSet(s, {4}, {0.0}, 0.0), Error);
  EXPECT_THROW(SampleSet(s, {1}, {NAN}, 0.0), Error);
  EXPECT_THROW(SampleSet(s, {1}, {0.0}, -1.0), Error);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.relaxation = 2.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.tol_obj = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Recover, FullGridPinsEverything) {
  const GridShape sh(8, 2);
  const GridField f(sh, oracle::random_values(sh.size(), 21));
  const SampleSet s = observe(f, all_indices(sh), 0.0, 1);
  const RecoveryResult r = recover_l1(s);
  expect_certified(r, s, f);
  EXPECT_LE(rel_err(r.estimate, f), 1e-8);
}

TEST(Recover, SingleModePairExact) {
  const GridField f = cosine_mode(32, 5, 1.0, 0.4);
  const SampleSet s = observe(f, sample_uniform(32, 1, 16, 3), 0.0, 1);
  const RecoveryResult r = recover_l1(s);
  expect_certified(r, s, f);
  EXPECT_LE(rel_err(r.estimate, f), 1e-6);
}

TEST(Recover, SparseHeatSnapshotIn2d) {
  FamilySpec spec;
  spec.family = Family::RandomTrig;
  spec.d = 2;
  spec.K = 3;
  spec.seed = 8;
  const GridField g = snapshot_grid(make_family(spec), PdeKind(Pde::Heat, 0.001), 32);
  const SampleSet s = observe(g, sample_uniform(32, 2, 400, 4), 0.0, 1);
  const RecoveryResult r = recover_l1(s);
  expect_certified(r, s, g);
  EXPECT_TRUE(is_success(r.estimate, g));
}

TEST(Recover, NoisyMinimality) {
  const GridShape sh(32, 2);
  FamilySpec spec;
  spec.family = Family::RandomTrig;
  spec.d = 2;
  spec.K = 4;
  spec.seed = 2;
  const GridField g = discretize(make_family(spec), 32);
  const SampleSet s = observe(g, sample_uniform(32, 2, 500, 9), 0.01, 3);
  ASSERT_NEAR(feasibility_residual(g, s), 0.0, 1e-12);
  const RecoveryResult r = recover_l1(s);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.feasibility_residual, 1e-6 * (1.0 + l2_norm(s.values())));
  EXPECT_LE(r.objective, l1_norm(dft(g).coeffs()) * (1.0 + 1e-6));
  EXPECT_LE(rel_err(r.estimate, g), 0.2);
}

TEST(Recover, DeterministicBitForBit) {
  const GridShape sh(16, 2);
  const GridField f(sh, oracle::random_values(sh.size(), 2));
  const SampleSet s = observe(f, sample_uniform(16, 2, 100, 7), 0.05, 5);
  SolverConfig c;
  c.max_iters = 300;
  const RecoveryResult a = recover_l1(s, c);
  const RecoveryResult b = recover_l1(s, c);
  EXPECT_EQ(a.estimate.values(), b.estimate.values());
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.duality_gap, b.duality_gap);
}

TEST(Recover, NotConvergedIsReported) {
  const GridShape sh(16, 2);
  const GridField f(sh, oracle::random_values(sh.size(), 3));
  const SampleSet s = observe(f, sample_uniform(16, 2, 60, 1), 0.0, 1);
  SolverConfig c;
  c.max_iters = 5;
  const RecoveryResult r = recover_l1(s, c);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_EQ(r.estimate.shape(), sh);
  EXPECT_GT(r.duality_gap, 0.0);
}

TEST(Recover, ZeroDataGivesZero) {
  const SampleSet s(GridShape(8, 1), {0, 3}, {0.0, 0.0}, 0.0);
  const RecoveryResult r = recover_l1(s);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.objective, 0.0);
}

TEST(Recover, MatchesBruteForceOracleN8) {
  // 1- and 2-sparse spectra counted in conjugate pairs, every M.
  const int N = 8;
  const std::vector<std::pair<int, double>> modes{{0, 0.0}, {1, 0.3}, {2, 1.1}, {3, -0.7}, {4, 0.0}};
  std::vector<GridField> truths;
  for (std::size_t a = 0; a < modes.size(); ++a) {
    truths.push_back(cosine_mode(N, modes[a].first, 1.0, modes[a].second));
    for (std::size_t b = a + 1; b < modes.size(); ++b) {
      const GridField u = cosine_mode(N, modes[a].first, 1.0, modes[a].second);
      const GridField v = cosine_mode(N, modes[b].first, -0.6, modes[b].second);
      std::vector<double> w(N);
      for (int x = 0; x < N; ++x) w[x] = u[x] + v[x];
      truths.emplace_back(GridShape(N, 1), w);
    }
  }
  ASSERT_EQ(truths.size(), 15u);
  std::uint64_t seed = 1;
  int checked = 0;
  for (const GridField& h : truths) {
    for (std::size_t M = 1; M <= 8; ++M) {
      const SampleSet s = observe(h, sample_uniform(N, 1, M, seed++), 0.0, 1);
      const RecoveryResult r = recover_l1(s);
      ASSERT_TRUE(r.converged);
      const double opt = oracle::l1_interpolation_optimum(N, s.indices(), s.values());
      ASSERT_NEAR(r.objective, opt, 1e-6 * std::max(opt, 1e-12)) << "M=" << M << " seed=" << seed - 1;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 120);
}

TEST(BruteForceOracle, KnownOptima) {
  // One sample of value v: the constant field v has l1 = v sqrt(8), and
  // the delta at that point has l1 = |v| 8 / sqrt(8) = |v| sqrt(8) too.
  EXPECT_NEAR(oracle::l1_interpolation_optimum(8, {3}, {2.0}), 2.0 * std::sqrt(8.0), 1e-9);
  // Full grid: the field is pinned.
  const GridField f = cosine_mode(8, 2, 1.0, 0.5);
  const auto X = all_indices(f.shape());
  EXPECT_NEAR(oracle::l1_interpolation_optimum(8, X, f.values()), l1_norm(oracle::naive_dft(f.shape(), f.values())),
              1e-12);
}

TEST(RelErr, Examples) {
  const GridField f = cosine_mode(8, 1, 1.0);
  EXPECT_EQ(rel_err(f, f), 0.0);
  EXPECT_TRUE(is_success(f, f));
  const GridField z = GridField::zeros(f.shape());
  EXPECT_DOUBLE_EQ(rel_err(z, f), 1.0);
  EXPECT_FALSE(is_success(z, f));
  EXPECT_EQ(kDefaultSuccessThreshold, 0.05);
  try {
    rel_err(f, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroTruth);
  }
}
