#ifndef PDEFR_FIELDS_HPP
#define PDEFR_FIELDS_HPP

// Continuous 1-periodic fields on [0,1]^d stored as finitely supported
// Fourier series f(u) = sum_k a_k exp(2 pi i k.u). Norms, propagation and
// discretization are exact on this representation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pdefr/fourier.hpp"
#include "pdefr/grid.hpp"
#include "pdefr/rng.hpp"

namespace pdefr {

inline std::int64_t freq_norm_sq(const IntVec& k) noexcept { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }
inline double freq_norm(const IntVec& k) noexcept { return std::sqrt(static_cast<double>(freq_norm_sq(k))); }
inline IntVec negated(const IntVec& k) noexcept { return {-k[0], -k[1], -k[2]}; }

class TrigPolynomial {
 public:
  using Terms = std::map<IntVec, Complex>;

  explicit TrigPolynomial(int d) : TrigPolynomial(d, Terms{}) {}

  /// Validates finiteness and Hermitian symmetry a_{-k} = conj(a_k), the
  /// latter relative to the largest coefficient.
  TrigPolynomial(int d, Terms terms, double hermitian_tol = 1e-12) : d_(d), terms_(std::move(terms)) {
    require(d >= 1 && d <= 3, ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
    double biggest = 0.0;
    for (const auto& [k, a] : terms_) {
      for (int j = d; j < 3; ++j) require(k[j] == 0, ErrorKind::InvalidArgument, "frequency has components beyond d");
      require(std::isfinite(a.real()) && std::isfinite(a.imag()), ErrorKind::InvalidArgument,
              "coefficient is not finite");
      biggest = std::max(biggest, std::abs(a));
    }
    for (const auto& [k, a] : terms_) {
      const Complex partner = coefficient(negated(k));
      require(std::abs(partner - std::conj(a)) <= hermitian_tol * biggest, ErrorKind::InvalidArgument,
              "coefficients are not Hermitian-symmetric (field would not be real)");
    }
  }

  int d() const noexcept { return d_; }
  const Terms& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  Complex coefficient(const IntVec& k) const {
    const auto it = terms_.find(k);
    return it == terms_.end() ? Complex{} : it->second;
  }

  double support_radius() const noexcept {
    double r = 0.0;
    for (const auto& [k, a] : terms_) r = std::max(r, freq_norm(k));
    return r;
  }

  /// f(u) at a point u in R^d (real part; the imaginary part is rounding).
  Complex evaluate(std::span<const double> u) const noexcept {
    Complex s{};
    for (const auto& [k, a] : terms_) {
      double phase = 0.0;
      for (int j = 0; j < d_; ++j) phase += static_cast<double>(k[j]) * u[j];
      phase = 2.0 * std::numbers::pi * (phase - std::floor(phase));
      s += a * Complex{std::cos(phase), std::sin(phase)};
    }
    return s;
  }

 private:
  int d_;
  Terms terms_;
};

// ---------------------------------------------------------------------------
// Norms of the continuous field.

/// (sum |a_k|^2)^(1/2) = ||f||_{L^2([0,1]^d)}.
inline double continuous_l2(const TrigPolynomial& f) noexcept {
  double s = 0.0;
  for (const auto& [k, a] : f.terms()) s += std::norm(a);
  return std::sqrt(s);
}

/// Integral of f over the unit cube, i.e. a_0.
inline double mean(const TrigPolynomial& f) { return f.coefficient({0, 0, 0}).real(); }

/// sum_k (1 + 2 pi |k|)^r |a_k|: dominates ||f||_{C^r} under any convention
/// for mixed derivatives.
inline double ck_bound(const TrigPolynomial& f, int r) {
  require(r >= 0 && r <= 3, ErrorKind::InvalidArgument, "ck_bound order must be in {0,1,2,3}");
  double s = 0.0;
  for (const auto& [k, a] : f.terms()) s += std::pow(1.0 + 2.0 * std::numbers::pi * freq_norm(k), r) * std::abs(a);
  return s;
}

// ---------------------------------------------------------------------------
// Discretization g(x) = f(x / N).

/// DFT of the discretization, built without a transform: a_k lands in bin
/// k mod N scaled by N^(d/2). Entries off the folded support are exactly 0.
inline Spectrum exact_spectrum(const TrigPolynomial& f, int N) {
  const GridShape shape(N, f.d());
  std::vector<Complex> bins(shape.size());
  const double scale = shape.sqrt_size();
  for (const auto& [k, a] : f.terms()) bins[shape.flatten(shape.reduce(k))] += scale * a;
  return {shape, std::move(bins)};
}

/// g(x) = f(x / N), via the folded spectrum and one inverse transform.
inline GridField discretize(const TrigPolynomial& f, int N) { return idft(exact_spectrum(f, N)); }

/// Direct pointwise evaluation of the Fourier series at every grid point.
/// O(N^d * terms); used as an independent route to `discretize`.
inline GridField evaluate_on_grid(const TrigPolynomial& f, int N) {
  const GridShape shape(N, f.d());
  std::vector<Complex> roots(static_cast<std::size_t>(N));
  for (int r = 0; r < N; ++r) {
    const double phase = 2.0 * std::numbers::pi * r / N;
    roots[static_cast<std::size_t>(r)] = {std::cos(phase), std::sin(phase)};
  }
  std::vector<double> values(shape.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const IntVec x = shape.unflatten(i);
    Complex s{};
    for (const auto& [k, a] : f.terms()) {
      std::int64_t dot = 0;
      for (int j = 0; j < f.d(); ++j) dot += k[j] * x[j];
      dot %= N;
      if (dot < 0) dot += N;
      s += a * roots[static_cast<std::size_t>(dot)];
    }
    values[i] = s.real();
  }
  return {shape, std::move(values)};
}

// ---------------------------------------------------------------------------
// Test families.

enum class Family { RandomTrig, RoughSpectrum, BumpSum, ModulatedWave };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::RandomTrig: return "random-trig";
    case Family::RoughSpectrum: return "rough-spectrum";
    case Family::BumpSum: return "bump-sum";
    case Family::ModulatedWave: return "modulated-wave";
  }
  return "?";
}

inline Family parse_family(const std::string& name) {
  if (name == "random-trig") return Family::RandomTrig;
  if (name == "rough-spectrum") return Family::RoughSpectrum;
  if (name == "bump-sum") return Family::BumpSum;
  if (name == "modulated-wave") return Family::ModulatedWave;
  fail(ErrorKind::Config, "unknown family '" + name + "'");
}

/// Default band for the random-trig family: K = 8 in d = 2 and K = 6 in d = 3.
inline int default_band(int d) { return d == 3 ? 6 : 8; }

/// Rough-spectrum cutoff tied to the grid so the discretization is alias-free.
inline int rough_cutoff_for_grid(int N) { return N / 2 - 1; }

struct FamilySpec {
  Family family = Family::RandomTrig;
  int d = 2;
  int K = 8;
  double alpha = 2.0;         // rough-spectrum decay exponent
  std::uint64_t seed = 1;
  double width = 0.08;        // bump-sum Gaussian width
  int bumps = 3;              // bump count when centers are drawn at random
  std::vector<std::array<double, 3>> centers;
  IntVec carrier{0, 0, 0};    // modulated-wave k0; zero means (K, 0, 0)
  int envelope_K = 2;         // modulated-wave envelope band; 0 is a constant envelope

  void validate() const {
    require(d >= 1 && d <= 3, ErrorKind::Config, "family dimension must be 1, 2 or 3");
    require(K >= 1, ErrorKind::Config, "band parameter K must be >= 1");
    require(width > 0.0, ErrorKind::Config, "bump width must be positive");
    require(bumps >= 1 || !centers.empty(), ErrorKind::Config, "bump-sum needs at least one bump");
    require(envelope_K >= 0, ErrorKind::Config, "envelope band must be >= 0");
  }
};

namespace detail {

/// Counter for a frequency: each coordinate offset by 2^20 into a 21-bit slot,
/// so coefficient draws do not depend on enumeration order or band size.
inline std::uint64_t frequency_counter(const IntVec& k) noexcept {
  constexpr std::int64_t offset = std::int64_t{1} << 20;
  return (static_cast<std::uint64_t>(k[0] + offset) << 42) | (static_cast<std::uint64_t>(k[1] + offset) << 21) |
         static_cast<std::uint64_t>(k[2] + offset);
}

inline double frequency_gaussian(const CounterRng& rng, const IntVec& k) noexcept {
  const auto words = rng.at(frequency_counter(k));
  return CounterRng::box_muller(CounterRng::to_open_unit(words[0]), CounterRng::to_open_unit(words[1]));
}

/// Representative of {k, -k}: the lexicographically larger one.
inline IntVec pair_representative(const IntVec& k) noexcept { return std::max(k, negated(k)); }

template <typename Visit>
void for_each_in_ball(int d, std::int64_t radius, Visit&& visit) {
  const std::int64_t r2 = radius * radius;
  const std::int64_t r1 = d >= 2 ? radius : 0;
  const std::int64_t r0 = d >= 3 ? radius : 0;
  // Enumerate with the first d coordinates active, trailing ones fixed at 0.
  for (std::int64_t a = -radius; a <= radius; ++a)
    for (std::int64_t b = -r1; b <= r1; ++b)
      for (std::int64_t c = -r0; c <= r0; ++c) {
        const IntVec k = d == 1 ? IntVec{a, 0, 0} : d == 2 ? IntVec{a, b, 0} : IntVec{a, b, c};
        if (freq_norm_sq(k) <= r2) visit(k);
      }
}

}  // namespace detail

/// a_k ~ N(0,1) for |k| <= K and 0.2 N(0,1) for K < |k| <= 2K, made real by
/// averaging conjugate pairs: a_k = (c_k + c_{-k}) / 2.
inline TrigPolynomial random_trig_poly(const FamilySpec& spec) {
  spec.validate();
  const CounterRng rng(spec.seed, stream_id(StreamPurpose::FamilyCoefficients, 0));
  TrigPolynomial::Terms terms;
  detail::for_each_in_ball(spec.d, 2 * spec.K, [&](const IntVec& k) {
    const double amp = freq_norm_sq(k) <= std::int64_t{spec.K} * spec.K ? 1.0 : 0.2;
    const double c = 0.5 * (detail::frequency_gaussian(rng, k) + detail::frequency_gaussian(rng, negated(k)));
    terms[k] = amp * c;
  });
  return {spec.d, std::move(terms)};
}

/// a_k = |k|^-alpha * xi_k on 1 <= |k| <= K with xi_k = xi_{-k} random signs.
inline TrigPolynomial rough_spectrum_poly(const FamilySpec& spec) {
  spec.validate();
  require(spec.alpha > 0.5 * spec.d, ErrorKind::BadExponent,
          "rough-spectrum exponent alpha must exceed d/2 for a square-summable spectrum");
  const CounterRng rng(spec.seed, stream_id(StreamPurpose::FamilyCoefficients, 1));
  TrigPolynomial::Terms terms;
  detail::for_each_in_ball(spec.d, spec.K, [&](const IntVec& k) {
    if (freq_norm_sq(k) == 0) return;
    const auto words = rng.at(detail::frequency_counter(detail::pair_representative(k)));
    const double sign = (words[0] & 1u) ? 1.0 : -1.0;
    terms[k] = sign * std::pow(freq_norm(k), -spec.alpha);
  });
  return {spec.d, std::move(terms)};
}

/// Bump centers: the explicit list, or `bumps` uniform draws in [0,1)^d.
inline std::vector<std::array<double, 3>> bump_centers(const FamilySpec& spec) {
  if (!spec.centers.empty()) return spec.centers;
  CounterRng rng(spec.seed, stream_id(StreamPurpose::FamilyGeometry, 0));
  std::vector<std::array<double, 3>> centers(static_cast<std::size_t>(spec.bumps), {0.0, 0.0, 0.0});
  for (auto& c : centers)
    for (int j = 0; j < spec.d; ++j) c[j] = rng.uniform01();
  return centers;
}

/// Periodized unit-mass Gaussians of width w at the centers c_j:
/// a_k = sum_j exp(-2 pi i k.c_j) exp(-2 pi^2 w^2 |k|^2), truncated below
/// 1e-14 of the largest coefficient.
inline TrigPolynomial bump_sum_poly(const FamilySpec& spec) {
  spec.validate();
  const auto centers = bump_centers(spec);
  const double w2 = spec.width * spec.width;
  const double pi = std::numbers::pi;
  const auto radius = static_cast<std::int64_t>(std::ceil(std::sqrt(std::log(1e14) / (2.0 * pi * pi * w2)))) + 1;
  TrigPolynomial::Terms raw;
  double biggest = 0.0;
  detail::for_each_in_ball(spec.d, radius, [&](const IntVec& k) {
    const double envelope = std::exp(-2.0 * pi * pi * w2 * static_cast<double>(freq_norm_sq(k)));
    Complex a{};
    for (const auto& c : centers) {
      double dot = 0.0;
      for (int j = 0; j < spec.d; ++j) dot += static_cast<double>(k[j]) * c[j];
      a += Complex{std::cos(-2.0 * pi * dot), std::sin(-2.0 * pi * dot)};
    }
    a *= envelope;
    biggest = std::max(biggest, std::abs(a));
    raw[k] = a;
  });
  TrigPolynomial::Terms terms;
  for (const auto& [k, a] : raw)
    if (std::abs(a) >= 1e-14 * biggest) terms[k] = a;
  return {spec.d, std::move(terms)};
}

/// Real part of envelope(u) * exp(2 pi i k0.u), where the envelope is a real
/// random trig polynomial of band `envelope_K`.
inline TrigPolynomial modulated_wave_poly(const FamilySpec& spec) {
  spec.validate();
  IntVec k0 = spec.carrier;
  if (k0 == IntVec{0, 0, 0}) k0 = {spec.K, 0, 0};
  for (int j = spec.d; j < 3; ++j) require(k0[j] == 0, ErrorKind::Config, "carrier has components beyond d");
  const CounterRng rng(spec.seed, stream_id(StreamPurpose::FamilyCoefficients, 3));
  std::map<IntVec, double> envelope;
  detail::for_each_in_ball(spec.d, spec.envelope_K, [&](const IntVec& k) {
    envelope[k] = 0.5 * (detail::frequency_gaussian(rng, k) + detail::frequency_gaussian(rng, negated(k)));
  });
  // b_k = e_{k - k0}; a_k = (b_k + conj(b_{-k})) / 2.
  TrigPolynomial::Terms terms;
  for (const auto& [j, e] : envelope) {
    const IntVec plus{j[0] + k0[0], j[1] + k0[1], j[2] + k0[2]};
    terms[plus] += 0.5 * e;
    terms[negated(plus)] += 0.5 * e;
  }
  return {spec.d, std::move(terms)};
}

inline TrigPolynomial make_family(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::RandomTrig: return random_trig_poly(spec);
    case Family::RoughSpectrum: return rough_spectrum_poly(spec);
    case Family::BumpSum: return bump_sum_poly(spec);
    case Family::ModulatedWave: return modulated_wave_poly(spec);
  }
  fail(ErrorKind::Config, "unknown family");
}

/// The family instance used on an N-grid: rough-spectrum ties its cutoff to N.
inline TrigPolynomial make_family_for_grid(FamilySpec spec, int N) {
  if (spec.family == Family::RoughSpectrum) spec.K = rough_cutoff_for_grid(N);
  return make_family(spec);
}

}  // namespace pdefr

#endif  // PDEFR_FIELDS_HPP
