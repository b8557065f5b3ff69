#ifndef PDEFR_BOUNDS_HPP
#define PDEFR_BOUNDS_HPP

// Executable Fourier-ratio bounds, sampling budgets, and the lattice-sum and
// aliasing oracles they rest on.
//
// The bounds carry unspecified absolute constants (C, C_d, C1, C2, C4, C5,
// C6, c0). Every evaluation takes them from a BoundConstants map whose
// missing entries default to 1 (c0 defaults to 2 pi^2 t); `calibrate` fits
// the multiplying constants to a corpus so that "bound >= actual" becomes a
// checkable statement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pdefr/fields.hpp"
#include "pdefr/fourier.hpp"
#include "pdefr/propagators.hpp"

namespace pdefr {

class BoundConstants {
 public:
  BoundConstants() = default;
  BoundConstants(std::initializer_list<std::pair<const std::string, double>> init) : values_(init) {}

  double get(const std::string& name, double fallback = 1.0) const {
    const auto it = values_.find(name);
    return it == values_.end() ? fallback : it->second;
  }

  BoundConstants& set(const std::string& name, double value) {
    require(std::isfinite(value) && value >= 0.0, ErrorKind::BadParams, "constant " + name + " must be finite and >= 0");
    values_[name] = value;
    return *this;
  }

  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct FrBoundReport {
  double A_term = 0.0;
  double B_term = 0.0;
  double C_term = 0.0;
  double total = 0.0;
  double S_d = 0.0;
  std::map<std::string, double> constants_used;
  bool hypothesis_ok = false;

  static constexpr const char* csv_header = "A,B,C,total,hypothesis_ok";

  std::string csv_row() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%d", A_term, B_term, C_term, total, hypothesis_ok ? 1 : 0);
    return buf;
  }

  std::string key_values() const {
    std::ostringstream os;
    char buf[64];
    auto put = [&](const char* key, double v) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      os << key << '=' << buf << '\n';
    };
    put("A", A_term);
    put("B", B_term);
    put("C", C_term);
    put("total", total);
    put("S_d", S_d);
    os << "hypothesis_ok=" << (hypothesis_ok ? "true" : "false") << '\n';
    for (const auto& [name, v] : constants_used) put(("const." + name).c_str(), v);
    return os.str();
  }
};

/// Lattice growth factor: 1 (d = 1), ln N (d = 2), N^(d-2) (d >= 3).
inline double s_d(int N, int d) {
  require(N >= 2, ErrorKind::BadParams, "S_d needs N >= 2");
  require(d >= 1, ErrorKind::BadParams, "S_d needs d >= 1");
  if (d == 1) return 1.0;
  if (d == 2) return std::log(static_cast<double>(N));
  return std::pow(static_cast<double>(N), d - 2);
}

namespace detail {

inline FrBoundReport assemble(double A, double B, double C, double S, bool hyp, std::map<std::string, double> used) {
  FrBoundReport r;
  r.A_term = A;
  r.B_term = B;
  r.C_term = C;
  r.total = A + B + C;
  r.S_d = S;
  r.hypothesis_ok = hyp;
  r.constants_used = std::move(used);
  return r;
}

}  // namespace detail

/// FR(g) <= 2|mean f| / ||f|| + C (||f||_C2 / ||f||) S_d(N) + C (||f||_C2 / ||f||) / N,
/// under N ||f||^2 >= 4 C_d ||f||_C2^2.
inline FrBoundReport fr_bound_initial(const TrigPolynomial& f, int N, const BoundConstants& constants = {}) {
  const double l2 = continuous_l2(f);
  require(l2 > 0.0, ErrorKind::ZeroField, "initial-data bound needs a nonzero field");
  const double c = constants.get("C");
  const double cd = constants.get("C_d");
  const double c2 = ck_bound(f, 2);
  const double ratio = c2 / l2;
  const double S = s_d(N, f.d());
  const bool hyp = N * l2 * l2 >= 4.0 * cd * c2 * c2;
  return detail::assemble(2.0 * std::abs(mean(f)) / l2, c * ratio * S, c * ratio / N, S, hyp, {{"C", c}, {"C_d", cd}});
}

namespace detail {

inline TrigPolynomial nondegenerate_snapshot(const TrigPolynomial& f, const PdeKind& pde) {
  const double l2 = continuous_l2(f);
  require(l2 > 0.0, ErrorKind::ZeroField, "snapshot bound needs a nonzero field");
  TrigPolynomial snap = apply_snapshot(f, pde);
  // Wave snapshots can vanish through sin(2 pi t |k|) = 0; relative cutoff
  // because the roots are only hit to rounding.
  if (continuous_l2(snap) <= 1e-12 * l2 * std::max(1.0, pde.t)) {
    fail(ErrorKind::DegenerateSnapshot, "snapshot has no L2 energy at this time; the bound is not meaningful");
  }
  return snap;
}

inline FrBoundReport snapshot_bound(const TrigPolynomial& f, const TrigPolynomial& snap, int N, int order,
                                    const BoundConstants& constants, const char* first, const char* second) {
  const double l2s = continuous_l2(snap);
  const double c1 = constants.get(first);
  const double c2 = constants.get(second);
  const double cd = constants.get("C_d");
  const double ratio = ck_bound(f, order) / l2s;
  const double snap_c2 = ck_bound(snap, 2);
  const bool hyp = N * l2s * l2s >= 4.0 * cd * snap_c2 * snap_c2;
  return assemble(2.0 * std::abs(mean(snap)) / l2s, c1 * ratio, c2 * ratio / N, s_d(N, f.d()), hyp,
                  {{first, c1}, {second, c2}, {"C_d", cd}});
}

}  // namespace detail

/// Wave snapshot bound in d = 3: A_t + C1 ||f||_C3 / ||U_t f|| + C2 ||f||_C3 / (||U_t f|| N).
inline FrBoundReport fr_bound_wave(const TrigPolynomial& f, double t, int N, const BoundConstants& constants = {}) {
  require(f.d() == 3, ErrorKind::WaveDimensionMismatch, "the wave bound is stated for d = 3");
  const TrigPolynomial snap = detail::nondegenerate_snapshot(f, PdeKind(Pde::Wave, t));
  return detail::snapshot_bound(f, snap, N, 3, constants, "C1", "C2");
}

/// Heat snapshot bound: A_t + C4 ||f||_C2 / ||H_t f|| + C5 ||f||_C2 / (||H_t f|| N).
inline FrBoundReport fr_bound_heat(const TrigPolynomial& f, double t, int N, const BoundConstants& constants = {}) {
  const TrigPolynomial snap = detail::nondegenerate_snapshot(f, PdeKind(Pde::Heat, t));
  return detail::snapshot_bound(f, snap, N, 2, constants, "C4", "C5");
}

// ---------------------------------------------------------------------------
// Calibration.

enum class BoundKind { Initial, Wave, Heat };

/// One corpus observation: the measured FR and the bound evaluated with all
/// multiplying constants equal to 1.
struct CalibrationPoint {
  double fr = 0.0;
  FrBoundReport unit_report;
};

/// Smallest common multiplier kappa for the B and C terms such that
/// fr <= A + kappa (B + C) on every point.
inline double calibrate_scale(std::span<const CalibrationPoint> points) {
  double kappa = 0.0;
  for (const auto& p : points) {
    const double slack = p.fr - p.unit_report.A_term;
    const double unit = p.unit_report.B_term + p.unit_report.C_term;
    if (slack > 0.0) {
      require(unit > 0.0, ErrorKind::BadParams, "bound has no adjustable term but FR exceeds its constant part");
      kappa = std::max(kappa, slack / unit);
    }
  }
  return kappa;
}

inline CalibrationPoint measure_bound(BoundKind kind, const TrigPolynomial& f, int N, double t,
                                      const BoundConstants& base = {}) {
  switch (kind) {
    case BoundKind::Initial:
      return {fourier_ratio(discretize(f, N)), fr_bound_initial(f, N, base)};
    case BoundKind::Wave:
      return {fourier_ratio(snapshot_grid(f, PdeKind(Pde::Wave, t), N)), fr_bound_wave(f, t, N, base)};
    case BoundKind::Heat:
      return {fourier_ratio(snapshot_grid(f, PdeKind(Pde::Heat, t), N)), fr_bound_heat(f, t, N, base)};
  }
  fail(ErrorKind::BadParams, "unknown bound kind");
}

/// Fits the bound's multiplying constants over `corpus` x `Ns` at time t
/// (ignored for the initial bound). B and C constants share one fitted value.
inline BoundConstants calibrate(BoundKind kind, std::span<const TrigPolynomial> corpus, std::span<const int> Ns,
                                double t, BoundConstants base = {}) {
  std::vector<CalibrationPoint> points;
  for (const auto& f : corpus)
    for (int N : Ns) points.push_back(measure_bound(kind, f, N, t, BoundConstants{{"C_d", base.get("C_d")}}));
  const double kappa = calibrate_scale(points);
  switch (kind) {
    case BoundKind::Initial: base.set("C", kappa); break;
    case BoundKind::Wave: base.set("C1", kappa).set("C2", kappa); break;
    case BoundKind::Heat: base.set("C4", kappa).set("C5", kappa); break;
  }
  return base;
}

/// Calibration corpus: seeds 9001-9032 of the random-trig and bump-sum
/// families in dimension d (band K = default_band(d)).
inline std::vector<FamilySpec> default_calibration_corpus(int d) {
  std::vector<FamilySpec> out;
  for (std::uint64_t seed = 9001; seed <= 9032; ++seed) {
    FamilySpec trig;
    trig.family = Family::RandomTrig;
    trig.d = d;
    trig.K = default_band(d);
    trig.seed = seed;
    out.push_back(trig);
    FamilySpec bump = trig;
    bump.family = Family::BumpSum;
    out.push_back(bump);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling budgets.

inline void check_budget_params(double r, double eps, double D, double C) {
  require(std::isfinite(r) && r >= 1.0, ErrorKind::BadParams, "FR bound r must be >= 1");
  require(eps > 0.0 && eps < 0.5, ErrorKind::BadParams, "eps must lie in (0, 1/2)");
  require(std::isfinite(D) && D >= 2.0, ErrorKind::BadParams, "ambient dimension D must be >= 2");
  require(std::isfinite(C) && C > 0.0, ErrorKind::BadParams, "budget constant C must be positive");
}

/// C (r / eps)^2 ln^2(max(r / eps, e)) ln D, before rounding and clamping.
inline double sample_budget_raw(double r, double eps, double D, double C) {
  check_budget_params(r, eps, D, C);
  const double ratio = r / eps;
  const double lg = std::log(std::max(ratio, std::numbers::e));
  return C * ratio * ratio * lg * lg * std::log(D);
}

/// Sufficient random sample count, rounded up and clamped to [1, floor(D)]
/// (a budget above the grid size means "sample everything").
inline std::uint64_t sample_budget(double r, double eps, double D, double C = 1.0) {
  const double raw = sample_budget_raw(r, eps, D, C);
  const double cap = std::floor(D);
  const double m = std::min(std::ceil(raw), cap);
  return static_cast<std::uint64_t>(std::max(1.0, m));
}

/// Sensor availability m(t) = m0 exp(-lambda t).
struct SensorModel {
  double m0 = 0.0;
  double lambda = 0.0;

  double available(double t) const noexcept { return m0 * std::exp(-lambda * t); }
};

struct BudgetCurve {
  std::vector<double> times;
  std::vector<double> r_of_t;
  std::vector<std::uint64_t> M_of_t;
  std::optional<std::vector<double>> m_of_t;
  /// Inclusive time range of the longest contiguous run with m(t) >= M(t)
  /// (earliest on ties); the whole range when there is no sensor model.
  std::optional<std::pair<double, double>> window;
};

inline BudgetCurve budget_over_time(std::span<const double> times, std::span<const double> r_of_t, double eps,
                                    double D, double C = 1.0, std::optional<SensorModel> sensor = std::nullopt) {
  require(!times.empty(), ErrorKind::BadParams, "budget curve needs at least one time");
  require(times.size() == r_of_t.size(), ErrorKind::BadParams, "times and r(t) must have equal length");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], ErrorKind::BadParams, "times must be strictly increasing");
  if (sensor) {
    require(sensor->m0 >= 0.0 && std::isfinite(sensor->m0), ErrorKind::BadParams, "m0 must be finite and >= 0");
    require(std::isfinite(sensor->lambda), ErrorKind::BadParams, "lambda must be finite");
  }
  BudgetCurve curve;
  curve.times.assign(times.begin(), times.end());
  curve.r_of_t.assign(r_of_t.begin(), r_of_t.end());
  for (double r : r_of_t) curve.M_of_t.push_back(sample_budget(r, eps, D, C));
  if (!sensor) {
    curve.window = std::pair{times.front(), times.back()};
    return curve;
  }
  curve.m_of_t.emplace();
  std::size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double m = sensor->available(times[i]);
    curve.m_of_t->push_back(m);
    if (m >= static_cast<double>(curve.M_of_t[i])) {
      if (run_len == 0) run_start = i;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
    } else {
      run_len = 0;
    }
  }
  if (best_len > 0) curve.window = std::pair{times[best_start], times[best_start + best_len - 1]};
  return curve;
}

// ---------------------------------------------------------------------------
// Riemann-sum and aliasing oracles.

/// |N^-d sum_x g(x) - a_0|.
inline double riemann_mean_error(const TrigPolynomial& f, int N) {
  const GridField g = discretize(f, N);
  double s = 0.0;
  for (double v : g.values()) s += v;
  return std::abs(s / static_cast<double>(g.size()) - mean(f));
}

/// |N^-d sum_x |g(x)|^2 - sum_k |a_k|^2|.
inline double riemann_l2_error(const TrigPolynomial& f, int N) {
  const GridField g = discretize(f, N);
  double s = 0.0;
  for (double v : g.values()) s += v * v;
  const double l2 = continuous_l2(f);
  return std::abs(s / static_cast<double>(g.size()) - l2 * l2);
}

/// N^(d/2) sum_l a_{m~ + l N} over the finite support, where m~ is the
/// wrapped representative of m; enumerates the shifts l directly.
inline Complex aliasing_sum(const TrigPolynomial& f, int N, std::size_t flat_m) {
  const GridShape shape(N, f.d());
  const IntVec m = wrapped_representative(GridIndex::from_flat(shape, flat_m));
  const auto reach = static_cast<std::int64_t>(std::ceil(f.support_radius() / N)) + 1;
  const std::int64_t r1 = f.d() >= 2 ? reach : 0;
  const std::int64_t r2 = f.d() >= 3 ? reach : 0;
  Complex s{};
  for (std::int64_t a = -reach; a <= reach; ++a)
    for (std::int64_t b = -r1; b <= r1; ++b)
      for (std::int64_t c = -r2; c <= r2; ++c) s += f.coefficient({m[0] + a * N, m[1] + b * N, m[2] + c * N});
  return shape.sqrt_size() * s;
}

struct AliasingCheck {
  Complex lhs;
  Complex rhs;
};

/// lhs: DFT of the pointwise-evaluated discretization at m; rhs: the folded
/// coefficient sum. Equal up to rounding for every finitely supported f.
inline AliasingCheck aliasing_check(const TrigPolynomial& f, int N, std::size_t flat_m) {
  const Spectrum lhs = dft(evaluate_on_grid(f, N));
  require(flat_m < lhs.size(), ErrorKind::InvalidArgument, "frequency index outside the grid");
  return {lhs[flat_m], aliasing_sum(f, N, flat_m)};
}

/// max_m |lhs - rhs| / (1 + |rhs|) over every m in Z_N^d.
inline double aliasing_max_error(const TrigPolynomial& f, int N) {
  const Spectrum lhs = dft(evaluate_on_grid(f, N));
  double worst = 0.0;
  for (std::size_t m = 0; m < lhs.size(); ++m) {
    const Complex rhs = aliasing_sum(f, N, m);
    worst = std::max(worst, std::abs(lhs[m] - rhs) / (1.0 + std::abs(rhs)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Lattice sums over Z_N^d \ {0}, by exhaustive enumeration.

namespace detail {

/// Compensated (Neumaier) accumulation in a fixed order.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <typename Term>
double lattice_sum(int N, int d, Term&& term) {
  const GridShape shape(N, d);
  std::vector<std::int64_t> sq(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const std::int64_t w = wrap_coordinate(i, N);
    sq[static_cast<std::size_t>(i)] = w * w;
  }
  const int n1 = d >= 2 ? N : 1;
  const int n2 = d >= 3 ? N : 1;
  CompensatedSum acc;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < n1; ++b)
      for (int c = 0; c < n2; ++c) {
        const std::int64_t r2 = sq[a] + (d >= 2 ? sq[b] : 0) + (d >= 3 ? sq[c] : 0);
        if (r2 != 0) acc.add(term(static_cast<double>(r2)));
      }
  return acc.value();
}

}  // namespace detail

/// sum_{m != 0} |m|^-p with wrapped magnitudes.
inline double lattice_power_sum(int N, int d, double p) {
  require(p > 0.0, ErrorKind::BadParams, "power p must be positive");
  return detail::lattice_sum(N, d, [p](double r2) { return std::pow(r2, -0.5 * p); });
}

/// sum_{m != 0} exp(-a |m|^2) with wrapped magnitudes.
inline double gaussian_lattice_sum(int N, int d, double a) {
  require(a > 0.0, ErrorKind::BadParams, "Gaussian rate a must be positive");
  return detail::lattice_sum(N, d, [a](double r2) { return std::exp(-a * r2); });
}

// ---------------------------------------------------------------------------
// Empirical decay constants.

enum class DecayWeight { Polynomial, Gaussian };

/// max_{m != 0} |s(m)| w(m) / N^(d/2) with w = |m|^p (polynomial) or
/// exp(p |m|^2) (Gaussian, p playing the role of the rate a). Coefficients at
/// or below 1e-11 ||s||_2 are treated as zero: they are FFT rounding noise,
/// and a Gaussian weight would blow them up.
inline double decay_constant(const Spectrum& s, double p, DecayWeight weight) {
  require(l2_norm(s.coeffs()) > 0.0, ErrorKind::ZeroField, "decay constant of the zero spectrum");
  const double scale = s.shape().sqrt_size();
  const double noise = 1e-11 * l2_norm(s.coeffs());
  double worst = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    const auto r2 = static_cast<double>(wrapped_magnitude_sq(s.shape(), m));
    const double mag = std::abs(s[m]);
    if (r2 == 0.0 || mag <= noise) continue;
    const double logw = weight == DecayWeight::Polynomial ? 0.5 * p * std::log(r2) : p * r2;
    worst = std::max(worst, std::exp(std::log(mag / scale) + logw));
  }
  return worst;
}

/// Default Gaussian rate for heat-snapshot decay: half of 4 pi^2 t.
inline double default_heat_decay_rate(double t, const BoundConstants& constants = {}) {
  return constants.get("c0", 2.0 * std::numbers::pi * std::numbers::pi * t);
}

}  // namespace pdefr

#endif  // PDEFR_BOUNDS_HPP
