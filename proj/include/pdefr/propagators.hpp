#ifndef PDEFR_PROPAGATORS_HPP
#define PDEFR_PROPAGATORS_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "pdefr/fields.hpp"

namespace pdefr {

enum class Pde { Wave, Heat };

inline const char* to_string(Pde p) { return p == Pde::Wave ? "wave" : "heat"; }

inline Pde parse_pde(const std::string& name) {
  if (name == "wave") return Pde::Wave;
  if (name == "heat") return Pde::Heat;
  fail(ErrorKind::Config, "unknown pde '" + name + "' (expected wave or heat)");
}

/// A fixed-time propagator: wave (u(0) = 0, u_t(0) = f) or heat (v(0) = f).
struct PdeKind {
  Pde kind = Pde::Heat;
  double t = 0.0;

  PdeKind() = default;
  PdeKind(Pde k, double time) : kind(k), t(time) {
    require(std::isfinite(time) && time >= 0.0, ErrorKind::InvalidArgument, "time must be finite and >= 0");
  }
};

/// sin(2 pi t |k|) / (2 pi |k|) for k != 0, and t at k = 0.
inline double wave_multiplier(const IntVec& k, double t) {
  require(t >= 0.0, ErrorKind::InvalidArgument, "time must be >= 0");
  const double r = freq_norm(k);
  if (r == 0.0) return t;
  const double two_pi_r = 2.0 * std::numbers::pi * r;
  return std::sin(two_pi_r * t) / two_pi_r;
}

/// exp(-4 pi^2 t |k|^2).
inline double heat_multiplier(const IntVec& k, double t) {
  require(t >= 0.0, ErrorKind::InvalidArgument, "time must be >= 0");
  return std::exp(-4.0 * std::numbers::pi * std::numbers::pi * t * static_cast<double>(freq_norm_sq(k)));
}

inline double multiplier(const PdeKind& pde, const IntVec& k) {
  return pde.kind == Pde::Wave ? wave_multiplier(k, pde.t) : heat_multiplier(k, pde.t);
}

/// Coefficient-wise b_k = multiplier(k, t) a_k. The wave snapshot is only
/// covered by the d = 3 theory; other dimensions need `allow_any_dimension`.
inline TrigPolynomial apply_snapshot(const TrigPolynomial& f, const PdeKind& pde, bool allow_any_dimension = false) {
  if (pde.kind == Pde::Wave && f.d() != 3 && !allow_any_dimension) {
    fail(ErrorKind::WaveDimensionMismatch,
         "wave snapshot requested in d=" + std::to_string(f.d()) + "; pass the override to use it outside d=3");
  }
  TrigPolynomial::Terms out;
  for (const auto& [k, a] : f.terms()) out[k] = multiplier(pde, k) * a;
  return {f.d(), std::move(out)};
}

inline GridField snapshot_grid(const TrigPolynomial& f, const PdeKind& pde, int N, bool allow_any_dimension = false) {
  return discretize(apply_snapshot(f, pde, allow_any_dimension), N);
}

}  // namespace pdefr

#endif  // PDEFR_PROPAGATORS_HPP
