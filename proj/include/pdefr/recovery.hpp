#ifndef PDEFR_RECOVERY_HPP
#define PDEFR_RECOVERY_HPP

// Recovery of a real field on Z_N^d from point samples by
//
//     minimize ||hat q||_1  subject to  ||P_X q - y||_2 <= tau.
//
// The solver is over-relaxed Douglas-Rachford (run in its ADMM form) on the
// spectrum c = hat q, with a threshold step scaled from A* y and shrunk when
// progress stalls. With A c = (F^-1 c)|_X the sampling operator has
// orthonormal rows (A A* = I), so the projection onto the data ball is exact:
//
//     P(c) = c - A* (r - Pi_tau(r)),   r = A c - y,
//
// and the second step is complex soft thresholding. Each iteration costs one
// inverse and one forward FFT plus O(N^d) work. The projected iterate is
// always feasible; the normal-cone part of the projection doubles as a dual
// certificate, giving a lower bound on the optimum and hence a duality gap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdefr/fft.hpp"
#include "pdefr/fourier.hpp"
#include "pdefr/grid.hpp"
#include "pdefr/rng.hpp"

namespace pdefr {

/// Observed points X (sorted flat indices), values y on X, and tolerance tau.
class SampleSet {
 public:
  SampleSet(GridShape shape, std::vector<std::size_t> indices, std::vector<double> values, double tau)
      : shape_(shape), indices_(std::move(indices)), values_(std::move(values)), tau_(tau) {
    require(!indices_.empty(), ErrorKind::EmptySampleSet, "sample set is empty");
    require(indices_.size() == values_.size(), ErrorKind::InvalidArgument, "indices and values differ in length");
    require(std::isfinite(tau) && tau >= 0.0, ErrorKind::InvalidArgument, "tau must be finite and >= 0");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      require(indices_[i] < shape_.size(), ErrorKind::InvalidArgument, "sample index outside the grid");
      require(i == 0 || indices_[i] > indices_[i - 1], ErrorKind::InvalidArgument,
              "sample indices must be sorted and distinct");
      require(std::isfinite(values_[i]), ErrorKind::InvalidArgument, "sample value is not finite");
    }
  }

  const GridShape& shape() const noexcept { return shape_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double tau() const noexcept { return tau_; }
  std::size_t size() const noexcept { return indices_.size(); }

 private:
  GridShape shape_;
  std::vector<std::size_t> indices_;
  std::vector<double> values_;
  double tau_;
};

inline double empirical_norm(const GridField& field, const SampleSet& samples) {
  return empirical_norm(field, std::span<const std::size_t>(samples.indices()));
}

/// Uniform random M-subset of Z_N^d, sorted. A sparse partial Fisher-Yates
/// shuffle: the first M draws of a stream are a prefix of the first M' > M,
/// so sample sets from one stream are nested.
inline std::vector<std::size_t> sample_uniform(const GridShape& shape, std::size_t M, CounterRng& rng) {
  const std::size_t D = shape.size();
  require(M >= 1 && M <= D, ErrorKind::BadCardinality,
          "sample count must lie in [1, N^d]; got " + std::to_string(M) + " for N^d = " + std::to_string(D));
  std::unordered_map<std::size_t, std::size_t> swapped;
  auto at = [&](std::size_t i) {
    const auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<std::size_t> out(M);
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(D - i));
    const std::size_t vi = at(i);
    const std::size_t vj = at(j);
    swapped[j] = vi;
    out[i] = vj;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::size_t> sample_uniform(int N, int d, std::size_t M, std::uint64_t seed) {
  CounterRng rng(seed, stream_id(StreamPurpose::Sampling, 0));
  return sample_uniform(GridShape(N, d), M, rng);
}

/// y = field|_X + eta with Gaussian eta rescaled to ||eta||_2 = sigma ||field||_2;
/// tau is set to that norm.
inline SampleSet observe(const GridField& field, std::vector<std::size_t> indices, double sigma, CounterRng& rng) {
  require(std::isfinite(sigma) && sigma >= 0.0, ErrorKind::InvalidArgument, "noise level sigma must be >= 0");
  std::vector<double> values(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] < field.size(), ErrorKind::InvalidArgument, "sample index outside the grid");
    values[i] = field[indices[i]];
  }
  double tau = 0.0;
  if (sigma > 0.0 && !indices.empty()) {
    std::vector<double> noise(indices.size());
    for (double& e : noise) e = rng.gaussian();
    const double raw = l2_norm(noise);
    tau = sigma * grid_l2_norm(field);
    const double scale = raw > 0.0 ? tau / raw : 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += scale * noise[i];
  }
  return {field.shape(), std::move(indices), std::move(values), tau};
}

inline SampleSet observe(const GridField& field, std::vector<std::size_t> indices, double sigma, std::uint64_t seed) {
  CounterRng rng(seed, stream_id(StreamPurpose::Noise, 0));
  return observe(field, std::move(indices), sigma, rng);
}

/// Default step scale relative to max |A* y| sqrt(D) / M.
inline constexpr double kDefaultStepScale = 0.064;
/// Step continuation: stall test period (iterations), shrink factor, and the
/// floor relative to the initial step.
inline constexpr int kStallWindow = 100;
inline constexpr double kStepShrink = 0.2;
inline constexpr double kStepFloor = 1e-6;

struct SolverConfig {
  int max_iters = 20000;
  /// Threshold step; <= 0 picks kDefaultStepScale * max|A* y| * sqrt(D) / M.
  double step = 0.0;
  /// Over-relaxation in (0, 2); 1 is plain Douglas-Rachford.
  double relaxation = 1.6;
  double tol_feas = 1e-7;
  double tol_obj = 1e-7;
  /// Certificate evaluation period, in iterations.
  int check_every = 10;

  void validate() const {
    require(max_iters >= 1, ErrorKind::BadParams, "max_iters must be >= 1");
    require(relaxation > 0.0 && relaxation < 2.0, ErrorKind::BadParams, "relaxation must lie in (0, 2)");
    require(tol_feas > 0.0 && tol_obj > 0.0, ErrorKind::BadParams, "tolerances must be positive");
    require(check_every >= 1, ErrorKind::BadParams, "check_every must be >= 1");
    require(std::isfinite(step), ErrorKind::BadParams, "step must be finite");
  }
};

struct RecoveryResult {
  GridField estimate;
  double objective = 0.0;             // ||dft(estimate)||_1
  double feasibility_residual = 0.0;  // max(0, ||P_X q - y||_2 - tau)
  double lower_bound = 0.0;           // certified lower bound on the optimum
  double duality_gap = 0.0;
  double imag_residue = 0.0;          // discarded imaginary part, relative
  int iterations = 0;
  bool converged = false;
};

inline double feasibility_residual(const GridField& q, const SampleSet& samples) {
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = q[samples.indices()[i]] - samples.values()[i];
    s += r * r;
  }
  return std::max(0.0, std::sqrt(s) - samples.tau());
}

inline RecoveryResult recover_l1(const SampleSet& samples, const SolverConfig& config = {}) {
  config.validate();
  const GridShape shape = samples.shape();
  const std::size_t D = shape.size();
  const std::size_t M = samples.size();
  const auto& X = samples.indices();
  const auto& y = samples.values();
  const double tau = samples.tau();
  const double y_norm = l2_norm(y);
  const double alpha = config.relaxation;

  // ADMM form of the splitting: x = P(w - u), w = soft(x^ + u, gamma),
  // u += x^ - w, with x^ the relaxed x. z = w - u is the DR variable.
  GridFft fft(shape);
  std::vector<Complex> w(D), u(D), z(D), x(D), q(D);
  std::vector<Complex> corr(M);
  for (std::size_t i = 0; i < M; ++i) w[X[i]] = y[i];
  fft.forward_unitary(w);
  double back_inf = 0.0;
  for (const Complex& c : w) back_inf = std::max(back_inf, std::abs(c));
  // A* y ~ (M / D) hat h, so the default step is max |hat h| / sqrt(D) up to a
  // constant: large grids start with a finer threshold than small ones.
  double gamma = config.step > 0.0
                     ? config.step
                     : kDefaultStepScale * back_inf * std::sqrt(static_cast<double>(D)) / static_cast<double>(M);
  if (!(gamma > 0.0)) gamma = 1.0;

  const double gamma_floor = gamma * kStepFloor;
  int stall_check = 0;
  double stall_l1 = 0.0;
  double stall_gap = std::numeric_limits<double>::infinity();
  int iter = 0;
  bool converged = false;
  double gap = std::numeric_limits<double>::infinity();
  double lower = 0.0;
  double imag2 = 0.0;
  while (true) {
    for (std::size_t i = 0; i < D; ++i) z[i] = w[i] - u[i];
    q = z;
    fft.inverse_unitary(q);
    // Real fields and the data ball constrain separate coordinates, so
    // dropping Im q first keeps the projection exact.
    imag2 = 0.0;
    for (Complex& c : q) {
      imag2 += c.imag() * c.imag();
      c = c.real();
    }
    double rn2 = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      corr[i] = q[X[i]] - y[i];
      rn2 += std::norm(corr[i]);
    }
    const double rn = std::sqrt(rn2);
    const double shrink = rn > tau ? 1.0 - tau / rn : 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      corr[i] *= shrink;
      q[X[i]] -= corr[i];
    }
    x = q;
    fft.forward_unitary(x);

    const bool check = (iter % config.check_every == 0) || iter == config.max_iters;
    if (check) {
      // Dual point v = -corr / gamma. x - z is A* v gamma plus an
      // anti-Hermitian part, so max |x - z| / gamma >= ||A* v||_inf, and v
      // scaled by it certifies opt >= <v, y> - tau ||v||.
      const double x_l1 = l1_norm(x);
      double g_inf = 0.0;
      for (std::size_t i = 0; i < D; ++i) g_inf = std::max(g_inf, std::abs(x[i] - z[i]));
      const double s = std::max(1.0, g_inf / gamma);
      double vy = 0.0, vn2 = 0.0;
      for (std::size_t i = 0; i < M; ++i) {
        const Complex v = -corr[i] / gamma;
        vy += v.real() * y[i];
        vn2 += std::norm(v);
      }
      lower = (vy - tau * std::sqrt(vn2)) / s;
      gap = x_l1 - lower;
      const double denom = std::max({x_l1, 1e-12 * y_norm, std::numeric_limits<double>::min()});
      if (gap <= config.tol_obj * denom) {
        converged = true;
        break;
      }
      if (!std::isfinite(gap) || iter >= config.max_iters) break;
      // Small coefficients enter the support at a rate ~ |c| / gamma. When the
      // gap stalls while the objective is frozen, shrink gamma and rescale u
      // so the scaled dual u / gamma is unchanged.
      if (iter >= stall_check + kStallWindow) {
        const double moved = std::abs(x_l1 - stall_l1);
        if (gap > 0.5 * stall_gap && moved <= 1e-4 * gap && gamma * kStepShrink >= gamma_floor) {
          gamma *= kStepShrink;
          for (Complex& c : u) c *= kStepShrink;
        }
        stall_check = iter;
        stall_gap = gap;
        stall_l1 = x_l1;
      }
    }

    for (std::size_t i = 0; i < D; ++i) {
      const Complex xr = alpha * x[i] + (1.0 - alpha) * w[i];
      const Complex v = xr + u[i];
      const double mag = std::abs(v);
      w[i] = mag > gamma ? v * (1.0 - gamma / mag) : Complex{};
      u[i] = v - w[i];
    }
    ++iter;
  }

  std::vector<double> est(D);
  double real2 = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    est[i] = q[i].real();
    real2 += est[i] * est[i];
  }
  RecoveryResult result{GridField(shape, std::move(est))};
  result.objective = l1_norm(dft(result.estimate).coeffs());
  result.feasibility_residual = feasibility_residual(result.estimate, samples);
  result.lower_bound = lower;
  result.duality_gap = gap;
  result.imag_residue = real2 > 0.0 ? std::sqrt(imag2 / real2) : std::sqrt(imag2);
  result.iterations = iter;
  result.converged = converged && result.feasibility_residual <= config.tol_feas * (1.0 + y_norm);
  return result;
}

/// ||estimate - truth||_2 / ||truth||_2 on the grid.
inline double rel_err(const GridField& estimate, const GridField& truth) {
  require(estimate.shape() == truth.shape(), ErrorKind::InvalidArgument, "estimate and truth grids differ");
  const double tn = grid_l2_norm(truth);
  require(tn > 0.0, ErrorKind::ZeroTruth, "relative error against the zero field");
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double r = estimate[i] - truth[i];
    s += r * r;
  }
  return std::sqrt(s) / tn;
}

inline constexpr double kDefaultSuccessThreshold = 0.05;

inline bool is_success(const GridField& estimate, const GridField& truth, double threshold = kDefaultSuccessThreshold) {
  return rel_err(estimate, truth) <= threshold;
}

}  // namespace pdefr

#endif  // PDEFR_RECOVERY_HPP
