#ifndef PDEFR_FFT_HPP
#define PDEFR_FFT_HPP

// Unnormalized complex FFTs on cubic grids. Power-of-two lengths use an
// iterative radix-2 kernel; every other length goes through Bluestein's
// chirp-z reformulation on a padded power-of-two transform. Plans hold only
// immutable tables; scratch lives in GridFft, one per thread.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "pdefr/grid.hpp"

namespace pdefr {

enum class FftDirection { Forward = -1, Inverse = +1 };

namespace detail {

inline bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

class Radix2Plan {
 public:
  Radix2Plan() = default;
  explicit Radix2Plan(std::size_t n) : n_(n), twiddle_(n / 2), bitrev_(n) {
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddle_[k] = {std::cos(angle), std::sin(angle)};
    }
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev_[i] = r;
    }
  }

  std::size_t size() const noexcept { return n_; }

  /// Transforms `count` interleaved sequences at once: element k of
  /// sequence s sits at a[k * count + s]. Butterflies sweep contiguous rows.
  void run_batch(Complex* a, std::size_t count, FftDirection dir) const noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t r = bitrev_[i];
      if (r > i) std::swap_ranges(a + i * count, a + (i + 1) * count, a + r * count);
    }
    const double sign = dir == FftDirection::Forward ? 1.0 : -1.0;
    double* raw = reinterpret_cast<double*>(a);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n_ / len;
      for (std::size_t i = 0; i < n_; i += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const double wr = twiddle_[j * step].real();
          const double wi = sign * twiddle_[j * step].imag();
          double* u = raw + 2 * (i + j) * count;
          double* v = raw + 2 * (i + j + half) * count;
          for (std::size_t c = 0; c < 2 * count; c += 2) {
            const double vr = v[c] * wr - v[c + 1] * wi;
            const double vi = v[c] * wi + v[c + 1] * wr;
            v[c] = u[c] - vr;
            v[c + 1] = u[c + 1] - vi;
            u[c] += vr;
            u[c + 1] += vi;
          }
        }
      }
    }
  }

  void run(Complex* a, FftDirection dir) const noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t r = bitrev_[i];
      if (r > i) std::swap(a[i], a[r]);
    }
    const double sign = dir == FftDirection::Forward ? 1.0 : -1.0;
    double* raw = reinterpret_cast<double*>(a);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n_ / len;
      for (std::size_t i = 0; i < n_; i += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const double wr = twiddle_[j * step].real();
          const double wi = sign * twiddle_[j * step].imag();
          double* u = raw + 2 * (i + j);
          double* v = raw + 2 * (i + j + half);
          const double vr = v[0] * wr - v[1] * wi;
          const double vi = v[0] * wi + v[1] * wr;
          v[0] = u[0] - vr;
          v[1] = u[1] - vi;
          u[0] += vr;
          u[1] += vi;
        }
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<Complex> twiddle_;
  std::vector<std::size_t> bitrev_;
};

}  // namespace detail

/// One-dimensional transform of fixed length.
class Fft1d {
 public:
  explicit Fft1d(std::size_t n) : n_(n) {
    require(n >= 1, ErrorKind::InvalidArgument, "FFT length must be positive");
    if (detail::is_pow2(n)) {
      radix2_ = detail::Radix2Plan(n);
      return;
    }
    const std::size_t m = detail::next_pow2(2 * n - 1);
    radix2_ = detail::Radix2Plan(m);
    chirp_.resize(n);
    const std::size_t two_n = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the phase argument small and exact.
      const std::size_t ksq = (k * k) % two_n;
      const double angle = -std::numbers::pi * static_cast<double>(ksq) / static_cast<double>(n);
      chirp_[k] = {std::cos(angle), std::sin(angle)};
    }
    filter_fwd_.assign(m, Complex{});
    filter_inv_.assign(m, Complex{});
    for (std::size_t k = 0; k < n; ++k) {
      filter_fwd_[k] = std::conj(chirp_[k]);
      filter_inv_[k] = chirp_[k];
      if (k > 0) {
        filter_fwd_[m - k] = std::conj(chirp_[k]);
        filter_inv_[m - k] = chirp_[k];
      }
    }
    radix2_.run(filter_fwd_.data(), FftDirection::Forward);
    radix2_.run(filter_inv_.data(), FftDirection::Forward);
  }

  std::size_t size() const noexcept { return n_; }
  bool is_radix2() const noexcept { return chirp_.empty(); }
  const detail::Radix2Plan& radix2() const noexcept { return radix2_; }

  /// Scratch length needed by `run`.
  std::size_t scratch_size() const noexcept { return chirp_.empty() ? 0 : radix2_.size(); }

  /// In-place unnormalized transform: sum_j a_j exp(sign 2 pi i j k / n).
  void run(Complex* a, FftDirection dir, std::vector<Complex>& scratch) const {
    if (chirp_.empty()) {
      radix2_.run(a, dir);
      return;
    }
    const std::size_t m = radix2_.size();
    scratch.assign(m, Complex{});
    const bool fwd = dir == FftDirection::Forward;
    for (std::size_t k = 0; k < n_; ++k) scratch[k] = a[k] * (fwd ? chirp_[k] : std::conj(chirp_[k]));
    radix2_.run(scratch.data(), FftDirection::Forward);
    const std::vector<Complex>& filter = fwd ? filter_fwd_ : filter_inv_;
    for (std::size_t k = 0; k < m; ++k) scratch[k] *= filter[k];
    radix2_.run(scratch.data(), FftDirection::Inverse);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n_; ++k) a[k] = scratch[k] * (fwd ? chirp_[k] : std::conj(chirp_[k])) * inv_m;
  }

 private:
  std::size_t n_;
  detail::Radix2Plan radix2_;
  std::vector<Complex> chirp_;
  std::vector<Complex> filter_fwd_;
  std::vector<Complex> filter_inv_;
};

/// Separable multi-dimensional transform on a GridShape. Not thread-safe
/// (owns scratch); construct one per thread.
class GridFft {
 public:
  explicit GridFft(GridShape shape) : shape_(shape), plan_(static_cast<std::size_t>(shape.N)) {}

  const GridShape& shape() const noexcept { return shape_; }

  void run(std::vector<Complex>& data, FftDirection dir) {
    const std::size_t n = static_cast<std::size_t>(shape_.N);
    const std::size_t total = shape_.size();
    line_.resize(n);
    for (int axis = shape_.d - 1; axis >= 0; --axis) {
      std::size_t stride = 1;
      for (int j = axis + 1; j < shape_.d; ++j) stride *= n;
      const std::size_t block = stride * n;
      for (std::size_t outer = 0; outer < total; outer += block) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
          Complex* base = data.data() + outer + inner;
          if (stride > 1 && plan_.is_radix2()) {
            plan_.radix2().run_batch(base, stride, dir);
            break;
          }
          if (stride == 1) {
            plan_.run(base, dir, scratch_);
            continue;
          }
          for (std::size_t k = 0; k < n; ++k) line_[k] = base[k * stride];
          plan_.run(line_.data(), dir, scratch_);
          for (std::size_t k = 0; k < n; ++k) base[k * stride] = line_[k];
        }
      }
    }
  }

  /// Unitary forward transform: scale by N^(-d/2).
  void forward_unitary(std::vector<Complex>& data) { scaled(data, FftDirection::Forward); }
  void inverse_unitary(std::vector<Complex>& data) { scaled(data, FftDirection::Inverse); }

 private:
  void scaled(std::vector<Complex>& data, FftDirection dir) {
    run(data, dir);
    const double s = 1.0 / shape_.sqrt_size();
    for (Complex& c : data) c *= s;
  }

  GridShape shape_;
  Fft1d plan_;
  std::vector<Complex> line_;
  std::vector<Complex> scratch_;
};

}  // namespace pdefr

#endif  // PDEFR_FFT_HPP
