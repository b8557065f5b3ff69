#ifndef PDEFR_GRID_HPP
#define PDEFR_GRID_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pdefr/error.hpp"

namespace pdefr {

using Complex = std::complex<double>;

/// Integer vector with up to three components; entries past `d` are zero.
using IntVec = std::array<std::int64_t, 3>;

/// Cubic periodic grid Z_N^d with d in {1, 2, 3}. Flat storage is row-major:
/// x <-> sum_j x_j N^(d-1-j).
struct GridShape {
  int N = 2;
  int d = 1;

  GridShape() = default;
  GridShape(int side, int dim) : N(side), d(dim) {
    require(side >= 2, ErrorKind::InvalidArgument, "grid side N must be >= 2, got " + std::to_string(side));
    require(dim >= 1 && dim <= 3, ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }

  std::size_t size() const noexcept {
    std::size_t n = 1;
    for (int j = 0; j < d; ++j) n *= static_cast<std::size_t>(N);
    return n;
  }

  /// N^(d/2), the unitary DFT scale.
  double sqrt_size() const noexcept { return std::pow(static_cast<double>(N), 0.5 * d); }

  std::size_t flatten(const IntVec& coords) const noexcept {
    std::size_t flat = 0;
    for (int j = 0; j < d; ++j) flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(coords[j]);
    return flat;
  }

  IntVec unflatten(std::size_t flat) const noexcept {
    IntVec coords{0, 0, 0};
    for (int j = d - 1; j >= 0; --j) {
      coords[j] = static_cast<std::int64_t>(flat % static_cast<std::size_t>(N));
      flat /= static_cast<std::size_t>(N);
    }
    return coords;
  }

  /// Reduce an arbitrary integer vector mod N into [0, N)^d.
  IntVec reduce(const IntVec& k) const noexcept {
    IntVec out{0, 0, 0};
    for (int j = 0; j < d; ++j) {
      const std::int64_t r = k[j] % N;
      out[j] = r < 0 ? r + N : r;
    }
    return out;
  }

  /// Flat index of -x mod N.
  std::size_t negate(std::size_t flat) const noexcept {
    IntVec c = unflatten(flat);
    for (int j = 0; j < d; ++j) c[j] = (N - c[j]) % N;
    return flatten(c);
  }

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Wrapped coordinate of a residue m in [0, N): the representative in
/// {-floor(N/2), ..., floor((N-1)/2)}. For even N, N/2 maps to -N/2.
inline std::int64_t wrap_coordinate(std::int64_t m, int N) noexcept {
  const std::int64_t hi = (N - 1) / 2;
  std::int64_t r = m % N;
  if (r < 0) r += N;
  return r > hi ? r - N : r;
}

/// A point of Z_N^d, validated on construction.
class GridIndex {
 public:
  GridIndex(GridShape shape, IntVec coords) : shape_(shape), coords_(coords) {
    for (int j = 0; j < shape.d; ++j) {
      require(coords[j] >= 0 && coords[j] < shape.N, ErrorKind::InvalidArgument,
              "grid coordinate out of range [0, N)");
    }
    for (int j = shape.d; j < 3; ++j) coords_[j] = 0;
  }

  static GridIndex from_flat(GridShape shape, std::size_t flat) { return {shape, shape.unflatten(flat)}; }

  const GridShape& shape() const noexcept { return shape_; }
  const IntVec& coords() const noexcept { return coords_; }
  std::size_t flat() const noexcept { return shape_.flatten(coords_); }

 private:
  GridShape shape_;
  IntVec coords_;
};

inline IntVec wrapped_representative(const GridIndex& m) {
  IntVec out{0, 0, 0};
  for (int j = 0; j < m.shape().d; ++j) out[j] = wrap_coordinate(m.coords()[j], m.shape().N);
  return out;
}

/// Squared wrapped magnitude for a flat index, integer-exact.
inline std::int64_t wrapped_magnitude_sq(const GridShape& shape, std::size_t flat) noexcept {
  std::int64_t s = 0;
  for (int j = shape.d - 1; j >= 0; --j) {
    const std::int64_t w = wrap_coordinate(static_cast<std::int64_t>(flat % static_cast<std::size_t>(shape.N)), shape.N);
    s += w * w;
    flat /= static_cast<std::size_t>(shape.N);
  }
  return s;
}

inline double wrapped_magnitude(const GridIndex& m) {
  return std::sqrt(static_cast<double>(wrapped_magnitude_sq(m.shape(), m.flat())));
}

/// Real-valued function on Z_N^d.
class GridField {
 public:
  GridField(GridShape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    require(values_.size() == shape_.size(), ErrorKind::InvalidArgument,
            "field has " + std::to_string(values_.size()) + " values, grid needs " + std::to_string(shape_.size()));
    for (double v : values_) require(std::isfinite(v), ErrorKind::InvalidArgument, "field value is not finite");
  }

  static GridField zeros(GridShape shape) { return {shape, std::vector<double>(shape.size(), 0.0)}; }

  const GridShape& shape() const noexcept { return shape_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  GridShape shape_;
  std::vector<double> values_;
};

/// Complex DFT coefficients on Z_N^d, indexed by the same flat layout.
class Spectrum {
 public:
  Spectrum(GridShape shape, std::vector<Complex> coeffs) : shape_(shape), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == shape_.size(), ErrorKind::InvalidArgument,
            "spectrum has " + std::to_string(coeffs_.size()) + " coefficients, grid needs " +
                std::to_string(shape_.size()));
    for (const Complex& c : coeffs_) {
      require(std::isfinite(c.real()) && std::isfinite(c.imag()), ErrorKind::InvalidArgument,
              "spectrum coefficient is not finite");
    }
  }

  static Spectrum zeros(GridShape shape) { return {shape, std::vector<Complex>(shape.size())}; }

  const GridShape& shape() const noexcept { return shape_; }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

 private:
  GridShape shape_;
  std::vector<Complex> coeffs_;
};

}  // namespace pdefr

#endif  // PDEFR_GRID_HPP
