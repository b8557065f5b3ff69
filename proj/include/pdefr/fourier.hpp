#ifndef PDEFR_FOURIER_HPP
#define PDEFR_FOURIER_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "pdefr/fft.hpp"
#include "pdefr/grid.hpp"

namespace pdefr {

/// Unitary DFT: hat h(m) = N^(-d/2) sum_x exp(-2 pi i x.m / N) h(x).
inline Spectrum dft(const GridField& field) {
  std::vector<Complex> data(field.values().begin(), field.values().end());
  GridFft fft(field.shape());
  fft.forward_unitary(data);
  return {field.shape(), std::move(data)};
}

inline double l1_norm(std::span<const Complex> v) noexcept {
  double s = 0.0;
  for (const Complex& c : v) s += std::abs(c);
  return s;
}

inline double l2_norm(std::span<const Complex> v) noexcept {
  double s = 0.0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

inline double l2_norm(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// ||s[m] - conj(s[-m])||_2, zero exactly when the spectrum comes from a real field.
inline double hermitian_defect(const Spectrum& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += std::norm(s[i] - std::conj(s[s.shape().negate(i)]));
  return std::sqrt(acc);
}

/// Inverse of `dft` for spectra of real fields. The imaginary residue of the
/// inverse transform is discarded.
inline GridField idft(const Spectrum& spectrum) {
  const double norm = l2_norm(spectrum.coeffs());
  if (hermitian_defect(spectrum) > 1e-8 * norm) {
    fail(ErrorKind::NonHermitianSpectrum, "spectrum is not Hermitian-symmetric; cannot form a real field");
  }
  std::vector<Complex> data = spectrum.coeffs();
  GridFft fft(spectrum.shape());
  fft.inverse_unitary(data);
  std::vector<double> values(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) values[i] = data[i].real();
  return {spectrum.shape(), std::move(values)};
}

inline double grid_l2_norm(const GridField& field) noexcept { return l2_norm(field.values()); }

/// (|X|^-1 sum_{x in X} |h(x)|^2)^(1/2) over flat indices X.
inline double empirical_norm(const GridField& field, std::span<const std::size_t> indices) {
  require(!indices.empty(), ErrorKind::EmptySampleSet, "empirical norm needs at least one sample");
  double s = 0.0;
  for (std::size_t i : indices) {
    require(i < field.size(), ErrorKind::InvalidArgument, "sample index outside the grid");
    s += field[i] * field[i];
  }
  return std::sqrt(s / static_cast<double>(indices.size()));
}

/// ||s||_1 / ||s||_2, with the zero spectrum mapped to 0.
inline double fourier_ratio(const Spectrum& spectrum) noexcept {
  const double l2 = l2_norm(spectrum.coeffs());
  if (l2 == 0.0) return 0.0;
  return l1_norm(spectrum.coeffs()) / l2;
}

inline double fourier_ratio(const GridField& field) { return fourier_ratio(dft(field)); }

}  // namespace pdefr

#endif  // PDEFR_FOURIER_HPP
