#ifndef PDEFR_IO_HPP
#define PDEFR_IO_HPP

// File formats.
//
//   SPFD  binary grid data: "SPFD", u32 version, u32 d, u32 N, u8 kind
//         (0 real, 1 complex), then little-endian f64 values in row-major
//         order (re, im interleaved for complex).
//   SPTP  text trig polynomial: header "SPTP d", then "k1 .. kd re im" lines.
//   samples CSV: header "x1,...,xd,value", one observed point per row.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pdefr/fields.hpp"
#include "pdefr/grid.hpp"
#include "pdefr/recovery.hpp"

namespace pdefr {

inline constexpr std::uint32_t kSpfdVersion = 1;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline void put_f64(std::string& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

class ByteReader {
 public:
  ByteReader(const std::string& bytes, std::string path) : bytes_(bytes), path_(std::move(path)) {}

  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += width;
    return v;
  }
  double f64() { return std::bit_cast<double>(uint(8)); }
  std::string raw(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) fail(ErrorKind::Io, path_ + ": truncated SPFD file");
  }

  const std::string& bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(ErrorKind::Io, path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& data, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) fail(ErrorKind::Io, path + ": cannot open for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorKind::Io, path + ": write failed");
}

inline std::string spfd_header(const GridShape& shape, std::uint8_t kind) {
  std::string out = "SPFD";
  put_u32(out, kSpfdVersion);
  put_u32(out, static_cast<std::uint32_t>(shape.d));
  put_u32(out, static_cast<std::uint32_t>(shape.N));
  out.push_back(static_cast<char>(kind));
  return out;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline std::string encode_spfd(const GridField& field) {
  std::string out = detail::spfd_header(field.shape(), 0);
  for (double v : field.values()) detail::put_f64(out, v);
  return out;
}

inline std::string encode_spfd(const Spectrum& spectrum) {
  std::string out = detail::spfd_header(spectrum.shape(), 1);
  for (const Complex& c : spectrum.coeffs()) {
    detail::put_f64(out, c.real());
    detail::put_f64(out, c.imag());
  }
  return out;
}

using GridData = std::variant<GridField, Spectrum>;

inline GridData decode_spfd(const std::string& bytes, const std::string& path = "<memory>") {
  detail::ByteReader rd(bytes, path);
  if (rd.raw(4) != "SPFD") fail(ErrorKind::Io, path + ": bad magic, not an SPFD file");
  const auto version = rd.uint(4);
  if (version != kSpfdVersion) fail(ErrorKind::Io, path + ": unsupported SPFD version " + std::to_string(version));
  const auto d = rd.uint(4);
  const auto N = rd.uint(4);
  const auto kind = rd.uint(1);
  if (d < 1 || d > 3 || N < 2 || N > (1u << 20)) fail(ErrorKind::Io, path + ": bad SPFD grid header");
  if (kind <= 1 && std::pow(static_cast<double>(N), static_cast<double>(d)) * (kind + 1) * 8.0 > bytes.size())
    fail(ErrorKind::Io, path + ": truncated SPFD file");
  const GridShape shape(static_cast<int>(N), static_cast<int>(d));
  GridData result = GridField::zeros(shape);
  if (kind == 0) {
    std::vector<double> values(shape.size());
    for (double& v : values) v = rd.f64();
    result = GridField(shape, std::move(values));
  } else if (kind == 1) {
    std::vector<Complex> coeffs(shape.size());
    for (Complex& c : coeffs) {
      const double re = rd.f64();
      c = {re, rd.f64()};
    }
    result = Spectrum(shape, std::move(coeffs));
  } else {
    fail(ErrorKind::Io, path + ": unknown SPFD kind " + std::to_string(kind));
  }
  if (!rd.done()) fail(ErrorKind::Io, path + ": trailing bytes after SPFD payload");
  return result;
}

inline void write_spfd(const std::string& path, const GridField& field) {
  detail::write_file(path, encode_spfd(field), true);
}

inline void write_spfd(const std::string& path, const Spectrum& spectrum) {
  detail::write_file(path, encode_spfd(spectrum), true);
}

inline GridData read_spfd(const std::string& path) { return decode_spfd(detail::read_file(path, true), path); }

inline GridField read_spfd_field(const std::string& path) {
  GridData data = read_spfd(path);
  if (auto* f = std::get_if<GridField>(&data)) return std::move(*f);
  fail(ErrorKind::Io, path + ": expected a real field, found a spectrum");
}

// ---------------------------------------------------------------------------

inline std::string encode_sptp(const TrigPolynomial& f) {
  std::string out = "SPTP " + std::to_string(f.d()) + "\n";
  for (const auto& [k, a] : f.terms()) {
    for (int j = 0; j < f.d(); ++j) out += std::to_string(k[j]) + " ";
    out += detail::format_double(a.real()) + " " + detail::format_double(a.imag()) + "\n";
  }
  return out;
}

inline TrigPolynomial decode_sptp(const std::string& text, const std::string& path = "<memory>") {
  std::istringstream in(text);
  std::string magic;
  int d = 0;
  if (!(in >> magic >> d) || magic != "SPTP" || d < 1 || d > 3) fail(ErrorKind::Io, path + ": bad SPTP header");
  TrigPolynomial::Terms terms;
  std::string line;
  std::getline(in, line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    IntVec k{0, 0, 0};
    double re = 0.0, im = 0.0;
    for (int j = 0; j < d; ++j) {
      if (!(ls >> k[j])) fail(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": bad frequency");
    }
    if (!(ls >> re >> im)) fail(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": bad coefficient");
    if (!terms.emplace(k, Complex{re, im}).second)
      fail(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": duplicate frequency");
  }
  return {d, std::move(terms)};
}

inline void write_sptp(const std::string& path, const TrigPolynomial& f) {
  detail::write_file(path, encode_sptp(f), false);
}

inline TrigPolynomial read_sptp(const std::string& path) { return decode_sptp(detail::read_file(path, false), path); }

// ---------------------------------------------------------------------------

/// Observed points as grid coordinates and values. Rows may come in any order.
struct SampleTable {
  GridShape shape;
  std::vector<std::size_t> indices;
  std::vector<double> values;
};

inline std::string encode_samples_csv(const GridShape& shape, std::span<const std::size_t> indices,
                                      std::span<const double> values) {
  require(indices.size() == values.size(), ErrorKind::InvalidArgument, "indices and values differ in length");
  std::string out;
  for (int j = 0; j < shape.d; ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "value\n";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const IntVec x = shape.unflatten(indices[i]);
    for (int j = 0; j < shape.d; ++j) out += std::to_string(x[j]) + ",";
    out += detail::format_double(values[i]) + "\n";
  }
  return out;
}

inline std::string encode_samples_csv(const SampleSet& samples) {
  return encode_samples_csv(samples.shape(), samples.indices(), samples.values());
}

/// Parses the samples CSV for a grid of side N. The dimension comes from the header.
inline SampleTable decode_samples_csv(const std::string& text, int N, const std::string& path = "<memory>") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Io, path + ": empty samples file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int d = 0;
  std::string expected;
  for (; d < 3; ++d) {
    if (line == expected + "value") break;
    expected += "x" + std::to_string(d + 1) + ",";
  }
  if (d < 1 || line != expected + "value") fail(ErrorKind::Io, path + ": header must be x1,...,xd,value with d in 1..3");
  SampleTable table{GridShape(N, d), {}, {}};
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    IntVec x{0, 0, 0};
    const std::string where = path + ":" + std::to_string(lineno);
    for (int j = 0; j < d; ++j) {
      if (!std::getline(ls, cell, ',')) fail(ErrorKind::Io, where + ": missing coordinate");
      try {
        std::size_t used = 0;
        x[j] = std::stoll(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::logic_error&) {
        fail(ErrorKind::Io, where + ": bad coordinate '" + cell + "'");
      }
      if (x[j] < 0 || x[j] >= N) fail(ErrorKind::Io, where + ": coordinate outside the grid");
    }
    if (!std::getline(ls, cell)) fail(ErrorKind::Io, where + ": missing value");
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      fail(ErrorKind::Io, where + ": bad value '" + cell + "'");
    }
    table.indices.push_back(table.shape.flatten(x));
    table.values.push_back(v);
  }
  return table;
}

inline SampleTable read_samples_csv(const std::string& path, int N) {
  return decode_samples_csv(detail::read_file(path, false), N, path);
}

/// Sorts rows by flat index and builds a SampleSet; duplicates are rejected.
inline SampleSet to_sample_set(SampleTable table, double tau) {
  std::vector<std::size_t> order(table.indices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return table.indices[a] < table.indices[b]; });
  std::vector<std::size_t> idx(order.size());
  std::vector<double> vals(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    idx[i] = table.indices[order[i]];
    vals[i] = table.values[order[i]];
  }
  return {table.shape, std::move(idx), std::move(vals), tau};
}

}  // namespace pdefr

#endif  // PDEFR_IO_HPP
