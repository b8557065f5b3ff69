#ifndef PDEFR_ERROR_HPP
#define PDEFR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pdefr {

enum class ErrorKind {
  InvalidArgument,
  NonHermitianSpectrum,
  EmptySampleSet,
  BadExponent,
  WaveDimensionMismatch,
  ZeroField,
  DegenerateSnapshot,
  BadParams,
  BadCardinality,
  ZeroTruth,
  Io,
  Config,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonHermitianSpectrum: return "NonHermitianSpectrum";
    case ErrorKind::EmptySampleSet: return "EmptySampleSet";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::WaveDimensionMismatch: return "WaveDimensionMismatch";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::DegenerateSnapshot: return "DegenerateSnapshot";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::BadCardinality: return "BadCardinality";
    case ErrorKind::ZeroTruth: return "ZeroTruth";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

/// All library failures are reported through this type; `kind()` is stable
/// and is what tests and the CLI dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace pdefr

#endif  // PDEFR_ERROR_HPP
