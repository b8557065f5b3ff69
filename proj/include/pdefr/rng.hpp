#ifndef PDEFR_RNG_HPP
#define PDEFR_RNG_HPP

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// Every draw is a pure function of (seed, stream, counter), so a family of
// random objects can be regenerated bit-for-bit on any platform and
// independent consumers never share state. Streams are 64-bit ids; use
// `stream_id` to derive them from a purpose tag and an index.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace pdefr {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Purpose tags for stream ids. The high 32 bits of a stream id carry the
/// purpose, the low 32 bits an index (trial number, bump number, ...).
enum class StreamPurpose : std::uint32_t {
  FamilyCoefficients = 1,
  FamilyGeometry = 2,
  Sampling = 3,
  Noise = 4,
  Test = 0xFFFF,
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint32_t index) noexcept {
  return (std::uint64_t{static_cast<std::uint32_t>(purpose)} << 32) | index;
}

/// A sequential view of one (seed, stream) pair. Satisfies
/// std::uniform_random_bit_generator, but prefer the member helpers: the
/// standard distributions are not reproducible across library vendors.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Random-access draw: the two 64-bit words of block `counter`.
  constexpr std::array<std::uint64_t, 2> at(std::uint64_t counter) const noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(counter),
                                  static_cast<std::uint32_t>(counter >> 32),
                                  static_cast<std::uint32_t>(stream_),
                                  static_cast<std::uint32_t>(stream_ >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                              static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    return {(std::uint64_t{out[1]} << 32) | out[0], (std::uint64_t{out[3]} << 32) | out[2]};
  }

  constexpr result_type operator()() noexcept {
    if (!have_spare_) {
      const auto words = at(counter_++);
      spare_ = words[1];
      have_spare_ = true;
      return words[0];
    }
    have_spare_ = false;
    return spare_;
  }

  /// Uniform on (0, 1); never returns 0 so it is safe under log().
  double uniform01() noexcept { return to_open_unit((*this)()); }

  double gaussian() noexcept {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return box_muller(u1, u2);
  }

  /// Uniform integer in [0, n) by rejection; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - (max() % n + 1) % n;
    std::uint64_t draw = (*this)();
    while (draw > limit) draw = (*this)();
    return draw % n;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  static constexpr double to_open_unit(std::uint64_t word) noexcept {
    // The top word would round up to exactly 1.
    const double u = (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
    return u < 1.0 ? u : 0x1.fffffffffffffp-1;
  }

  static double box_muller(double u1, double u2) noexcept {
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace pdefr

#endif  // PDEFR_RNG_HPP
