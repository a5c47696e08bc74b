#pragma once

#include <bit>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sfc/errors.hpp"

namespace sfc {

/// Fibonacci (external-XOR) linear-feedback shift register.
///
/// Tap convention: the tap set lists the nonzero exponents of the feedback
/// polynomial, constant term implied. {16, 14, 13, 11} means
/// x^16 + x^14 + x^13 + x^11 + 1. Tap t reads state bit (width - t), the
/// register shifts toward bit 0, and the bit shifted out of position 0 is
/// the output bit. With a primitive polynomial the state walks every nonzero
/// value once per period 2^width - 1; the all-zero lockup state is
/// unreachable because seeding forbids it and the update preserves
/// non-zeroness.
class Lfsr {
 public:
  Lfsr(int width, const std::set<int>& taps, std::uint32_t seed)
      : width_(width), taps_(taps), state_(seed) {
    if (width < 1 || width > 24) {
      throw std::invalid_argument("register width must be in [1, 24], got " +
                                  std::to_string(width));
    }
    if (taps.empty() || *taps.rbegin() != width || *taps.begin() < 1) {
      throw std::invalid_argument(
          "tap set must be within [1, width] and include the degree term");
    }
    if (seed == 0) {
      // The starting logic exists precisely to keep the register out of the
      // all-zero lockup state.
      throw ZeroSeedError("seed 0 is the shift-register lockup state");
    }
    if (seed >= (std::uint32_t{1} << width)) {
      throw std::invalid_argument("seed does not fit in " +
                                  std::to_string(width) + " bits");
    }
    tap_mask_ = 0;
    for (int t : taps) tap_mask_ |= std::uint32_t{1} << (width - t);
  }

  int width() const { return width_; }
  const std::set<int>& taps() const { return taps_; }
  std::uint32_t state() const { return state_; }
  std::uint64_t period_if_maximal() const {
    return (std::uint64_t{1} << width_) - 1;
  }

  /// One serial clock: returns the bit shifted out of the register.
  std::uint32_t step() {
    const std::uint32_t out = state_ & 1u;
    const std::uint32_t fb =
        static_cast<std::uint32_t>(std::popcount(state_ & tap_mask_)) & 1u;
    state_ = (state_ >> 1) | (fb << (width_ - 1));
    return out;
  }

  /// Assembles k serial output bits into a word, first bit out = MSB.
  /// Words are non-overlapping: each call consumes exactly k clocks.
  std::uint32_t word(int k) {
    if (k < 1 || k > width_) {
      throw std::invalid_argument("word width must be in [1, register width]");
    }
    std::uint32_t w = 0;
    for (int i = 0; i < k; ++i) w = (w << 1) | step();
    return w;
  }

 private:
  int width_;
  std::set<int> taps_;
  std::uint32_t tap_mask_;
  std::uint32_t state_;
};

/// Default maximal-length feedback polynomial, x^16 + x^14 + x^13 + x^11 + 1.
inline const std::set<int>& default_taps() {
  static const std::set<int> taps{16, 14, 13, 11};
  return taps;
}
constexpr int kDefaultLfsrWidth = 16;

/// Builds a validated register. Kept as a named function so the seeding
/// contract (nonzero, in range, deterministic thereafter) has one home.
inline Lfsr lfsr_seed(int width, const std::set<int>& taps,
                      std::uint32_t seed) {
  return Lfsr(width, taps, seed);
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministic per-stream seed derivation. Grid points, replicas and
/// independent-mode channels each get their own stream index, so results do
/// not depend on execution order. The result is never zero.
inline std::uint32_t derive_seed(std::uint64_t base_seed,
                                 std::uint64_t stream_index, int width) {
  const std::uint64_t mixed =
      detail::splitmix64(base_seed ^ detail::splitmix64(stream_index));
  const std::uint64_t nonzero_states = (std::uint64_t{1} << width) - 1;
  return static_cast<std::uint32_t>(mixed % nonzero_states) + 1u;
}

}  // namespace sfc
