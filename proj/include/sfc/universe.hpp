#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sfc {

/// Integer code on a universe of discourse.
using Code = std::uint32_t;

/// Finite universe of discourse: the codes {0, 1, ..., 2^bits - 1}.
///
/// Widths are desk-scale by design (exact composition tables are built over
/// |U|^3 in the verification layer).
class Universe {
 public:
  static constexpr int kMinBits = 2;
  static constexpr int kMaxBits = 16;

  explicit Universe(int bits) : bits_(bits) {
    if (bits < kMinBits || bits > kMaxBits) {
      throw std::invalid_argument("universe bits must be in [" +
                                  std::to_string(kMinBits) + ", " +
                                  std::to_string(kMaxBits) + "], got " +
                                  std::to_string(bits));
    }
  }

  int bits() const { return bits_; }
  std::size_t size() const { return std::size_t{1} << bits_; }
  Code max_code() const { return static_cast<Code>(size() - 1); }
  double span() const { return static_cast<double>(max_code()); }

  bool contains(Code c) const { return c <= max_code(); }

  friend bool operator==(const Universe& a, const Universe& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const Universe& a, const Universe& b) {
    return !(a == b);
  }

 private:
  int bits_;
};

}  // namespace sfc
