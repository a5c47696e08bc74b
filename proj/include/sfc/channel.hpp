#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <variant>

#include "sfc/errors.hpp"
#include "sfc/lfsr.hpp"
#include "sfc/membership.hpp"
#include "sfc/universe.hpp"

namespace sfc {

/// One adder/delay pair plus shift constant: produces u1 + u2 + shift with
/// u1, u2 consecutive k-bit register words. Its exact law is the discrete
/// triangle make_triangular_pdf(shift, 2^k - 1).
struct TriangularChannel {
  int bit_width;       // k, uniform word width; k >= 1
  Code shift;          // additive offset placing the triangle
  std::string label;   // membership name this channel realizes

  TriangularChannel(int k, Code shift_, std::string label_ = {})
      : bit_width(k), shift(shift_), label(std::move(label_)) {
    if (k < 1 || k > 12) {
      throw std::invalid_argument(
          "triangular channel word width must be in [1, 12], got " +
          std::to_string(k));
    }
  }

  std::uint32_t half_width() const {
    return (std::uint32_t{1} << bit_width) - 1;
  }
  Code min_sample() const { return shift; }
  Code max_sample() const { return shift + 2 * half_width(); }
};

/// Degenerate channel: emits a constant code and consumes no register words.
/// Realizes point-mass memberships, which a k >= 1 triangle cannot.
struct SingletonChannel {
  Code value;
  std::string label;

  explicit SingletonChannel(Code value_, std::string label_ = {})
      : value(value_), label(std::move(label_)) {}
};

using Channel = std::variant<TriangularChannel, SingletonChannel>;

inline Code channel_min(const Channel& ch) {
  return std::holds_alternative<TriangularChannel>(ch)
             ? std::get<TriangularChannel>(ch).min_sample()
             : std::get<SingletonChannel>(ch).value;
}

inline Code channel_max(const Channel& ch) {
  return std::holds_alternative<TriangularChannel>(ch)
             ? std::get<TriangularChannel>(ch).max_sample()
             : std::get<SingletonChannel>(ch).value;
}

inline const std::string& channel_label(const Channel& ch) {
  return std::visit([](const auto& c) -> const std::string& { return c.label; },
                    ch);
}

/// Throws SupportOverflowError if the channel can emit codes outside the
/// universe.
inline void validate_channel(const Channel& ch, const Universe& universe) {
  if (channel_max(ch) > universe.max_code()) {
    throw SupportOverflowError(
        "channel '" + channel_label(ch) + "' emits up to " +
        std::to_string(channel_max(ch)) + ", universe max code is " +
        std::to_string(universe.max_code()));
  }
}

/// Exact law of the channel's samples on the given universe.
inline MembershipPdf channel_law(const Channel& ch, const Universe& universe) {
  if (const auto* t = std::get_if<TriangularChannel>(&ch)) {
    return make_triangular_pdf(universe, t->shift, t->half_width());
  }
  return make_point_mass(universe, std::get<SingletonChannel>(ch).value);
}

/// Two consecutive k-bit words, summed and shifted. The delay element holds
/// u1 while u2 is produced, so each sample consumes exactly 2k clocks.
inline Code triangular_sample(Lfsr& lfsr, const TriangularChannel& ch) {
  const std::uint32_t u1 = lfsr.word(ch.bit_width);
  const std::uint32_t u2 = lfsr.word(ch.bit_width);
  const Code sample = u1 + u2 + ch.shift;
  assert(sample >= ch.min_sample() && sample <= ch.max_sample());
  return sample;
}

inline Code draw_channel_sample(Lfsr& lfsr, const Channel& ch) {
  if (const auto* t = std::get_if<TriangularChannel>(&ch)) {
    return triangular_sample(lfsr, *t);
  }
  return std::get<SingletonChannel>(ch).value;
}

/// Recovers the channel whose exact law equals the given PDF: a shifted
/// triangle or a point mass. Anything else is not synthesizable by the
/// adder/shift hardware and raises std::invalid_argument.
inline Channel channel_for_pdf(const MembershipPdf& pdf,
                               const std::string& label = {}) {
  const auto [lo, hi] = pdf.support();
  if (lo == hi) {
    if (pdf.at(lo) != 1.0) {
      throw std::invalid_argument("single-code support with mass != 1");
    }
    return SingletonChannel(lo, label);
  }
  const Code width = hi - lo;
  if (width % 2 == 0) {
    const std::uint32_t half = width / 2;
    if (std::has_single_bit(half + 1)) {
      const MembershipPdf candidate =
          make_triangular_pdf(pdf.universe(), lo, half);
      if (candidate == pdf) {
        const int k = std::bit_width(half);  // half = 2^k - 1
        return TriangularChannel(k, lo, label);
      }
    }
  }
  throw std::invalid_argument(
      "membership '" + label +
      "' is not realizable as a shifted triangle or point mass");
}

}  // namespace sfc
