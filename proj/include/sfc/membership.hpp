#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfc/errors.hpp"
#include "sfc/universe.hpp"

namespace sfc {

/// Discrete probability mass function over a universe. This is the single
/// data model for membership functions: a fuzzy set is stored as the law of
/// the random variable that realizes it, so masses are >= 0 and sum to 1.
class MembershipPdf {
 public:
  static constexpr double kSumTolerance = 1e-9;

  MembershipPdf(Universe universe, std::vector<double> mass)
      : universe_(universe), mass_(std::move(mass)) {
    if (mass_.size() != universe_.size()) {
      throw std::invalid_argument("mass vector has " +
                                  std::to_string(mass_.size()) +
                                  " entries, universe has " +
                                  std::to_string(universe_.size()));
    }
    double sum = 0.0;
    for (double m : mass_) {
      if (!(m >= 0.0)) {
        throw std::invalid_argument("membership mass entries must be >= 0");
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw std::invalid_argument("membership mass must sum to 1, got " +
                                  std::to_string(sum));
    }
  }

  const Universe& universe() const { return universe_; }
  const std::vector<double>& mass() const { return mass_; }
  double at(Code c) const { return mass_[c]; }
  std::size_t size() const { return mass_.size(); }

  /// Smallest and largest code with positive mass.
  std::pair<Code, Code> support() const {
    Code lo = 0;
    while (lo < mass_.size() && mass_[lo] == 0.0) ++lo;
    Code hi = static_cast<Code>(mass_.size()) - 1;
    while (hi > lo && mass_[hi] == 0.0) --hi;
    return {lo, hi};
  }

  friend bool operator==(const MembershipPdf& a, const MembershipPdf& b) {
    return a.universe_ == b.universe_ && a.mass_ == b.mass_;
  }

 private:
  Universe universe_;
  std::vector<double> mass_;
};

/// Exact law of u1 + u2 + left_edge with u1, u2 independent and uniform on
/// {0 .. half_width}. half_width must be 2^k - 1 so the shape is realizable
/// by summing two k-bit generator words; all masses are dyadic rationals and
/// therefore exact in binary floating point.
///
/// Throws SupportOverflowError when the triangle would extend past the
/// universe: supports are never clipped, because clipping silently changes
/// the law the hardware generates.
inline MembershipPdf make_triangular_pdf(Universe universe, Code left_edge,
                                         std::uint32_t half_width) {
  if (!std::has_single_bit(half_width + 1)) {
    throw std::invalid_argument(
        "half_width must be 2^k - 1 for some k >= 0, got " +
        std::to_string(half_width));
  }
  const std::uint64_t top = std::uint64_t{left_edge} + 2u * half_width;
  if (left_edge > universe.max_code() || top > universe.max_code()) {
    throw SupportOverflowError(
        "triangle support [" + std::to_string(left_edge) + ", " +
        std::to_string(top) + "] exceeds max code " +
        std::to_string(universe.max_code()));
  }
  std::vector<double> mass(universe.size(), 0.0);
  const double denom =
      static_cast<double>(half_width + 1) * static_cast<double>(half_width + 1);
  for (std::uint32_t j = 0; j <= 2 * half_width; ++j) {
    const std::uint32_t numer =
        half_width + 1 - (j > half_width ? j - half_width : half_width - j);
    mass[left_edge + j] = static_cast<double>(numer) / denom;
  }
  return MembershipPdf(universe, std::move(mass));
}

/// Degenerate membership: all mass on a single code.
inline MembershipPdf make_point_mass(Universe universe, Code code) {
  return make_triangular_pdf(universe, code, 0);
}

/// Pointwise product of two laws on the same universe, kept unnormalized
/// together with its total mass. A zero normalizer is a signal (disjoint
/// supports), not an error: callers decide whether that is fatal.
struct ProductResult {
  std::vector<double> unnormalized;
  double normalizer = 0.0;
  Universe universe;

  /// The conditional law of a coincidence-accepted sample.
  /// Throws DisjointSupportError when the supports do not meet.
  MembershipPdf normalized() const {
    if (normalizer <= 0.0) {
      throw DisjointSupportError("pointwise product has zero total mass");
    }
    std::vector<double> mass(unnormalized.size());
    for (std::size_t i = 0; i < mass.size(); ++i) {
      mass[i] = unnormalized[i] / normalizer;
    }
    return MembershipPdf(universe, std::move(mass));
  }
};

inline ProductResult product_pdf(const MembershipPdf& p,
                                 const MembershipPdf& q) {
  if (p.universe() != q.universe()) {
    throw std::invalid_argument("product_pdf requires a shared universe");
  }
  ProductResult r{std::vector<double>(p.size(), 0.0), 0.0, p.universe()};
  for (std::size_t i = 0; i < p.size(); ++i) {
    r.unnormalized[i] = p.mass()[i] * q.mass()[i];
    r.normalizer += r.unnormalized[i];
  }
  return r;
}

/// Center-of-gravity defuzzification: sum(y * mass[y]) / sum(mass[y]).
/// For a normalized law this is the expected value; the ratio makes the
/// result invariant to positive scaling of the mass vector.
inline double defuzzify_cog(std::span<const double> mass) {
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t c = 0; c < mass.size(); ++c) {
    total += mass[c];
    weighted += static_cast<double>(c) * mass[c];
  }
  if (total <= 0.0) {
    throw ZeroMassError("defuzzify_cog on zero total mass");
  }
  return weighted / total;
}

inline double defuzzify_cog(const MembershipPdf& pdf) {
  return defuzzify_cog(std::span<const double>(pdf.mass()));
}

}  // namespace sfc
