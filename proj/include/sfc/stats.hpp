#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "sfc/errors.hpp"
#include "sfc/membership.hpp"

namespace sfc {

struct GofBin {
  Code lo = 0;      // first code merged into this bin
  Code hi = 0;      // last code merged into this bin
  double observed = 0.0;
  double expected = 0.0;
};

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double critical_value = 0.0;  // chi-square quantile at 1 - 0.01
  bool reject_at_0_01 = false;
  std::vector<GofBin> bins;
};

/// Pearson goodness-of-fit of an observed histogram against an expected law.
/// Support codes are merged left to right until each bin carries an expected
/// count of at least min_bin; a deficient trailing bin is folded into its
/// predecessor. Any observation outside the expected support rejects
/// outright. Requires at least 10 observations per universe code.
inline GofResult chi_square_gof(std::span<const double> counts,
                                const MembershipPdf& expected,
                                int min_bin = 5) {
  if (counts.size() != expected.size()) {
    throw std::invalid_argument("histogram and expected law sizes differ");
  }
  double n_total = 0.0;
  for (double c : counts) n_total += c;
  if (n_total < 10.0 * static_cast<double>(counts.size())) {
    throw InsufficientSamplesError(
        "need at least 10 observations per code, got " +
        std::to_string(n_total) + " for " + std::to_string(counts.size()) +
        " codes");
  }

  double off_support = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (expected.mass()[c] == 0.0) off_support += counts[c];
  }

  GofResult result;
  GofBin current;
  bool open = false;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double p = expected.mass()[c];
    if (p == 0.0) continue;
    if (!open) {
      current = GofBin{static_cast<Code>(c), static_cast<Code>(c), 0.0, 0.0};
      open = true;
    }
    current.hi = static_cast<Code>(c);
    current.observed += counts[c];
    current.expected += n_total * p;
    if (current.expected >= static_cast<double>(min_bin)) {
      result.bins.push_back(current);
      open = false;
    }
  }
  if (open) {
    if (result.bins.empty()) {
      result.bins.push_back(current);
    } else {
      result.bins.back().hi = current.hi;
      result.bins.back().observed += current.observed;
      result.bins.back().expected += current.expected;
    }
  }

  for (const GofBin& b : result.bins) {
    const double d = b.observed - b.expected;
    result.statistic += d * d / b.expected;
  }
  result.dof = static_cast<int>(result.bins.size()) - 1;
  if (off_support > 0.0) {
    result.statistic = std::numeric_limits<double>::infinity();
    result.reject_at_0_01 = true;
  }
  if (result.dof >= 1) {
    const boost::math::chi_squared dist(result.dof);
    result.critical_value = boost::math::quantile(dist, 0.99);
    result.reject_at_0_01 =
        result.reject_at_0_01 || result.statistic > result.critical_value;
  }
  return result;
}

/// Least-squares slope of log(y) against log(x). NaN when a y is not
/// strictly positive (a deterministic stream has zero spread).
inline double fit_loglog_slope(std::span<const double> x,
                               std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs at least two points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Sample mean and unbiased standard deviation.
struct MeanStd {
  double mean = 0.0;
  double std_dev = 0.0;
};

inline MeanStd mean_std(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  const double var =
      xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  return {mean, std::sqrt(var)};
}

/// Pearson correlation of two equal-length sample streams.
inline double pearson_correlation(std::span<const double> a,
                                  std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("correlation needs two equal-length samples");
  }
  const MeanStd ma = mean_std(a);
  const MeanStd mb = mean_std(b);
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma.mean) * (b[i] - mb.mean);
  }
  cov /= static_cast<double>(a.size() - 1);
  return cov / (ma.std_dev * mb.std_dev);
}

}  // namespace sfc
