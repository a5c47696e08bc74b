#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>

#include "sfc/analysis.hpp"
#include "sfc/stats.hpp"

namespace sfc::csv {

/// Shortest round-trip decimal form; locale-independent and deterministic,
/// so identical runs emit byte-identical files.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_surface(std::ostream& os, const SurfaceReport& report) {
  os << "xa,xb,exact,stochastic,abs_error,skipped\n";
  for (const SurfacePoint& pt : report.points) {
    os << pt.xa << ',' << pt.xb << ',';
    if (pt.skipped) {
      os << ",,,1\n";
    } else {
      os << format_double(pt.exact) << ',' << format_double(pt.stochastic)
         << ',' << format_double(pt.abs_error) << ",0\n";
    }
  }
}

inline void write_convergence(std::ostream& os,
                              const ConvergenceReport& report) {
  os << "n_accepted,estimate,stderr\n";
  for (const ConvergencePoint& pt : report.checkpoints) {
    os << pt.n_accepted << ',' << format_double(pt.estimate) << ','
       << format_double(pt.stderr_est) << '\n';
  }
}

inline void write_gof(std::ostream& os, const GofResult& result) {
  os << "bin,observed,expected\n";
  for (const GofBin& b : result.bins) {
    if (b.lo == b.hi) {
      os << b.lo;
    } else {
      os << b.lo << '-' << b.hi;
    }
    os << ',' << format_double(b.observed) << ',' << format_double(b.expected)
       << '\n';
  }
}

}  // namespace sfc::csv
