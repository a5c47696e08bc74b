#pragma once

// Reference computations kept independent of the library on purpose:
// enumeration and brute force instead of closed forms, bit vectors instead
// of packed words. Tests compare two different routes to the same value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracles {

// Triangle law by enumerating every (u1, u2) pair of k-bit words.
inline std::vector<double> triangle_law(int k, std::uint32_t shift,
                                        std::size_t universe_size) {
  std::vector<double> law(universe_size, 0.0);
  const std::uint32_t top = (std::uint32_t{1} << k) - 1;
  const double pair_mass = 1.0 / ((top + 1.0) * (top + 1.0));
  for (std::uint32_t u1 = 0; u1 <= top; ++u1) {
    for (std::uint32_t u2 = 0; u2 <= top; ++u2) {
      law.at(u1 + u2 + shift) += pair_mass;
    }
  }
  return law;
}

// Coincidence acceptance by enumerating the joint sample space: two
// independent draws, accept when the codes match.
struct CoincidenceOracle {
  double rate = 0.0;
  std::vector<double> accepted_law;
};

inline CoincidenceOracle coincidence(const std::vector<double>& law_a,
                                     const std::vector<double>& law_b) {
  CoincidenceOracle out;
  out.accepted_law.assign(law_a.size(), 0.0);
  for (std::size_t i = 0; i < law_a.size(); ++i) {
    for (std::size_t j = 0; j < law_b.size(); ++j) {
      if (i == j) {
        const double mass = law_a[i] * law_b[j];
        out.rate += mass;
        out.accepted_law[i] += mass;
      }
    }
  }
  if (out.rate > 0.0) {
    for (double& v : out.accepted_law) v /= out.rate;
  }
  return out;
}

// Full relational route: materialize R(x1, x2, y) over the whole product
// space, contract with the input laws, then take the centroid. O(n^3) time
// and memory, only viable for small universes.
struct RelationRule {
  std::vector<double> mu_a;
  std::vector<double> mu_b;
  std::vector<double> mu_y;
};

struct RelationResult {
  std::vector<double> output_law;  // normalized
  double centroid = 0.0;
  double total_mass = 0.0;  // before normalization
};

inline RelationResult relation_compose(const std::vector<RelationRule>& rules,
                                       const std::vector<double>& in_a,
                                       const std::vector<double>& in_b,
                                       bool sum_union) {
  const std::size_t na = in_a.size();
  const std::size_t nb = in_b.size();
  const std::size_t ny = rules.front().mu_y.size();
  std::vector<double> relation(na * nb * ny, 0.0);
  for (const RelationRule& r : rules) {
    for (std::size_t x1 = 0; x1 < na; ++x1) {
      for (std::size_t x2 = 0; x2 < nb; ++x2) {
        for (std::size_t y = 0; y < ny; ++y) {
          const double v = r.mu_a[x1] * r.mu_b[x2] * r.mu_y[y];
          double& cell = relation[(x1 * nb + x2) * ny + y];
          cell = sum_union ? cell + v : std::max(cell, v);
        }
      }
    }
  }
  RelationResult out;
  out.output_law.assign(ny, 0.0);
  for (std::size_t x1 = 0; x1 < na; ++x1) {
    for (std::size_t x2 = 0; x2 < nb; ++x2) {
      const double w = in_a[x1] * in_b[x2];
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < ny; ++y) {
        out.output_law[y] += w * relation[(x1 * nb + x2) * ny + y];
      }
    }
  }
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    mass += out.output_law[y];
    moment += static_cast<double>(y) * out.output_law[y];
  }
  out.total_mass = mass;
  if (mass > 0.0) {
    out.centroid = moment / mass;
    for (double& v : out.output_law) v /= mass;
  }
  return out;
}

inline std::vector<double> point_mass(std::size_t size, std::size_t at) {
  std::vector<double> v(size, 0.0);
  v.at(at) = 1.0;
  return v;
}

// Shift register re-implemented over a bit vector. bits[0] is the output
// end; tap t reads bits[width - t]; the feedback bit enters at the top.
struct BitRegister {
  std::vector<int> bits;
  std::set<int> taps;

  BitRegister(int width, std::set<int> tap_set, std::uint32_t seed)
      : bits(width, 0), taps(std::move(tap_set)) {
    for (int i = 0; i < width; ++i) bits[i] = (seed >> i) & 1u;
  }

  int step() {
    int fb = 0;
    for (int t : taps) fb ^= bits[bits.size() - static_cast<std::size_t>(t)];
    const int out = bits.front();
    bits.erase(bits.begin());
    bits.push_back(fb);
    return out;
  }

  std::uint32_t value() const {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      v |= static_cast<std::uint32_t>(bits[i]) << i;
    }
    return v;
  }
};

struct PeriodWalk {
  std::uint64_t period = 0;
  std::set<std::uint32_t> visited;
};

inline PeriodWalk walk_period(int width, const std::set<int>& taps,
                              std::uint32_t seed, std::uint64_t cap) {
  BitRegister reg(width, taps, seed);
  PeriodWalk walk;
  const std::uint32_t home = reg.value();
  do {
    walk.visited.insert(reg.value());
    reg.step();
    ++walk.period;
  } while (reg.value() != home && walk.period < cap);
  return walk;
}

// Upper 0.99 quantiles of the chi-squared distribution, frozen from
// standard tables, for cross-checking the computed critical values.
inline double frozen_chi2_99(int dof) {
  static const std::map<int, double> table{
      {1, 6.634896601},  {2, 9.210340372},  {3, 11.34486673},
      {4, 13.27670414},  {5, 15.08627247},  {6, 16.81189383},
      {10, 23.20925116}, {15, 30.57791417},
  };
  return table.at(dof);
}

inline double l1_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// Small deterministic generator for property-test inputs; xorshift so it
// shares nothing with the library's seed derivation.
struct TestRng {
  std::uint64_t s;
  explicit TestRng(std::uint64_t seed) : s(seed ? seed : 0xDEADBEEFull) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next() % n);
  }
  double unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

}  // namespace oracles
