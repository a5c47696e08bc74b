#pragma once

#include <stdexcept>
#include <string>

namespace sfc {

/// Base class for all domain errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A membership support would extend past the universe. Supports are never
/// clipped; an out-of-range triangle is a configuration error.
class SupportOverflowError : public Error {
 public:
  using Error::Error;
};

/// Centroid requested for an all-zero mass vector.
class ZeroMassError : public Error {
 public:
  using Error::Error;
};

/// No rule has positive fire strength at the requested inputs.
class NoRuleFiresError : public Error {
 public:
  using Error::Error;
};

/// A pointwise product (or a composed output set) has zero total mass.
class DisjointSupportError : public Error {
 public:
  using Error::Error;
};

/// Seed 0 would park the shift register in its lockup state.
class ZeroSeedError : public Error {
 public:
  using Error::Error;
};

/// A full simulation budget produced zero accepted samples. Carries the
/// analytic acceptance rate so the caller can tell "unlucky" from "disjoint".
class NoCoincidenceError : public Error {
 public:
  NoCoincidenceError(const std::string& msg, double analytic_rate)
      : Error(msg), analytic_rate_(analytic_rate) {}

  double analytic_rate() const { return analytic_rate_; }

 private:
  double analytic_rate_;
};

/// Too few samples for a meaningful goodness-of-fit decision.
class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

/// Configuration file failed to parse or validate. The message names the
/// offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfc
