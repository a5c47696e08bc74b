#pragma once

// Builders for the controller shapes most tests run against: a 4-bit
// universe with S/M/B triangles (k = 2 at shifts 0, 5, 9), as a single-rule
// and as a full 3x3 rule base.

#include <map>
#include <string>

#include "sfc/sfc.hpp"

namespace fixtures {

inline sfc::Universe u4() { return sfc::Universe(4); }

inline std::map<std::string, sfc::Channel> smb_channels() {
  return {{"S", sfc::TriangularChannel(2, 0, "S")},
          {"M", sfc::TriangularChannel(2, 5, "M")},
          {"B", sfc::TriangularChannel(2, 9, "B")}};
}

inline void add_smb(sfc::RuleBase& rb) {
  const sfc::Universe u = rb.output_universe();
  for (const auto& [name, shift] :
       std::map<std::string, sfc::Code>{{"S", 0}, {"M", 5}, {"B", 9}}) {
    rb.add_a_membership(name, sfc::make_triangular_pdf(u, shift, 3));
    rb.add_b_membership(name, sfc::make_triangular_pdf(u, shift, 3));
    rb.add_y_membership(name, sfc::make_triangular_pdf(u, shift, 3));
  }
}

inline sfc::RuleBase single_rule_base() {
  sfc::RuleBase rb(u4(), u4(), u4());
  add_smb(rb);
  rb.add_rule({"S", "S", "B"});
  return rb;
}

inline sfc::RuleBase smb3x3_base() {
  sfc::RuleBase rb(u4(), u4(), u4());
  add_smb(rb);
  rb.add_rule({"S", "S", "B"});
  rb.add_rule({"S", "M", "B"});
  rb.add_rule({"S", "B", "M"});
  rb.add_rule({"M", "S", "B"});
  rb.add_rule({"M", "M", "M"});
  rb.add_rule({"M", "B", "S"});
  rb.add_rule({"B", "S", "M"});
  rb.add_rule({"B", "M", "S"});
  rb.add_rule({"B", "B", "S"});
  return rb;
}

inline sfc::ControllerConfig single_rule_config(std::uint32_t seed = 3571) {
  sfc::GeneratorConfig gen;
  gen.seed = seed;
  return sfc::ControllerConfig{single_rule_base(), smb_channels(),
                               smb_channels(),     smb_channels(),
                               gen,                4};
}

inline sfc::ControllerConfig smb3x3_config(std::uint32_t seed = 40961) {
  sfc::GeneratorConfig gen;
  gen.seed = seed;
  return sfc::ControllerConfig{smb3x3_base(), smb_channels(), smb_channels(),
                               smb_channels(), gen, 4};
}

// Two-rule fuzzy-mode controller on a 5-bit universe: low/high antecedents
// (k = 3 at shifts 0 and 16) crossed to large/small consequents.
inline sfc::ControllerConfig fuzzy_config(std::uint32_t seed = 777) {
  const sfc::Universe u(5);
  sfc::RuleBase rb(u, u, u);
  rb.add_a_membership("low", sfc::make_triangular_pdf(u, 0, 7));
  rb.add_a_membership("high", sfc::make_triangular_pdf(u, 16, 7));
  rb.add_b_membership("low", sfc::make_triangular_pdf(u, 0, 7));
  rb.add_b_membership("high", sfc::make_triangular_pdf(u, 16, 7));
  rb.add_y_membership("small", sfc::make_triangular_pdf(u, 0, 7));
  rb.add_y_membership("large", sfc::make_triangular_pdf(u, 16, 7));
  rb.add_rule({"low", "low", "large"});
  rb.add_rule({"high", "high", "small"});
  std::map<std::string, sfc::Channel> in_a{
      {"low", sfc::TriangularChannel(3, 0, "low")},
      {"high", sfc::TriangularChannel(3, 16, "high")}};
  std::map<std::string, sfc::Channel> in_b = in_a;
  std::map<std::string, sfc::Channel> out{
      {"small", sfc::TriangularChannel(3, 0, "small")},
      {"large", sfc::TriangularChannel(3, 16, "large")}};
  sfc::GeneratorConfig gen;
  gen.mode = sfc::GeneratorMode::kIndependent;
  // Width 23: the period 8388607 has no factor below 47, so the six bits
  // drawn per cycle never lock the register onto a short phase sub-orbit.
  gen.width = 23;
  gen.taps = {23, 5};
  gen.seed = seed;
  sfc::ControllerConfig cfg{std::move(rb),   std::move(in_a),
                            std::move(in_b), std::move(out),
                            gen,             5};
  cfg.input_mode = sfc::InputMode::kStochasticFuzzy;
  return cfg;
}

}  // namespace fixtures
