#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfc/controller.hpp"
#include "sfc/errors.hpp"

namespace sfc {

constexpr int kConfigSchemaVersion = 1;

/// Controller description plus experiment parameters: grid stride, cycle
/// budgets, checkpoint list, replica count and the base seed all derived
/// seeds come from.
struct ExperimentConfig {
  ControllerConfig controller;
  std::optional<MembershipPdf> fuzzy_a;  // required in stochastic_fuzzy mode
  std::optional<MembershipPdf> fuzzy_b;
  std::uint64_t base_seed = 1;
  int grid_step = 1;
  std::uint64_t cycles_per_point = 1'000'000;
  std::uint64_t simulate_cycles = 1'000'000;
  std::vector<std::uint64_t> checkpoints{100, 316, 1000, 3162, 10000};
  int replicas = 32;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path,
                                     const std::string& what) {
  throw ConfigError(path + ": " + what);
}

inline const nlohmann::json& expect(const nlohmann::json& j,
                                    const std::string& key,
                                    const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) config_fail(path + "." + key, "missing required field");
  return *it;
}

template <typename T>
T expect_as(const nlohmann::json& j, const std::string& key,
            const std::string& path) {
  try {
    return expect(j, key, path).get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_fail(path + "." + key, e.what());
  }
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, const std::string& path,
         T fallback) {
  if (j.find(key) == j.end()) return fallback;
  return expect_as<T>(j, key, path);
}

inline Channel parse_channel(const nlohmann::json& j, const std::string& path,
                             const std::string& label) {
  const std::string kind = expect_as<std::string>(j, "kind", path);
  try {
    if (kind == "triangle") {
      const int bits = expect_as<int>(j, "bits", path);
      const Code shift = expect_as<Code>(j, "shift", path);
      return TriangularChannel(bits, shift, label);
    }
    if (kind == "singleton") {
      return SingletonChannel(expect_as<Code>(j, "code", path), label);
    }
  } catch (const std::invalid_argument& e) {
    config_fail(path, e.what());
  }
  config_fail(path + ".kind", "expected 'triangle' or 'singleton'");
}

inline void parse_variable(const nlohmann::json& vars, const std::string& var,
                           const Universe& universe,
                           std::map<std::string, Channel>& channels,
                           const std::string& path,
                           const std::function<void(const std::string&, MembershipPdf)>& add) {
  const nlohmann::json& table = expect(vars, var, path);
  if (!table.is_object() || table.empty()) {
    config_fail(path + "." + var, "expected a non-empty membership table");
  }
  for (const auto& [name, spec] : table.items()) {
    const std::string mpath = path + "." + var + "." + name;
    const Channel ch = parse_channel(spec, mpath, name);
    try {
      validate_channel(ch, universe);
      add(name, channel_law(ch, universe));
    } catch (const std::exception& e) {
      config_fail(mpath, e.what());
    }
    channels.emplace(name, ch);
  }
}

}  // namespace detail

/// Builds and validates an ExperimentConfig from parsed JSON. All
/// diagnostics carry the dotted path of the offending field.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using detail::config_fail;
  using detail::expect;
  using detail::expect_as;
  using detail::get_or;

  const int version = expect_as<int>(j, "schema_version", "config");
  if (version != kConfigSchemaVersion) {
    config_fail("config.schema_version",
                "unsupported version " + std::to_string(version) +
                    ", expected " + std::to_string(kConfigSchemaVersion));
  }

  const int bits = expect_as<int>(j, "universe_bits", "config");
  Universe universe = [&] {
    try {
      return Universe(bits);
    } catch (const std::invalid_argument& e) {
      config_fail("config.universe_bits", e.what());
    }
  }();

  RuleBase rulebase(universe, universe, universe);
  std::map<std::string, Channel> a_channels, b_channels, y_channels;
  const nlohmann::json& vars = expect(j, "variables", "config");
  detail::parse_variable(vars, "a", universe, a_channels, "config.variables",
                         [&](const std::string& n, MembershipPdf p) {
                           rulebase.add_a_membership(n, std::move(p));
                         });
  detail::parse_variable(vars, "b", universe, b_channels, "config.variables",
                         [&](const std::string& n, MembershipPdf p) {
                           rulebase.add_b_membership(n, std::move(p));
                         });
  detail::parse_variable(vars, "y", universe, y_channels, "config.variables",
                         [&](const std::string& n, MembershipPdf p) {
                           rulebase.add_y_membership(n, std::move(p));
                         });

  const nlohmann::json& rules = expect(j, "rules", "config");
  if (!rules.is_array() || rules.empty()) {
    config_fail("config.rules", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string rpath = "config.rules[" + std::to_string(i) + "]";
    Rule rule{expect_as<std::string>(rules[i], "a", rpath),
              expect_as<std::string>(rules[i], "b", rpath),
              expect_as<std::string>(rules[i], "y", rpath)};
    try {
      rulebase.add_rule(std::move(rule));
    } catch (const std::invalid_argument& e) {
      config_fail(rpath, e.what());
    }
  }

  GeneratorConfig gen;
  if (j.find("generator") != j.end()) {
    const nlohmann::json& g = j["generator"];
    const std::string mode = get_or<std::string>(g, "mode", "config.generator",
                                                 "shared");
    if (mode == "shared") {
      gen.mode = GeneratorMode::kShared;
    } else if (mode == "independent") {
      gen.mode = GeneratorMode::kIndependent;
    } else {
      config_fail("config.generator.mode", "expected 'shared' or 'independent'");
    }
    gen.width = get_or<int>(g, "width", "config.generator", kDefaultLfsrWidth);
    if (g.find("taps") != g.end()) {
      const auto taps = expect_as<std::vector<int>>(g, "taps", "config.generator");
      gen.taps = std::set<int>(taps.begin(), taps.end());
    }
    gen.seed = get_or<std::uint32_t>(g, "seed", "config.generator", 1u);
  }
  if (gen.seed == 0) {
    config_fail("config.generator.seed",
                "0 is forbidden, the starting logic must seed the register "
                "away from its lockup state");
  }

  ExperimentConfig cfg{ControllerConfig{std::move(rulebase),
                                        std::move(a_channels),
                                        std::move(b_channels),
                                        std::move(y_channels),
                                        gen,
                                        bits},
                       std::nullopt,
                       std::nullopt};

  if (j.find("controller") != j.end()) {
    const nlohmann::json& c = j["controller"];
    cfg.controller.filter_alpha =
        get_or<double>(c, "filter_alpha", "config.controller", 0.05);
    const std::string schedule = get_or<std::string>(
        c, "rule_schedule", "config.controller", "round_robin");
    if (schedule == "round_robin") {
      cfg.controller.rule_schedule = RuleSchedule::kRoundRobin;
    } else if (schedule == "uniform_random") {
      cfg.controller.rule_schedule = RuleSchedule::kUniformRandom;
    } else {
      config_fail("config.controller.rule_schedule",
                  "expected 'round_robin' or 'uniform_random'");
    }
    const std::string mode =
        get_or<std::string>(c, "input_mode", "config.controller", "crisp");
    if (mode == "crisp") {
      cfg.controller.input_mode = InputMode::kCrisp;
    } else if (mode == "stochastic_fuzzy") {
      cfg.controller.input_mode = InputMode::kStochasticFuzzy;
    } else {
      config_fail("config.controller.input_mode",
                  "expected 'crisp' or 'stochastic_fuzzy'");
    }
    cfg.controller.max_cycles = get_or<std::uint64_t>(
        c, "max_cycles", "config.controller", cfg.controller.max_cycles);
  }

  if (cfg.controller.input_mode == InputMode::kStochasticFuzzy) {
    const nlohmann::json& f = expect(j, "fuzzy_inputs", "config");
    const Channel fa = detail::parse_channel(expect(f, "a", "config.fuzzy_inputs"),
                                             "config.fuzzy_inputs.a", "a_in");
    const Channel fb = detail::parse_channel(expect(f, "b", "config.fuzzy_inputs"),
                                             "config.fuzzy_inputs.b", "b_in");
    try {
      validate_channel(fa, cfg.controller.rulebase.input_a_universe());
      validate_channel(fb, cfg.controller.rulebase.input_b_universe());
    } catch (const std::exception& e) {
      config_fail("config.fuzzy_inputs", e.what());
    }
    cfg.fuzzy_a = channel_law(fa, cfg.controller.rulebase.input_a_universe());
    cfg.fuzzy_b = channel_law(fb, cfg.controller.rulebase.input_b_universe());
  } else if (j.find("fuzzy_inputs") != j.end()) {
    config_fail("config.fuzzy_inputs",
                "only valid when input_mode is 'stochastic_fuzzy'");
  }

  if (j.find("experiment") != j.end()) {
    const nlohmann::json& e = j["experiment"];
    cfg.base_seed =
        get_or<std::uint64_t>(e, "base_seed", "config.experiment", 1u);
    cfg.grid_step = get_or<int>(e, "grid_step", "config.experiment", 1);
    cfg.cycles_per_point = get_or<std::uint64_t>(
        e, "cycles_per_point", "config.experiment", cfg.cycles_per_point);
    cfg.simulate_cycles = get_or<std::uint64_t>(
        e, "simulate_cycles", "config.experiment", cfg.simulate_cycles);
    if (e.find("checkpoints") != e.end()) {
      cfg.checkpoints = expect_as<std::vector<std::uint64_t>>(
          e, "checkpoints", "config.experiment");
    }
    cfg.replicas = get_or<int>(e, "replicas", "config.experiment", cfg.replicas);
    if (cfg.grid_step < 1) {
      config_fail("config.experiment.grid_step", "must be >= 1");
    }
    if (cfg.replicas < 2) {
      config_fail("config.experiment.replicas", "must be >= 2");
    }
  }

  try {
    cfg.controller.validate();
  } catch (const ConfigError& e) {
    config_fail("config", e.what());
  }
  return cfg;
}

/// Reads, parses and validates a config file.
inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("parse error in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace sfc
