#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sfc/channel.hpp"
#include "sfc/errors.hpp"
#include "sfc/generator.hpp"
#include "sfc/lfsr.hpp"
#include "sfc/membership.hpp"
#include "sfc/rulebase.hpp"

namespace sfc {

/// A/D conversion of an analog input in [0, 1] to a code, round half up.
inline Code quantize(double x, int bits) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::out_of_range("analog input must lie in [0, 1], got " +
                            std::to_string(x));
  }
  const double max_code = static_cast<double>((std::uint32_t{1} << bits) - 1);
  return static_cast<Code>(std::floor(x * max_code + 0.5));
}

/// First-order model of the D/A converter plus analog low-pass filter.
inline double iir_update(double prev, double sample, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("filter alpha must be in (0, 1]");
  }
  return prev + alpha * (sample - prev);
}

enum class RuleSchedule { kRoundRobin, kUniformRandom };
enum class InputMode { kCrisp, kStochasticFuzzy };

/// Full datapath description: rule base, the channel realizing each
/// membership, generator wiring, converter resolution, filter constant,
/// multiplexer schedule and cycle budget cap.
struct ControllerConfig {
  RuleBase rulebase;
  std::map<std::string, Channel> a_channels;
  std::map<std::string, Channel> b_channels;
  std::map<std::string, Channel> y_channels;
  GeneratorConfig generator;
  int quantizer_bits = 0;
  double filter_alpha = 0.05;
  RuleSchedule rule_schedule = RuleSchedule::kRoundRobin;
  InputMode input_mode = InputMode::kCrisp;
  std::uint64_t max_cycles = 100'000'000;

  /// Throws ConfigError naming the offending field. Channel law consistency
  /// is checked exactly: the assigned channel's law must equal the stored
  /// membership PDF bit for bit.
  void validate() const {
    if (rulebase.rule_count() == 0) {
      throw ConfigError("rules: at least one rule is required");
    }
    if (rulebase.input_a_universe().bits() != quantizer_bits ||
        rulebase.input_b_universe().bits() != quantizer_bits) {
      throw ConfigError("quantizer_bits: must equal the input universe bits");
    }
    if (!(filter_alpha > 0.0 && filter_alpha <= 1.0)) {
      throw ConfigError("filter_alpha: must lie in (0, 1]");
    }
    try {
      Lfsr probe(generator.width, generator.taps, generator.seed);
    } catch (const ZeroSeedError&) {
      throw ConfigError(
          "generator.seed: 0 is forbidden, the starting logic must seed the "
          "register away from its lockup state");
    } catch (const std::exception& e) {
      throw ConfigError(std::string("generator: ") + e.what());
    }
    for (const Rule& rule : rulebase.rules()) {
      check_assignment(a_channels, rule.a, rulebase.a_memberships(),
                       rulebase.input_a_universe(), "a_channels");
      check_assignment(b_channels, rule.b, rulebase.b_memberships(),
                       rulebase.input_b_universe(), "b_channels");
      check_assignment(y_channels, rule.y, rulebase.y_memberships(),
                       rulebase.output_universe(), "y_channels");
    }
  }

 private:
  static void check_assignment(const std::map<std::string, Channel>& channels,
                               const std::string& name,
                               const std::map<std::string, MembershipPdf>& pdfs,
                               const Universe& universe, const char* field) {
    const auto it = channels.find(name);
    if (it == channels.end()) {
      throw ConfigError(std::string(field) + "." + name +
                        ": no channel assigned to this membership");
    }
    try {
      validate_channel(it->second, universe);
    } catch (const SupportOverflowError& e) {
      throw ConfigError(std::string(field) + "." + name + ": " + e.what());
    }
    if (!(channel_law(it->second, universe) == pdfs.at(name))) {
      throw ConfigError(std::string(field) + "." + name +
                        ": channel law does not equal the membership PDF");
    }
  }
};

/// One clock of the datapath, as the comparator saw it.
struct CycleTrace {
  std::uint64_t cycle = 0;
  std::size_t rule_index = 0;
  Code xa = 0;
  Code xb = 0;
  Code y = 0;
  bool matched = false;
};

struct CheckpointRecord {
  std::uint64_t n_accepted = 0;
  double estimate = 0.0;
};

struct RunResult {
  double estimate_mean = 0.0;      // running mean of accepted y samples
  double estimate_filtered = 0.0;  // final IIR output
  std::uint64_t accepted_count = 0;
  std::uint64_t total_cycles = 0;
  double acceptance_rate = 0.0;
  std::vector<double> accepted_histogram;  // counts per output code
  std::vector<CheckpointRecord> checkpoints;
  std::vector<double> filtered_trajectory;  // filled when requested
};

struct RunOptions {
  /// Record the running mean when accepted_count reaches each entry
  /// (ascending). Targets never reached within the budget are omitted.
  std::vector<std::uint64_t> accepted_checkpoints;
  /// Stop once this many samples were accepted (0 = run the whole budget).
  std::uint64_t stop_after_accepted = 0;
  /// Record the IIR output after every cycle (NaN before first acceptance).
  bool record_filtered = false;
  /// Per-cycle CSV sink: cycle,rule,xa,xb,y,matched. Off by default, full
  /// traces at 1e6 cycles are large.
  std::ostream* trace = nullptr;
};

/// Cycle-accurate controller: multiplexer scans rules, channels draw one
/// sample triple per clock, the comparator gates the consequent sample into
/// the accumulator and filter on exact input coincidence.
class Controller {
 public:
  explicit Controller(const ControllerConfig& cfg) : cfg_(cfg), gen_(cfg.generator) {
    cfg_.validate();
    for (const Rule& rule : cfg_.rulebase.rules()) {
      rule_channels_.push_back({&cfg_.a_channels.at(rule.a),
                                &cfg_.b_channels.at(rule.b),
                                &cfg_.y_channels.at(rule.y)});
    }
    selector_seed_ = detail::splitmix64(cfg_.generator.seed ^ 0xC0FFEEull);
    reset();
  }

  const ControllerConfig& config() const { return cfg_; }

  /// Restores generator, schedule and accumulators to their seeded state.
  void reset() {
    gen_.reset();
    cycle_ = 0;
    accepted_ = 0;
    accepted_sum_ = 0.0;
    histogram_.assign(cfg_.rulebase.output_universe().size(), 0.0);
    filtered_ = std::numeric_limits<double>::quiet_NaN();
    round_robin_next_ = 0;
    selector_counter_ = 0;
  }

  /// One clock against fixed comparator codes.
  CycleTrace step(Code xa_ref, Code xb_ref) {
    const std::size_t rule = select_rule();
    const auto& rc = rule_channels_[rule];
    const CycleSamples s = draw_cycle_samples(gen_, *rc.a, *rc.b, *rc.y);
    CycleTrace trace{cycle_, rule, s.xa, s.xb, s.y,
                     s.xa == xa_ref && s.xb == xb_ref};
    if (trace.matched) accept(s.y);
    ++cycle_;
    return trace;
  }

  /// Crisp-input run: a pure function of (config, inputs, cycles, options);
  /// the generator is re-seeded on entry.
  RunResult run(Code xa_ref, Code xb_ref, std::uint64_t cycles,
                const RunOptions& opts = {}) {
    if (cfg_.input_mode != InputMode::kCrisp) {
      throw std::invalid_argument("run() requires crisp input mode");
    }
    check_budget(cycles);
    reset();
    const auto draw_refs = [&](Code& a, Code& b) {
      a = xa_ref;
      b = xb_ref;
    };
    return run_loop(cycles, opts, draw_refs, [&] {
      return analytic_acceptance_rate(xa_ref, xb_ref);
    });
  }

  /// Fuzzy-input run: reference codes are themselves drawn each cycle from
  /// channels realizing a_in and b_in. The accepted-sample histogram
  /// converges to the composed output set.
  RunResult run_fuzzy(const MembershipPdf& a_in, const MembershipPdf& b_in,
                      std::uint64_t cycles, const RunOptions& opts = {}) {
    if (cfg_.input_mode != InputMode::kStochasticFuzzy) {
      throw std::invalid_argument(
          "run_fuzzy() requires stochastic_fuzzy input mode");
    }
    check_budget(cycles);
    const Channel ch_a = channel_for_pdf(a_in, "a_in");
    const Channel ch_b = channel_for_pdf(b_in, "b_in");
    validate_channel(ch_a, cfg_.rulebase.input_a_universe());
    validate_channel(ch_b, cfg_.rulebase.input_b_universe());
    reset();
    const auto draw_refs = [&](Code& a, Code& b) {
      a = gen_.draw(GeneratorBundle::kStreamRefA, ch_a);
      b = gen_.draw(GeneratorBundle::kStreamRefB, ch_b);
    };
    return run_loop(cycles, opts, draw_refs, [&] {
      return analytic_acceptance_rate(a_in, b_in);
    });
  }

  /// (1/m) * sum_i mu_Ai(xa_ref) * mu_Bi(xb_ref): the exact round-robin
  /// coincidence rate.
  double analytic_acceptance_rate(Code xa_ref, Code xb_ref) const {
    return total_fire_strength(cfg_.rulebase, xa_ref, xb_ref) /
           static_cast<double>(cfg_.rulebase.rule_count());
  }

  /// Fuzzy-input analog: antecedents contracted with the input laws.
  double analytic_acceptance_rate(const MembershipPdf& a_in,
                                  const MembershipPdf& b_in) const {
    double total = 0.0;
    for (std::size_t i = 0; i < cfg_.rulebase.rule_count(); ++i) {
      double wa = 0.0;
      double wb = 0.0;
      const auto& ma = cfg_.rulebase.antecedent_a(i).mass();
      const auto& mb = cfg_.rulebase.antecedent_b(i).mass();
      for (std::size_t x = 0; x < ma.size(); ++x) wa += a_in.mass()[x] * ma[x];
      for (std::size_t x = 0; x < mb.size(); ++x) wb += b_in.mass()[x] * mb[x];
      total += wa * wb;
    }
    return total / static_cast<double>(cfg_.rulebase.rule_count());
  }

 private:
  struct RuleChannels {
    const Channel* a;
    const Channel* b;
    const Channel* y;
  };

  void check_budget(std::uint64_t cycles) const {
    if (cycles > cfg_.max_cycles) {
      throw std::invalid_argument("cycle budget exceeds max_cycles");
    }
  }

  void accept(Code y) {
    ++accepted_;
    accepted_sum_ += static_cast<double>(y);
    histogram_[y] += 1.0;
    filtered_ = accepted_ == 1 ? static_cast<double>(y)
                               : iir_update(filtered_, static_cast<double>(y),
                                            cfg_.filter_alpha);
  }

  template <typename DrawRefs, typename AnalyticRate>
  RunResult run_loop(std::uint64_t cycles, const RunOptions& opts,
                     DrawRefs&& draw_refs, AnalyticRate&& analytic_rate) {
    if (opts.trace != nullptr) {
      *opts.trace << "cycle,rule,xa,xb,y,matched\n";
    }
    RunResult result;
    if (opts.record_filtered) result.filtered_trajectory.reserve(cycles);
    std::size_t next_checkpoint = 0;
    std::uint64_t executed = 0;
    for (std::uint64_t c = 0; c < cycles; ++c) {
      Code xa_ref = 0;
      Code xb_ref = 0;
      draw_refs(xa_ref, xb_ref);
      const CycleTrace trace = step(xa_ref, xb_ref);
      ++executed;
      if (opts.trace != nullptr) {
        *opts.trace << trace.cycle << ',' << trace.rule_index << ','
                    << trace.xa << ',' << trace.xb << ',' << trace.y << ','
                    << (trace.matched ? 1 : 0) << '\n';
      }
      if (opts.record_filtered) result.filtered_trajectory.push_back(filtered_);
      if (trace.matched) {
        while (next_checkpoint < opts.accepted_checkpoints.size() &&
               accepted_ == opts.accepted_checkpoints[next_checkpoint]) {
          result.checkpoints.push_back(
              {accepted_, accepted_sum_ / static_cast<double>(accepted_)});
          ++next_checkpoint;
        }
        if (opts.stop_after_accepted > 0 &&
            accepted_ >= opts.stop_after_accepted) {
          break;
        }
      }
    }
    if (accepted_ == 0) {
      const double rate = analytic_rate();
      throw NoCoincidenceError(
          "no coincidence in " + std::to_string(executed) +
              " cycles; analytic acceptance rate is " + std::to_string(rate),
          rate);
    }
    result.estimate_mean = accepted_sum_ / static_cast<double>(accepted_);
    result.estimate_filtered = filtered_;
    result.accepted_count = accepted_;
    result.total_cycles = executed;
    result.acceptance_rate =
        static_cast<double>(accepted_) / static_cast<double>(executed);
    result.accepted_histogram = histogram_;
    return result;
  }

  std::size_t select_rule() {
    const std::size_t m = rule_channels_.size();
    if (cfg_.rule_schedule == RuleSchedule::kRoundRobin) {
      const std::size_t r = round_robin_next_;
      round_robin_next_ = (round_robin_next_ + 1) % m;
      return r;
    }
    // Masked rejection keeps the draw unbiased and portable.
    const std::uint64_t mask = std::bit_ceil(m) - 1;
    std::uint64_t v;
    do {
      v = detail::splitmix64(selector_seed_ + ++selector_counter_) & mask;
    } while (v >= m);
    return static_cast<std::size_t>(v);
  }

  ControllerConfig cfg_;
  GeneratorBundle gen_;
  std::vector<RuleChannels> rule_channels_;
  std::uint64_t cycle_ = 0;
  std::uint64_t accepted_ = 0;
  double accepted_sum_ = 0.0;
  std::vector<double> histogram_;
  double filtered_ = std::numeric_limits<double>::quiet_NaN();
  std::size_t round_robin_next_ = 0;
  std::uint64_t selector_seed_ = 0;
  std::uint64_t selector_counter_ = 0;
};

}  // namespace sfc
