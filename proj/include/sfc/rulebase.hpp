#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "sfc/errors.hpp"
#include "sfc/membership.hpp"
#include "sfc/universe.hpp"

namespace sfc {

/// How per-rule contributions are merged into one output set.
///
/// kSum is an equal-weight probabilistic mixture across rules; it is the
/// semantics a rule-cycling multiplexer actually computes and is the default
/// everywhere. kMax is the classical set union, kept as a reference variant.
enum class UnionMode { kSum, kMax };

/// One linguistic rule: if a = A and b = B then y = C. Fields are membership
/// names resolved against the enclosing RuleBase.
struct Rule {
  std::string a;
  std::string b;
  std::string y;
};

/// Membership tables for the two input variables and the output variable,
/// plus the ordered rule list. Memberships within one variable share that
/// variable's universe.
class RuleBase {
 public:
  RuleBase(Universe input_a, Universe input_b, Universe output)
      : input_a_(input_a), input_b_(input_b), output_(output) {}

  void add_a_membership(const std::string& name, MembershipPdf pdf) {
    add_membership(a_table_, input_a_, name, std::move(pdf));
  }
  void add_b_membership(const std::string& name, MembershipPdf pdf) {
    add_membership(b_table_, input_b_, name, std::move(pdf));
  }
  void add_y_membership(const std::string& name, MembershipPdf pdf) {
    add_membership(y_table_, output_, name, std::move(pdf));
  }

  /// Appends a rule; all three names must already resolve.
  void add_rule(Rule rule) {
    require(a_table_, rule.a, "input-a");
    require(b_table_, rule.b, "input-b");
    require(y_table_, rule.y, "output");
    rules_.push_back(std::move(rule));
  }

  const Universe& input_a_universe() const { return input_a_; }
  const Universe& input_b_universe() const { return input_b_; }
  const Universe& output_universe() const { return output_; }

  const std::map<std::string, MembershipPdf>& a_memberships() const {
    return a_table_;
  }
  const std::map<std::string, MembershipPdf>& b_memberships() const {
    return b_table_;
  }
  const std::map<std::string, MembershipPdf>& y_memberships() const {
    return y_table_;
  }

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t rule_count() const { return rules_.size(); }

  const MembershipPdf& antecedent_a(std::size_t rule_index) const {
    return a_table_.at(rules_.at(rule_index).a);
  }
  const MembershipPdf& antecedent_b(std::size_t rule_index) const {
    return b_table_.at(rules_.at(rule_index).b);
  }
  const MembershipPdf& consequent(std::size_t rule_index) const {
    return y_table_.at(rules_.at(rule_index).y);
  }

 private:
  static void add_membership(std::map<std::string, MembershipPdf>& table,
                             const Universe& universe, const std::string& name,
                             MembershipPdf pdf) {
    if (pdf.universe() != universe) {
      throw std::invalid_argument("membership '" + name +
                                  "' is not on the variable's universe");
    }
    if (!table.emplace(name, std::move(pdf)).second) {
      throw std::invalid_argument("duplicate membership name '" + name + "'");
    }
  }

  static void require(const std::map<std::string, MembershipPdf>& table,
                      const std::string& name, const char* role) {
    if (table.find(name) == table.end()) {
      throw std::invalid_argument("rule references unknown " +
                                  std::string(role) + " membership '" + name +
                                  "'");
    }
  }

  Universe input_a_;
  Universe input_b_;
  Universe output_;
  std::map<std::string, MembershipPdf> a_table_;
  std::map<std::string, MembershipPdf> b_table_;
  std::map<std::string, MembershipPdf> y_table_;
  std::vector<Rule> rules_;
};

/// Larsen product activation of one rule at crisp inputs:
/// w = mu_A(x1) * mu_B(x2).
inline double fire_strength(const RuleBase& rb, std::size_t rule_index,
                            Code x1, Code x2) {
  if (rule_index >= rb.rule_count()) {
    throw std::out_of_range("rule index out of range");
  }
  if (!rb.input_a_universe().contains(x1) ||
      !rb.input_b_universe().contains(x2)) {
    throw std::out_of_range("input code outside universe");
  }
  return rb.antecedent_a(rule_index).at(x1) * rb.antecedent_b(rule_index).at(x2);
}

/// Sum of fire strengths over all rules. Equals m times the round-robin
/// coincidence acceptance rate.
inline double total_fire_strength(const RuleBase& rb, Code x1, Code x2) {
  double total = 0.0;
  for (std::size_t i = 0; i < rb.rule_count(); ++i) {
    total += fire_strength(rb, i, x1, x2);
  }
  return total;
}

/// Unnormalized output set at crisp inputs. Sum mode scales each consequent
/// by its rule's fire strength and adds; max mode takes the pointwise max of
/// the scaled consequents.
inline std::vector<double> aggregate_output(const RuleBase& rb, Code x1,
                                            Code x2,
                                            UnionMode mode = UnionMode::kSum) {
  if (rb.rule_count() == 0) {
    throw std::invalid_argument("rule base is empty");
  }
  std::vector<double> agg(rb.output_universe().size(), 0.0);
  for (std::size_t i = 0; i < rb.rule_count(); ++i) {
    const double w = fire_strength(rb, i, x1, x2);
    if (w == 0.0) continue;
    const auto& c = rb.consequent(i).mass();
    for (std::size_t y = 0; y < c.size(); ++y) {
      if (mode == UnionMode::kSum) {
        agg[y] += w * c[y];
      } else {
        agg[y] = std::max(agg[y], w * c[y]);
      }
    }
  }
  return agg;
}

/// Deterministic reference output: aggregate, then centroid.
/// Throws NoRuleFiresError when every rule has zero strength at (x1, x2).
inline double exact_output(const RuleBase& rb, Code x1, Code x2,
                           UnionMode mode = UnionMode::kSum) {
  const std::vector<double> agg = aggregate_output(rb, x1, x2, mode);
  const double total = std::accumulate(agg.begin(), agg.end(), 0.0);
  if (total <= 0.0) {
    throw NoRuleFiresError("no rule fires at (" + std::to_string(x1) + ", " +
                           std::to_string(x2) + ")");
  }
  return defuzzify_cog(std::span<const double>(agg));
}

/// Full fuzzy-input composition: the output set induced by input laws a_in
/// and b_in through the rule relation. Reduces to aggregate_output when the
/// inputs are point masses. Returned normalized.
inline MembershipPdf compose_fuzzy_inputs(const RuleBase& rb,
                                          const MembershipPdf& a_in,
                                          const MembershipPdf& b_in,
                                          UnionMode mode = UnionMode::kSum) {
  if (a_in.universe() != rb.input_a_universe() ||
      b_in.universe() != rb.input_b_universe()) {
    throw std::invalid_argument("fuzzy inputs must live on the input universes");
  }
  if (rb.rule_count() == 0) {
    throw std::invalid_argument("rule base is empty");
  }
  const std::size_t ny = rb.output_universe().size();
  std::vector<double> out(ny, 0.0);

  if (mode == UnionMode::kSum) {
    // The triple sum factorizes: per rule, the input laws contract with the
    // antecedents independently of y.
    for (std::size_t i = 0; i < rb.rule_count(); ++i) {
      double wa = 0.0;
      double wb = 0.0;
      const auto& ma = rb.antecedent_a(i).mass();
      const auto& mb = rb.antecedent_b(i).mass();
      for (std::size_t x = 0; x < ma.size(); ++x) wa += a_in.mass()[x] * ma[x];
      for (std::size_t x = 0; x < mb.size(); ++x) wb += b_in.mass()[x] * mb[x];
      const double w = wa * wb;
      if (w == 0.0) continue;
      const auto& c = rb.consequent(i).mass();
      for (std::size_t y = 0; y < ny; ++y) out[y] += w * c[y];
    }
  } else {
    // Max union does not factorize; enumerate input pairs.
    for (Code x1 = 0; x1 < a_in.size(); ++x1) {
      if (a_in.mass()[x1] == 0.0) continue;
      for (Code x2 = 0; x2 < b_in.size(); ++x2) {
        if (b_in.mass()[x2] == 0.0) continue;
        const double in_w = a_in.mass()[x1] * b_in.mass()[x2];
        for (std::size_t y = 0; y < ny; ++y) {
          double best = 0.0;
          for (std::size_t i = 0; i < rb.rule_count(); ++i) {
            const double v = rb.antecedent_a(i).at(x1) *
                             rb.antecedent_b(i).at(x2) *
                             rb.consequent(i).mass()[y];
            best = std::max(best, v);
          }
          out[y] += in_w * best;
        }
      }
    }
  }

  double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (total <= 0.0) {
    throw DisjointSupportError("composed output set has zero total mass");
  }
  for (double& v : out) v /= total;
  return MembershipPdf(rb.output_universe(), std::move(out));
}

}  // namespace sfc
