#pragma once

/// \file rule_engine.hpp
/// Mamdani min/max inference for two-input rule bases with crisp inputs.
///
/// Crisp inputs act as singletons: the matching degree of an antecedent is
/// the term membership at the input value. A rule fires with the minimum of
/// its two matching degrees, its conclusion is clipped at that strength, and
/// the clipped conclusions are united before centroid defuzzification.

#include <algorithm>
#include <array>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spldst/fuzzy_set.hpp"
#include "spldst/linguistic.hpp"

namespace spldst {

enum class Slot { input1, input2, output };

inline const char* slot_name(Slot s) {
  switch (s) {
    case Slot::input1: return "Input_1";
    case Slot::input2: return "Input_2";
    case Slot::output: return "Output";
  }
  return "?";
}

struct RuleAtom {
  Slot variable;
  std::string term;
};

struct Rule {
  std::array<RuleAtom, 2> antecedents;
  RuleAtom conclusion;

  /// "If Input_1 is a and Input_2 is b then Output is c".
  static Rule make(std::string first, std::string second, std::string conclusion) {
    return Rule{{RuleAtom{Slot::input1, std::move(first)}, RuleAtom{Slot::input2, std::move(second)}},
                RuleAtom{Slot::output, std::move(conclusion)}};
  }
};

struct FiringRecord {
  std::size_t rule_index;
  double strength;
  PiecewiseLinearSet clipped;
};

struct InferenceResult {
  PiecewiseLinearSet aggregate;
  std::vector<FiringRecord> trace;
};

class RuleBase {
 public:
  /// Throws std::invalid_argument for rules whose slots repeat, whose
  /// conclusion is not on the output slot, or whose terms are unknown.
  RuleBase(LinguisticVariable input1, LinguisticVariable input2, LinguisticVariable output, std::vector<Rule> rules)
      : input1_(std::move(input1)), input2_(std::move(input2)), output_(std::move(output)), rules_(std::move(rules)) {
    compiled_.reserve(rules_.size());
    for (const auto& r : rules_) {
      const auto& [first, second] = r.antecedents;
      if (first.variable == second.variable) throw std::invalid_argument("rule antecedents must use distinct slots");
      if (first.variable == Slot::output || second.variable == Slot::output) {
        throw std::invalid_argument("rule antecedent cannot target the output slot");
      }
      if (r.conclusion.variable != Slot::output) throw std::invalid_argument("rule conclusion must target the output");
      Compiled c{};
      for (const auto& atom : r.antecedents) {
        if (atom.variable == Slot::input1) {
          c.term1 = input1_.index_of(atom.term);
        } else {
          c.term2 = input2_.index_of(atom.term);
        }
      }
      c.out = output_.index_of(r.conclusion.term);
      compiled_.push_back(c);
    }
  }

  const LinguisticVariable& input1() const { return input1_; }
  const LinguisticVariable& input2() const { return input2_; }
  const LinguisticVariable& output() const { return output_; }
  const std::vector<Rule>& rules() const { return rules_; }

  /// True when the antecedent pairs are exactly the full grid of input terms,
  /// each appearing once.
  bool covers_input_grid() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& c : compiled_) seen.emplace(c.term1, c.term2);
    return seen.size() == compiled_.size() && seen.size() == input1_.size() * input2_.size();
  }

  /// Conclusion term of the rule matching (first, second); throws
  /// std::out_of_range if no rule matches.
  const std::string& lookup(std::string_view first, std::string_view second) const {
    const auto i1 = input1_.index_of(first);
    const auto i2 = input2_.index_of(second);
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
      if (compiled_[i].term1 == i1 && compiled_[i].term2 == i2) return rules_[i].conclusion.term;
    }
    throw std::out_of_range("no rule for (" + std::string(first) + ", " + std::string(second) + ")");
  }

  double firing_strength(std::size_t rule_index, double x1, double x2) const {
    check_input(input1_, x1);
    check_input(input2_, x2);
    const auto& c = compiled_.at(rule_index);
    return strength_unchecked(c, x1, x2);
  }

  /// Union over rules of the conclusion clipped at the firing strength.
  /// Only rules with positive strength contribute and appear in the trace.
  InferenceResult infer(double x1, double x2) const {
    check_input(input1_, x1);
    check_input(input2_, x2);
    InferenceResult result{PiecewiseLinearSet::zero(output_.lower(), output_.upper()), {}};
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
      const auto& c = compiled_[i];
      const double strength = strength_unchecked(c, x1, x2);
      if (strength <= 0.0) continue;
      auto clipped = clip(output_.terms()[c.out].set, strength);
      result.aggregate = set_union(result.aggregate, clipped);
      result.trace.push_back(FiringRecord{i, strength, std::move(clipped)});
    }
    return result;
  }

  /// Crisp output of one two-input block. Throws EmptySetError if no rule fires.
  double evaluate(double x1, double x2) const { return centroid(infer(x1, x2).aggregate); }

 private:
  struct Compiled {
    std::size_t term1;
    std::size_t term2;
    std::size_t out;
  };

  static void check_input(const LinguisticVariable& v, double x) {
    if (!(x >= v.lower() && x <= v.upper())) {
      throw std::out_of_range("input " + std::to_string(x) + " outside [" + std::to_string(v.lower()) + ", " +
                              std::to_string(v.upper()) + "]");
    }
  }

  double strength_unchecked(const Compiled& c, double x1, double x2) const {
    const double m1 = input1_.terms()[c.term1].set.membership(x1);
    const double m2 = input2_.terms()[c.term2].set.membership(x2);
    return std::min(m1, m2);
  }

  LinguisticVariable input1_;
  LinguisticVariable input2_;
  LinguisticVariable output_;
  std::vector<Rule> rules_;
  std::vector<Compiled> compiled_;
};

/// The nine-rule maturity truth table.
inline RuleBase splmat_rule_base() {
  auto in = make_input_variable();
  return RuleBase(in, in, make_output_variable(),
                  {
                      Rule::make("Yes", "Yes", "Very High"),
                      Rule::make("No", "No", "Very Low"),
                      Rule::make("Partial", "Partial", "Low"),
                      Rule::make("Yes", "No", "Medium"),
                      Rule::make("No", "Yes", "Medium"),
                      Rule::make("Yes", "Partial", "High"),
                      Rule::make("Partial", "Yes", "High"),
                      Rule::make("Partial", "No", "Low"),
                      Rule::make("No", "Partial", "Low"),
                  });
}

/// Shared immutable instance of the nine-rule base.
inline const RuleBase& default_rule_base() {
  static const RuleBase rb = splmat_rule_base();
  return rb;
}

/// Crisp output of a block built on the nine-rule base.
inline double evaluate_block(double x1, double x2) { return default_rule_base().evaluate(x1, x2); }

}  // namespace spldst
