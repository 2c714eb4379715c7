#pragma once

/// \file linguistic.hpp
/// Linguistic variables and the fixed input/output vocabularies of the tool.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spldst/fuzzy_set.hpp"

namespace spldst {

inline constexpr double kScoreMin = 0.0;
inline constexpr double kScoreMax = 50.0;

struct Term {
  std::string name;
  PiecewiseLinearSet set;
  std::optional<Trapezoid> shape;  // present when built from a trapezoid
};

class LinguisticVariable {
 public:
  /// Throws std::invalid_argument when a term's support leaves the universe,
  /// term names repeat, or some point of the universe has zero membership in
  /// every term.
  LinguisticVariable(std::string name, double lo, double hi, std::vector<Term> terms)
      : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms)) {
    if (!(lo_ < hi_)) throw std::invalid_argument("universe must have lo < hi");
    if (terms_.empty()) throw std::invalid_argument("linguistic variable '" + name_ + "' has no terms");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      for (std::size_t j = 0; j < i; ++j) {
        if (terms_[j].name == t.name) throw std::invalid_argument("duplicate term '" + t.name + "'");
      }
      for (const auto& p : t.set.breakpoints()) {
        if (p.mu > 0.0 && (p.x < lo_ || p.x > hi_)) {
          throw std::invalid_argument("term '" + t.name + "' has support outside the universe");
        }
      }
      if ((t.set.lower() > lo_ && t.set.breakpoints().front().mu > 0.0) ||
          (t.set.upper() < hi_ && t.set.breakpoints().back().mu > 0.0)) {
        throw std::invalid_argument("term '" + t.name + "' has support outside the universe");
      }
    }
    check_coverage();
  }

  /// Builds a variable whose terms are trapezoids on [lo, hi].
  static LinguisticVariable from_trapezoids(std::string name, double lo, double hi,
                                            const std::vector<std::pair<std::string, Trapezoid>>& shapes) {
    std::vector<Term> terms;
    terms.reserve(shapes.size());
    for (const auto& [term_name, trap] : shapes) {
      terms.push_back(Term{term_name, trap.to_set(lo, hi), trap});
    }
    return LinguisticVariable(std::move(name), lo, hi, std::move(terms));
  }

  const std::string& name() const { return name_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Index of \p term_name, or std::nullopt if the variable has no such term.
  std::optional<std::size_t> find(std::string_view term_name) const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].name == term_name) return i;
    }
    return std::nullopt;
  }

  std::size_t index_of(std::string_view term_name) const {
    if (auto i = find(term_name)) return *i;
    throw std::invalid_argument("variable '" + name_ + "' has no term '" + std::string(term_name) + "'");
  }

  const Term& term(std::string_view term_name) const { return terms_[index_of(term_name)]; }

  double membership(std::string_view term_name, double x) const { return term(term_name).set.membership(x); }

 private:
  // The pointwise maximum over terms is linear between consecutive merged
  // breakpoints, so positivity at those points implies positivity everywhere.
  void check_coverage() const {
    std::vector<double> xs{lo_, hi_};
    for (const auto& t : terms_) {
      for (const auto& p : t.set.breakpoints()) {
        if (p.x >= lo_ && p.x <= hi_) xs.push_back(p.x);
      }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) {
      const bool covered =
          std::any_of(terms_.begin(), terms_.end(), [x](const Term& t) { return t.set.membership(x) > 0.0; });
      if (!covered) {
        throw std::invalid_argument("variable '" + name_ + "' leaves x=" + std::to_string(x) + " uncovered");
      }
    }
  }

  std::string name_;
  double lo_;
  double hi_;
  std::vector<Term> terms_;
};

/// Answer vocabulary: No / Partial / Yes on [0,50].
inline LinguisticVariable make_input_variable() {
  return LinguisticVariable::from_trapezoids("input", kScoreMin, kScoreMax,
                                             {
                                                 {"No", Trapezoid(0.0, 0.0, 16.5, 21.5)},
                                                 {"Partial", Trapezoid(16.5, 21.5, 33.0, 38.0)},
                                                 {"Yes", Trapezoid(33.0, 38.0, 50.0, 50.0)},
                                             });
}

/// Maturity vocabulary: Very Low .. Very High on [0,50], in ascending order.
inline LinguisticVariable make_output_variable() {
  return LinguisticVariable::from_trapezoids("output", kScoreMin, kScoreMax,
                                             {
                                                 {"Very Low", Trapezoid(0.0, 0.0, 10.0, 15.0)},
                                                 {"Low", Trapezoid(10.0, 15.0, 20.0, 25.0)},
                                                 {"Medium", Trapezoid(20.0, 25.0, 30.0, 35.0)},
                                                 {"High", Trapezoid(30.0, 35.0, 40.0, 45.0)},
                                                 {"Very High", Trapezoid(40.0, 45.0, 50.0, 50.0)},
                                             });
}

}  // namespace spldst
