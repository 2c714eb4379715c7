#pragma once

/// \file assessment.hpp
/// The 17-question product-line questionnaire and the cascade of two-input
/// blocks that turns answers into activity and overall maturity scores.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spldst/linguistic.hpp"
#include "spldst/rule_engine.hpp"

namespace spldst {

enum class Category { core_asset, product_development, management };

struct Question {
  std::string_view id;
  Category category;
  std::string_view text;
};

inline constexpr std::array<Question, 17> kQuestions{{
    {"q1", Category::core_asset,
     "Are all of the core assets within the software product line repository and are the resulting products "
     "consistent with the scope of the software product line?"},
    {"q2", Category::core_asset,
     "Do all the components present in the core asset repository define the variability mechanism and tailor them "
     "for effective utilization?"},
    {"q3", Category::core_asset,
     "Do all the COTS present or added into the core asset repository satisfy the cost-benefits ratio for the "
     "organization?"},
    {"q4", Category::core_asset,
     "Is the core asset repository constantly updated with the addition of new assets as the product line "
     "progresses?"},
    {"q5", Category::core_asset,
     "Does a version control management system keep track of the core asset development and utilization history?"},
    {"q6", Category::product_development,
     "Do all the products within the software product line share a common architecture?"},
    {"q7", Category::product_development,
     "Does the variation among products remain within the scope of the software product line?"},
    {"q8", Category::product_development,
     "Is every product released from the product line an effective business decision for the organization?"},
    {"q9", Category::product_development,
     "Does the software product line produce a considerable number of products; in other words, do they produce "
     "more than one product?"},
    {"q10", Category::product_development,
     "Does every product released from the software product line meet the qualification criteria of the "
     "organization?"},
    {"q11", Category::management,
     "Is there a configuration management system established to handle the configuration management issues present "
     "in the software product line?"},
    {"q12", Category::management,
     "Is a comprehensive description and analysis of the domain performed for the software product line?"},
    {"q13", Category::management,
     "Does the ROI (Return on Investment) of the software product line meet the organization's financial goal?"},
    {"q14", Category::management,
     "Are the requirements of the software product line clearly defined, analyzed, specified, verified and "
     "managed?"},
    {"q15", Category::management,
     "Does the requirement of the software product line define the fundamental products and their features within "
     "the product line?"},
    {"q16", Category::management,
     "Does the organizational structure support the software product line's concepts and principles?"},
    {"q17", Category::management,
     "Are the essential activities of software product line development performed iteratively?"},
}};

inline const char* category_key(Category c) {
  switch (c) {
    case Category::core_asset: return "core_asset";
    case Category::product_development: return "product_development";
    case Category::management: return "management";
  }
  return "?";
}

/// Leaf names used by the final (category-level) tree.
inline const char* category_leaf(Category c) {
  switch (c) {
    case Category::core_asset: return "core";
    case Category::product_development: return "product";
    case Category::management: return "management";
  }
  return "?";
}

inline std::vector<std::string> question_ids(Category c) {
  std::vector<std::string> ids;
  for (const auto& q : kQuestions) {
    if (q.category == c) ids.emplace_back(q.id);
  }
  return ids;
}

inline bool is_question_id(std::string_view id) {
  return std::any_of(kQuestions.begin(), kQuestions.end(), [id](const Question& q) { return q.id == id; });
}

struct Questionnaire {
  std::map<std::string, double> answers;
  std::optional<std::string> respondent;
};

struct Violation {
  std::string question;  // empty when not tied to a single question
  std::string message;
};

/// Carries every violation found in a questionnaire or override set.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& vs) {
    std::string out = "invalid questionnaire:";
    for (const auto& v : vs) {
      out += " ";
      if (!v.question.empty()) out += v.question + ": ";
      out += v.message + ";";
    }
    return out;
  }

  std::vector<Violation> violations_;
};

namespace detail {

inline std::string range_message(double value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "value %g outside range 0-50", value);
  return buf;
}

inline bool in_score_range(double v) { return std::isfinite(v) && v >= kScoreMin && v <= kScoreMax; }

}  // namespace detail

/// Every missing, unknown or out-of-range answer; empty when valid.
inline std::vector<Violation> validate(const Questionnaire& q) {
  std::vector<Violation> out;
  for (const auto& question : kQuestions) {
    const auto it = q.answers.find(std::string(question.id));
    if (it == q.answers.end()) {
      out.push_back({std::string(question.id), "missing answer"});
    } else if (!detail::in_score_range(it->second)) {
      out.push_back({std::string(question.id), detail::range_message(it->second)});
    }
  }
  for (const auto& [id, value] : q.answers) {
    if (!is_question_id(id)) out.push_back({id, "unknown question id"});
  }
  return out;
}

inline void require_valid(const Questionnaire& q) {
  if (auto vs = validate(q); !vs.empty()) throw ValidationError(std::move(vs));
}

/// Per-question arithmetic mean over respondents.
inline Questionnaire average_respondents(const std::vector<Questionnaire>& rs) {
  if (rs.empty()) throw std::invalid_argument("cannot average an empty respondent list");
  std::vector<Violation> problems;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (auto v : validate(rs[i])) {
      v.message = "respondent " + rs[i].respondent.value_or("#" + std::to_string(i + 1)) + ": " + v.message;
      problems.push_back(std::move(v));
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  if (rs.size() == 1) return rs.front();

  Questionnaire avg;
  for (const auto& question : kQuestions) {
    const std::string id(question.id);
    double sum = 0.0;
    for (const auto& r : rs) sum += r.answers.at(id);
    avg.answers[id] = sum / static_cast<double>(rs.size());
  }
  return avg;
}

/// Full binary tree over named leaves; internal nodes combine their two
/// children with one two-input block.
class ReductionTree {
 public:
  static ReductionTree leaf(std::string id) {
    ReductionTree t;
    t.id_ = std::move(id);
    return t;
  }

  static ReductionTree node(ReductionTree left, ReductionTree right) {
    ReductionTree t;
    t.children_.reserve(2);
    t.children_.push_back(std::move(left));
    t.children_.push_back(std::move(right));
    return t;
  }

  bool is_leaf() const { return children_.empty(); }
  const std::string& id() const { return id_; }
  const ReductionTree& left() const { return children_.at(0); }
  const ReductionTree& right() const { return children_.at(1); }

  std::vector<std::string> leaves() const {
    std::vector<std::string> out;
    collect(out);
    return out;
  }

  std::size_t leaf_count() const { return is_leaf() ? 1 : left().leaf_count() + right().leaf_count(); }

  /// Parenthesized notation, e.g. "(((q1,q2),(q3,q4)),q5)".
  std::string to_string() const {
    if (is_leaf()) return id_;
    return "(" + left().to_string() + "," + right().to_string() + ")";
  }

  /// Same tree with the two children of every node ordered canonically, so
  /// trees equal up to child swaps compare equal.
  ReductionTree canonical() const {
    if (is_leaf()) return *this;
    auto l = left().canonical();
    auto r = right().canonical();
    if (r.to_string() < l.to_string()) std::swap(l, r);
    return node(std::move(l), std::move(r));
  }

  /// Copy with the leaves replaced, left to right, by \p ids.
  ReductionTree relabel(const std::vector<std::string>& ids) const {
    if (ids.size() != leaf_count()) throw std::invalid_argument("relabel: leaf count mismatch");
    std::size_t next = 0;
    return relabel_impl(ids, next);
  }

  friend bool operator==(const ReductionTree& a, const ReductionTree& b) {
    return a.id_ == b.id_ && a.children_ == b.children_;
  }

 private:
  ReductionTree() = default;

  void collect(std::vector<std::string>& out) const {
    if (is_leaf()) {
      out.push_back(id_);
      return;
    }
    left().collect(out);
    right().collect(out);
  }

  ReductionTree relabel_impl(const std::vector<std::string>& ids, std::size_t& next) const {
    if (is_leaf()) return leaf(ids[next++]);
    auto l = left().relabel_impl(ids, next);
    auto r = right().relabel_impl(ids, next);
    return node(std::move(l), std::move(r));
  }

  std::string id_;
  std::vector<ReductionTree> children_;
};

/// Throws std::invalid_argument unless the leaves of \p tree are exactly
/// \p expected (as a set), each appearing once.
inline void check_leaves(const ReductionTree& tree, const std::vector<std::string>& expected, std::string_view what) {
  auto got = tree.leaves();
  std::set<std::string> unique(got.begin(), got.end());
  std::set<std::string> want(expected.begin(), expected.end());
  if (unique.size() != got.size()) {
    throw std::invalid_argument(std::string(what) + " tree repeats a leaf: " + tree.to_string());
  }
  if (unique != want) {
    throw std::invalid_argument(std::string(what) + " tree has the wrong leaves: " + tree.to_string());
  }
}

struct AssessmentConfig {
  ReductionTree core_tree;
  ReductionTree product_tree;
  ReductionTree management_tree;
  ReductionTree final_tree;  // leaves: core, product, management

  void check() const {
    check_leaves(core_tree, question_ids(Category::core_asset), "core asset");
    check_leaves(product_tree, question_ids(Category::product_development), "product development");
    check_leaves(management_tree, question_ids(Category::management), "management");
    check_leaves(final_tree, {"core", "product", "management"}, "final");
  }
};

/// Trees recovered by exhaustive search against the published case studies.
inline AssessmentConfig default_config() {
  using T = ReductionTree;
  auto pair = [](const char* a, const char* b) { return T::node(T::leaf(a), T::leaf(b)); };
  return AssessmentConfig{
      T::node(T::node(pair("q1", "q2"), pair("q3", "q4")), T::leaf("q5")),
      T::node(T::node(pair("q6", "q7"), pair("q8", "q9")), T::leaf("q10")),
      T::node(T::node(pair("q11", "q12"), pair("q13", "q14")), T::node(pair("q15", "q16"), T::leaf("q17"))),
      T::node(pair("core", "product"), T::leaf("management")),
  };
}

struct TraceEntry {
  std::string stage;  // category key or "overall"
  std::string node;   // subtree notation
  double left;
  double right;
  double score;
};

/// Crisp value of \p tree with leaves bound from \p values. Intermediate
/// outputs are fed to the next block as ordinary answers on [0,50].
/// Throws std::invalid_argument for an unbound leaf.
inline double reduce_tree(const std::map<std::string, double>& values, const ReductionTree& tree,
                          std::vector<TraceEntry>* trace = nullptr, std::string_view stage = {}) {
  if (tree.is_leaf()) {
    const auto it = values.find(tree.id());
    if (it == values.end()) throw std::invalid_argument("unbound leaf '" + tree.id() + "'");
    return it->second;
  }
  const double l = reduce_tree(values, tree.left(), trace, stage);
  const double r = reduce_tree(values, tree.right(), trace, stage);
  const double s = evaluate_block(l, r);
  if (trace) trace->push_back(TraceEntry{std::string(stage), tree.to_string(), l, r, s});
  return s;
}

/// Output terms with positive membership at \p score; one term gives its
/// name, two give "<lower> to <higher>".
inline std::string label_of(double score) {
  const auto& out = default_rule_base().output();
  std::vector<std::string_view> active;
  for (const auto& t : out.terms()) {
    if (t.set.membership(score) > 0.0) active.push_back(t.name);
  }
  if (active.empty()) throw std::out_of_range("score outside the output universe");
  std::string label(active.front());
  if (active.size() > 1) {
    label += " to ";
    label += active.back();
  }
  return label;
}

/// 1 (Very Low) .. 5 (Very High): the term of maximal membership, ties to the lower.
inline int level_of(double score) {
  const auto& out = default_rule_base().output();
  int best = 0;
  double best_mu = -1.0;
  for (std::size_t i = 0; i < out.terms().size(); ++i) {
    const double mu = out.terms()[i].set.membership(score);
    if (mu > best_mu) {
      best_mu = mu;
      best = static_cast<int>(i);
    }
  }
  return best + 1;
}

struct ActivityAssessment {
  double score;
  std::string label;
  int level;

  static ActivityAssessment of(double score) { return {score, label_of(score), level_of(score)}; }
};

struct AssessmentReport {
  ActivityAssessment core_asset;
  ActivityAssessment product_development;
  ActivityAssessment management;
  ActivityAssessment overall;
  std::vector<TraceEntry> trace;
};

inline AssessmentReport assess(const Questionnaire& q, const AssessmentConfig& cfg) {
  require_valid(q);
  cfg.check();
  std::vector<TraceEntry> trace;
  const double core = reduce_tree(q.answers, cfg.core_tree, &trace, "core_asset");
  const double product = reduce_tree(q.answers, cfg.product_tree, &trace, "product_development");
  const double management = reduce_tree(q.answers, cfg.management_tree, &trace, "management");
  const std::map<std::string, double> categories{{"core", core}, {"product", product}, {"management", management}};
  const double overall = reduce_tree(categories, cfg.final_tree, &trace, "overall");
  return AssessmentReport{ActivityAssessment::of(core), ActivityAssessment::of(product),
                          ActivityAssessment::of(management), ActivityAssessment::of(overall), std::move(trace)};
}

inline AssessmentReport assess(const Questionnaire& q) { return assess(q, default_config()); }

struct Deltas {
  double core_asset;
  double product_development;
  double management;
  double overall;
};

struct WhatIfResult {
  AssessmentReport base;
  AssessmentReport modified;
  Deltas deltas;
};

inline WhatIfResult whatif(const Questionnaire& base, const std::map<std::string, double>& overrides,
                           const AssessmentConfig& cfg) {
  std::vector<Violation> problems;
  for (const auto& [id, value] : overrides) {
    if (!is_question_id(id)) {
      problems.push_back({id, "unknown question id"});
    } else if (!detail::in_score_range(value)) {
      problems.push_back({id, detail::range_message(value)});
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  Questionnaire changed = base;
  for (const auto& [id, value] : overrides) changed.answers[id] = value;
  auto before = assess(base, cfg);
  auto after = assess(changed, cfg);
  const Deltas d{after.core_asset.score - before.core_asset.score,
                 after.product_development.score - before.product_development.score,
                 after.management.score - before.management.score, after.overall.score - before.overall.score};
  return WhatIfResult{std::move(before), std::move(after), d};
}

/// Round half away from zero to two decimals, formatted "12.34".
inline std::string display(double value) {
  const double r = std::round(value * 100.0) / 100.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", r == 0.0 ? 0.0 : r);
  return buf;
}

}  // namespace spldst
