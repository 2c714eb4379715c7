#pragma once

/// \file calibration.hpp
/// Exhaustive search over reduction-tree shapes against known case-study
/// results. Leaf order inside each category is fixed; only shapes vary.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spldst/assessment.hpp"

namespace spldst {

/// All full binary trees over \p leaves in the given order (Catalan(n-1) of them).
inline std::vector<ReductionTree> enumerate_trees(const std::vector<std::string>& leaves) {
  if (leaves.empty() || leaves.size() > 8) {
    throw std::invalid_argument("enumerate_trees supports 1 to 8 leaves");
  }
  // shapes[i][j]: all trees over leaves[i..j]
  const std::size_t n = leaves.size();
  std::vector<std::vector<std::vector<ReductionTree>>> shapes(n, std::vector<std::vector<ReductionTree>>(n));
  for (std::size_t i = 0; i < n; ++i) shapes[i][i].push_back(ReductionTree::leaf(leaves[i]));
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len - 1;
      for (std::size_t split = i; split < j; ++split) {
        for (const auto& l : shapes[i][split]) {
          for (const auto& r : shapes[split + 1][j]) shapes[i][j].push_back(ReductionTree::node(l, r));
        }
      }
    }
  }
  return shapes[0][n - 1];
}

/// Shapes over placeholder leaves "1".."n".
inline std::vector<ReductionTree> enumerate_trees(std::size_t n) {
  if (n < 1 || n > 8) throw std::invalid_argument("enumerate_trees supports 1 to 8 leaves");
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= n; ++i) ids.push_back(std::to_string(i));
  return enumerate_trees(ids);
}

/// Every arrangement of the three category leaves, one representative per
/// class of trees equal up to child swaps (blocks are commutative).
inline std::vector<ReductionTree> final_arrangements() {
  const std::array<std::string, 3> names{"core", "product", "management"};
  std::array<std::size_t, 3> order{0, 1, 2};
  std::vector<ReductionTree> out;
  std::set<std::string> seen;
  do {
    const std::vector<std::string> leaves{names[order[0]], names[order[1]], names[order[2]]};
    for (const auto& t : enumerate_trees(leaves)) {
      if (seen.insert(t.canonical().to_string()).second) out.push_back(t);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

struct CalibrationTarget {
  std::string name;
  Questionnaire inputs;
  std::array<double, 4> expected;  // core, product, management, overall
  std::array<std::string, 4> labels;
};

/// Case studies I, III and IV with their published results.
inline std::vector<CalibrationTarget> case_study_targets() {
  auto make = [](std::string name, std::array<double, 17> answers, std::array<double, 4> expected,
                 std::array<std::string, 4> labels) {
    Questionnaire q;
    for (std::size_t i = 0; i < answers.size(); ++i) q.answers["q" + std::to_string(i + 1)] = answers[i];
    return CalibrationTarget{std::move(name), std::move(q), expected, std::move(labels)};
  };
  return {
      make("Case I", {35, 40, 25, 35, 25, 40, 10, 5, 50, 45, 30, 10, 15, 20, 30, 35, 7}, {34.84, 29.72, 8.64, 17.5},
           {"Medium to High", "Medium", "Very Low", "Low"}),
      make("Case III", {32.5, 27.5, 30, 37.5, 40, 37.5, 32.5, 30, 35, 37.5, 32.5, 35, 30, 35, 32.5, 30, 37.5},
           {37.5, 34.84, 17.5, 27.07}, {"High", "Medium to High", "Low", "Medium"}),
      make("Case IV", {40, 30, 35, 30, 20, 40, 35, 35, 30, 30, 25, 20, 30, 35, 35, 35, 35},
           {25.65, 34.84, 17.5, 17.5}, {"Medium", "Medium to High", "Low", "Low"}),
  };
}

struct RankedConfig {
  AssessmentConfig config;
  double residual;
  /// |computed - expected| per target, in order core, product, management, overall.
  std::vector<std::array<double, 4>> errors;
  std::vector<std::array<double, 4>> computed;
};

struct CalibrationResult {
  std::vector<RankedConfig> best;  // every config sharing the minimal residual
  double residual = std::numeric_limits<double>::infinity();
  std::size_t configs_evaluated = 0;
  /// Max residual of every enumerated config, indexed
  /// ((core * n_product + product) * n_management + management) * n_final + final.
  std::vector<double> residuals;
  std::vector<ReductionTree> core_shapes;
  std::vector<ReductionTree> product_shapes;
  std::vector<ReductionTree> management_shapes;
  std::vector<ReductionTree> final_shapes;
};

/// Residual ties are decided with this absolute tolerance.
inline constexpr double kResidualTieTolerance = 1e-9;

/// Scores of \p cfg on every target.
inline std::vector<std::array<double, 4>> evaluate_targets(const AssessmentConfig& cfg,
                                                           const std::vector<CalibrationTarget>& targets) {
  std::vector<std::array<double, 4>> out;
  for (const auto& t : targets) {
    const auto r = assess(t.inputs, cfg);
    out.push_back({r.core_asset.score, r.product_development.score, r.management.score, r.overall.score});
  }
  return out;
}

/// Max absolute error of \p cfg over all scores of all targets.
inline double residual_of(const AssessmentConfig& cfg, const std::vector<CalibrationTarget>& targets) {
  double worst = 0.0;
  const auto scores = evaluate_targets(cfg, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(scores[i][k] - targets[i].expected[k]));
  }
  return worst;
}

/// Exhaustive search over category shapes x final arrangements.
///
/// Category scores depend only on their own tree, so they are computed once
/// per (shape, target); the product loop then evaluates every final
/// arrangement for every combination.
inline CalibrationResult calibrate(const std::vector<CalibrationTarget>& targets) {
  if (targets.empty()) throw std::invalid_argument("calibrate needs at least one target");
  for (const auto& t : targets) require_valid(t.inputs);

  CalibrationResult res;
  res.core_shapes = enumerate_trees(question_ids(Category::core_asset));
  res.product_shapes = enumerate_trees(question_ids(Category::product_development));
  res.management_shapes = enumerate_trees(question_ids(Category::management));
  res.final_shapes = final_arrangements();

  const std::size_t nt = targets.size();
  auto category_scores = [&](const std::vector<ReductionTree>& shapes) {
    std::vector<std::vector<double>> s(shapes.size(), std::vector<double>(nt));
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      for (std::size_t t = 0; t < nt; ++t) s[i][t] = reduce_tree(targets[t].inputs.answers, shapes[i]);
    }
    return s;
  };
  const auto core = category_scores(res.core_shapes);
  const auto product = category_scores(res.product_shapes);
  const auto management = category_scores(res.management_shapes);

  const std::size_t nc = res.core_shapes.size(), np = res.product_shapes.size(),
                    nm = res.management_shapes.size(), nf = res.final_shapes.size();
  res.residuals.assign(nc * np * nm * nf, 0.0);

  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t m = 0; m < nm; ++m) {
        double category_err = 0.0;
        for (std::size_t t = 0; t < nt; ++t) {
          const auto& e = targets[t].expected;
          category_err = std::max({category_err, std::abs(core[c][t] - e[0]), std::abs(product[p][t] - e[1]),
                                   std::abs(management[m][t] - e[2])});
        }
        for (std::size_t f = 0; f < nf; ++f) {
          double err = category_err;
          for (std::size_t t = 0; t < nt; ++t) {
            const std::map<std::string, double> v{
                {"core", core[c][t]}, {"product", product[p][t]}, {"management", management[m][t]}};
            err = std::max(err, std::abs(reduce_tree(v, res.final_shapes[f]) - targets[t].expected[3]));
          }
          res.residuals[((c * np + p) * nm + m) * nf + f] = err;
        }
      }
    }
  }
  res.configs_evaluated = res.residuals.size();
  res.residual = *std::min_element(res.residuals.begin(), res.residuals.end());

  for (std::size_t idx = 0; idx < res.residuals.size(); ++idx) {
    if (res.residuals[idx] > res.residual + kResidualTieTolerance) continue;
    const std::size_t f = idx % nf;
    const std::size_t m = (idx / nf) % nm;
    const std::size_t p = (idx / (nf * nm)) % np;
    const std::size_t c = idx / (nf * nm * np);
    AssessmentConfig cfg{res.core_shapes[c], res.product_shapes[p], res.management_shapes[m], res.final_shapes[f]};
    auto computed = evaluate_targets(cfg, targets);
    RankedConfig rc{std::move(cfg), res.residuals[idx], {}, std::move(computed)};
    for (std::size_t t = 0; t < nt; ++t) {
      std::array<double, 4> e{};
      for (std::size_t k = 0; k < 4; ++k) e[k] = std::abs(rc.computed[t][k] - targets[t].expected[k]);
      rc.errors.push_back(e);
    }
    res.best.push_back(std::move(rc));
  }
  return res;
}

}  // namespace spldst
