#pragma once

/// \file json_io.hpp
/// JSON encodings for questionnaires, trees, configs, reports, the model,
/// calibration results and reliability reports.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spldst/assessment.hpp"
#include "spldst/calibration.hpp"
#include "spldst/reliability.hpp"
#include "spldst/rule_engine.hpp"

namespace spldst {

using json = nlohmann::json;

/// Raised for JSON documents that are well-formed but do not match the
/// expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Trees and configs

inline json tree_to_json(const ReductionTree& t) {
  if (t.is_leaf()) return t.id();
  return json::array({tree_to_json(t.left()), tree_to_json(t.right())});
}

inline ReductionTree tree_from_json(const json& j) {
  if (j.is_string()) return ReductionTree::leaf(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return ReductionTree::node(tree_from_json(j[0]), tree_from_json(j[1]));
  throw SchemaError("tree node must be a string leaf or a two-element array, got " + j.dump());
}

inline json config_to_json(const AssessmentConfig& c) {
  return json{{"coreTree", tree_to_json(c.core_tree)},
              {"productTree", tree_to_json(c.product_tree)},
              {"managementTree", tree_to_json(c.management_tree)},
              {"finalTree", tree_to_json(c.final_tree)}};
}

/// Missing trees fall back to the default configuration. The result is
/// checked for well-formed leaves.
inline AssessmentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("config must be a JSON object");
  auto cfg = default_config();
  try {
    if (j.contains("coreTree")) cfg.core_tree = tree_from_json(j.at("coreTree"));
    if (j.contains("productTree")) cfg.product_tree = tree_from_json(j.at("productTree"));
    if (j.contains("managementTree")) cfg.management_tree = tree_from_json(j.at("managementTree"));
    if (j.contains("finalTree")) cfg.final_tree = tree_from_json(j.at("finalTree"));
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Questionnaires

/// Reads an answers object. Non-numeric values are reported as violations
/// rather than coerced.
inline Questionnaire answers_from_json(const json& answers, std::vector<Violation>& problems) {
  Questionnaire q;
  if (!answers.is_object()) {
    problems.push_back({"", "answers must be a JSON object"});
    return q;
  }
  for (const auto& [id, value] : answers.items()) {
    if (!value.is_number()) {
      problems.push_back({id, "value is not a number"});
      continue;
    }
    q.answers[id] = value.get<double>();
  }
  return q;
}

/// Respondent list from {"respondents":[{"id":..., "answers":{...}}]}.
/// Throws ValidationError listing every non-numeric value or missing field.
inline std::vector<Questionnaire> respondents_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("respondents") || !doc.at("respondents").is_array()) {
    throw SchemaError("expected an object with a \"respondents\" array");
  }
  std::vector<Questionnaire> out;
  std::vector<Violation> problems;
  std::size_t index = 0;
  for (const auto& r : doc.at("respondents")) {
    ++index;
    if (!r.is_object() || !r.contains("answers")) {
      problems.push_back({"", "respondent #" + std::to_string(index) + " has no \"answers\" object"});
      continue;
    }
    std::vector<Violation> local;
    auto q = answers_from_json(r.at("answers"), local);
    if (r.contains("id") && r.at("id").is_string()) q.respondent = r.at("id").get<std::string>();
    for (auto& v : local) {
      v.message = "respondent " + q.respondent.value_or("#" + std::to_string(index)) + ": " + v.message;
      problems.push_back(std::move(v));
    }
    out.push_back(std::move(q));
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  if (out.empty()) throw ValidationError(std::vector<Violation>{{"", "no respondents"}});
  return out;
}

inline json questionnaire_to_json(const Questionnaire& q) {
  json answers = json::object();
  for (const auto& [id, v] : q.answers) answers[id] = v;
  json r{{"answers", answers}};
  if (q.respondent) r["id"] = *q.respondent;
  return r;
}

inline json violations_to_json(const std::vector<Violation>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(json{{"field", v.question}, {"message", v.message}});
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline json activity_to_json(const ActivityAssessment& a) {
  return json{{"score", a.score}, {"display", display(a.score)}, {"label", a.label}, {"level", a.level}};
}

inline json report_to_json(const AssessmentReport& r) {
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back(json{{"stage", t.stage}, {"node", t.node}, {"left", t.left}, {"right", t.right}, {"score", t.score}});
  }
  return json{{"core_asset", activity_to_json(r.core_asset)},
              {"product_development", activity_to_json(r.product_development)},
              {"management", activity_to_json(r.management)},
              {"overall", activity_to_json(r.overall)},
              {"trace", trace}};
}

inline json deltas_to_json(const Deltas& d) {
  auto one = [](double v) { return json{{"delta", v}, {"display", display(v)}}; };
  return json{{"core_asset", one(d.core_asset)},
              {"product_development", one(d.product_development)},
              {"management", one(d.management)},
              {"overall", one(d.overall)}};
}

inline json whatif_to_json(const WhatIfResult& w) {
  return json{{"base", report_to_json(w.base)}, {"modified", report_to_json(w.modified)}, {"deltas", deltas_to_json(w.deltas)}};
}

// ---------------------------------------------------------------------------
// Model

inline json variable_to_json(const LinguisticVariable& v) {
  json terms = json::array();
  for (const auto& t : v.terms()) {
    json bp = json::array();
    for (const auto& p : t.set.breakpoints()) bp.push_back(json::array({p.x, p.mu}));
    json term{{"name", t.name}, {"breakpoints", bp}};
    if (t.shape) term["trapezoid"] = json::array({t.shape->a, t.shape->b, t.shape->c, t.shape->d});
    terms.push_back(std::move(term));
  }
  return json{{"name", v.name()}, {"universe", json::array({v.lower(), v.upper()})}, {"terms", terms}};
}

inline json model_to_json(const RuleBase& rb = default_rule_base()) {
  json rules = json::array();
  for (const auto& r : rb.rules()) {
    json rule;
    for (const auto& a : r.antecedents) rule[a.variable == Slot::input1 ? "input_1" : "input_2"] = a.term;
    rule["output"] = r.conclusion.term;
    rules.push_back(std::move(rule));
  }
  json questions = json::array();
  for (const auto& q : kQuestions) {
    questions.push_back(json{{"id", q.id}, {"category", category_key(q.category)}, {"text", q.text}});
  }
  return json{{"variables", {{"input", variable_to_json(rb.input1())}, {"output", variable_to_json(rb.output())}}},
              {"rules", rules},
              {"questions", questions}};
}

// ---------------------------------------------------------------------------
// Calibration

/// Targets file: {"targets":[{"name":..., "answers":{...}, "expected":{
/// "core_asset":..,"product_development":..,"management":..,"overall":..}}]}.
inline std::vector<CalibrationTarget> targets_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("targets") || !doc.at("targets").is_array()) {
    throw SchemaError("expected an object with a \"targets\" array");
  }
  static constexpr std::array<const char*, 4> keys{"core_asset", "product_development", "management", "overall"};
  std::vector<CalibrationTarget> out;
  std::size_t index = 0;
  for (const auto& t : doc.at("targets")) {
    ++index;
    CalibrationTarget target;
    target.name = t.value("name", "target " + std::to_string(index));
    if (!t.contains("answers")) throw SchemaError(target.name + ": missing \"answers\"");
    std::vector<Violation> problems;
    target.inputs = answers_from_json(t.at("answers"), problems);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    require_valid(target.inputs);
    if (!t.contains("expected") || !t.at("expected").is_object()) {
      throw SchemaError(target.name + ": missing \"expected\" object");
    }
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const auto& e = t.at("expected");
      if (!e.contains(keys[k]) || !e.at(keys[k]).is_number()) {
        throw SchemaError(target.name + ": expected." + keys[k] + " must be a number");
      }
      target.expected[k] = e.at(keys[k]).get<double>();
      if (t.contains("labels") && t.at("labels").contains(keys[k])) {
        target.labels[k] = t.at("labels").at(keys[k]).get<std::string>();
      }
    }
    out.push_back(std::move(target));
  }
  if (out.empty()) throw SchemaError("no calibration targets");
  return out;
}

inline json calibration_to_json(const CalibrationResult& res, const std::vector<CalibrationTarget>& targets,
                                double tolerance) {
  json ties = json::array();
  const auto def = default_config();
  bool default_among_best = false;
  for (const auto& b : res.best) {
    const bool is_default = b.config.core_tree.canonical() == def.core_tree.canonical() &&
                            b.config.product_tree.canonical() == def.product_tree.canonical() &&
                            b.config.management_tree.canonical() == def.management_tree.canonical() &&
                            b.config.final_tree.canonical() == def.final_tree.canonical();
    default_among_best = default_among_best || is_default;
    json per_target = json::array();
    for (std::size_t t = 0; t < targets.size(); ++t) {
      per_target.push_back(json{{"name", targets[t].name},
                                {"expected", targets[t].expected},
                                {"computed", b.computed[t]},
                                {"abs_error", b.errors[t]}});
    }
    ties.push_back(json{{"notation",
                         {{"coreTree", b.config.core_tree.to_string()},
                          {"productTree", b.config.product_tree.to_string()},
                          {"managementTree", b.config.management_tree.to_string()},
                          {"finalTree", b.config.final_tree.to_string()}}},
                        {"trees", config_to_json(b.config)},
                        {"residual", b.residual},
                        {"is_default", is_default},
                        {"targets", per_target}});
  }
  return json{{"residual", res.residual},
              {"tolerance", tolerance},
              {"within_tolerance", res.residual <= tolerance},
              {"configs_evaluated", res.configs_evaluated},
              {"search_space",
               {{"core", res.core_shapes.size()},
                {"product", res.product_shapes.size()},
                {"management", res.management_shapes.size()},
                {"final", res.final_shapes.size()}}},
              {"tie_count", res.best.size()},
              {"default_config_among_best", default_among_best},
              {"best", ties}};
}

// ---------------------------------------------------------------------------
// Reliability

inline json reliability_to_json(const ResponseMatrix& m, double alpha, const EigenReport& e) {
  json scree = json::array();
  for (const auto& [i, v] : e.scree) scree.push_back(json{{"component", i}, {"eigenvalue", v}});
  json display_eigen = json::array();
  for (double v : e.eigenvalues) display_eigen.push_back(display(v));
  return json{{"respondents", m.respondents()},
              {"items", m.items()},
              {"alpha", alpha},
              {"eigenvalues", e.eigenvalues},
              {"retained", e.retained},
              {"retained_count", e.retained.size()},
              {"scree", scree},
              {"display", {{"alpha", display(alpha)}, {"eigenvalues", display_eigen}}}};
}

}  // namespace spldst
