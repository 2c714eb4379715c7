#pragma once

/// \file service.hpp
/// HTTP JSON API: POST /assess, POST /whatif, GET /model, GET /health.
///
/// Handlers are plain functions from request body to (status, JSON) so they
/// can be exercised without a socket; register_routes wires them into a
/// cpp-httplib server. Every non-2xx response carries one ApiError body:
/// {"error":{"code":..., "message":..., "details":[{"field":..., "message":...}]}}.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "spldst/assessment.hpp"
#include "spldst/json_io.hpp"

namespace spldst::service {

struct Response {
  int status;
  json body;
};

inline json api_error(const std::string& code, const std::string& message, const std::vector<Violation>& details = {}) {
  json e{{"code", code}, {"message", message}};
  if (!details.empty()) e["details"] = violations_to_json(details);
  return json{{"error", e}};
}

namespace detail {

inline AssessmentConfig request_config(const json& body) {
  if (body.contains("config") && !body.at("config").is_null()) return config_from_json(body.at("config"));
  return default_config();
}

inline Questionnaire request_answers(const json& body, const char* key) {
  if (!body.contains(key)) throw ValidationError(std::vector<Violation>{{key, std::string("missing \"") + key + "\" object"}});
  std::vector<Violation> problems;
  auto q = answers_from_json(body.at(key), problems);
  for (auto& v : validate(q)) problems.push_back(std::move(v));
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return q;
}

template <typename Fn>
Response guarded(const std::string& raw, Fn&& fn) {
  json body;
  try {
    body = json::parse(raw);
  } catch (const json::parse_error& e) {
    return {400, api_error("invalid_json", e.what())};
  }
  if (!body.is_object()) return {400, api_error("invalid_json", "request body must be a JSON object")};
  try {
    return {200, fn(body)};
  } catch (const ValidationError& e) {
    return {400, api_error("validation_error", e.what(), e.violations())};
  } catch (const SchemaError& e) {
    return {400, api_error("invalid_config", e.what())};
  } catch (const json::exception& e) {
    return {400, api_error("invalid_request", e.what())};
  } catch (const std::exception& e) {
    return {500, api_error("internal_error", e.what())};
  }
}

}  // namespace detail

/// Body: {"answers":{"q1":..., ...}, "config": optional tree config}.
inline Response handle_assess(const std::string& raw) {
  return detail::guarded(raw, [](const json& body) {
    const auto q = detail::request_answers(body, "answers");
    return report_to_json(assess(q, detail::request_config(body)));
  });
}

/// Body: {"base":{answers}, "overrides":{partial answers}, "config": optional}.
inline Response handle_whatif(const std::string& raw) {
  return detail::guarded(raw, [](const json& body) {
    const auto base = detail::request_answers(body, "base");
    std::map<std::string, double> overrides;
    if (body.contains("overrides")) {
      std::vector<Violation> problems;
      overrides = answers_from_json(body.at("overrides"), problems).answers;
      if (!problems.empty()) throw ValidationError(std::move(problems));
    }
    return whatif_to_json(whatif(base, overrides, detail::request_config(body)));
  });
}

inline Response handle_model() {
  auto m = model_to_json();
  m["defaultTrees"] = config_to_json(default_config());
  return {200, m};
}

inline Response handle_health() { return {200, json{{"status", "ok"}}}; }

inline void register_routes(httplib::Server& server) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Post("/assess", [send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_assess(req.body));
  });
  server.Post("/whatif", [send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_whatif(req.body));
  });
  server.Get("/model", [send](const httplib::Request&, httplib::Response& res) { send(res, handle_model()); });
  server.Get("/health", [send](const httplib::Request&, httplib::Response& res) { send(res, handle_health()); });
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const auto code = res.status == 404 ? "not_found" : "http_error";
    res.set_content(api_error(code, "no route for " + req.method + " " + req.path).dump(), "application/json");
  });
}

}  // namespace spldst::service
