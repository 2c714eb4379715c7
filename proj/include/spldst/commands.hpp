#pragma once

/// \file commands.hpp
/// Implementation of the command-line subcommands, kept separate from
/// argument parsing so tests can drive them directly.
///
/// Exit codes: 0 success, 1 domain or validation error, 2 I/O error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spldst/assessment.hpp"
#include "spldst/calibration.hpp"
#include "spldst/json_io.hpp"
#include "spldst/reliability.hpp"

namespace spldst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

/// Residual bound a calibration must meet to succeed.
inline constexpr double kCalibrationTolerance = 0.05;

/// Environment variable naming a default tree-config file.
inline constexpr const char* kConfigEnv = "SPLMAT_CONFIG";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return ss.str();
}

inline json read_json_file(const std::string& path) {
  const auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Writes to \p path, or to \p fallback when the path is empty.
inline void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("error while writing '" + path + "'");
}

/// Config from an explicit path, else $SPLMAT_CONFIG, else the default trees.
inline AssessmentConfig load_config(const std::optional<std::string>& path) {
  std::optional<std::string> chosen = path;
  if (!chosen) {
    if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') chosen = env;
  }
  if (!chosen) return default_config();
  return config_from_json(read_json_file(*chosen));
}

/// Activity | Result | Linguistic Output | Level, one row per activity.
inline std::string format_table(const AssessmentReport& r) {
  std::ostringstream out;
  auto row = [&out](const std::string& activity, const std::string& result, const std::string& label,
                    const std::string& level) {
    out << std::left << std::setw(42) << activity << std::right << std::setw(8) << result << "  " << std::left
        << std::setw(20) << label << level << '\n';
  };
  row("Activity", "Result", "Linguistic Output", "Level");
  auto act = [&row](const std::string& name, const ActivityAssessment& a) {
    row(name, display(a.score), a.label, std::to_string(a.level));
  };
  act("Core Asset Process Assessment", r.core_asset);
  act("Product Development Process Assessment", r.product_development);
  act("Management Process Assessment", r.management);
  act("Software Product Line Process Assessment", r.overall);
  return out.str();
}

struct AssessOptions {
  std::string input;
  std::optional<std::string> config;
  std::string output;           // empty: stdout
  std::string format = "json";  // json | table
};

inline void print_violations(const ValidationError& e, std::ostream& err) {
  err << "error: invalid questionnaire\n";
  for (const auto& v : e.violations()) {
    err << "  ";
    if (!v.question.empty()) err << v.question << ": ";
    err << v.message << '\n';
  }
}

inline int cmd_assess(const AssessOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.format != "json" && opt.format != "table") {
    err << "error: unknown format '" << opt.format << "' (expected json or table)\n";
    return kExitDomain;
  }
  try {
    const auto cfg = load_config(opt.config);
    const auto respondents = respondents_from_json(read_json_file(opt.input));
    const auto averaged = average_respondents(respondents);
    const auto report = assess(averaged, cfg);
    const std::string text = opt.format == "json" ? report_to_json(report).dump(2) + "\n" : format_table(report);
    write_output(opt.output, text, out);
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    print_violations(e, err);
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

/// \p targets is "builtin" or a path to a targets file.
inline int cmd_calibrate(const std::string& targets, std::ostream& out, std::ostream& err) {
  try {
    const auto list = targets == "builtin" ? case_study_targets() : targets_from_json(read_json_file(targets));
    const auto start = std::chrono::steady_clock::now();
    const auto result = calibrate(list);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    auto doc = calibration_to_json(result, list, kCalibrationTolerance);
    doc["elapsed_seconds"] = elapsed.count();
    out << doc.dump(2) << '\n';
    if (result.residual > kCalibrationTolerance) {
      err << "error: no configuration within tolerance " << kCalibrationTolerance << " (best residual "
          << result.residual << ")\n";
      return kExitDomain;
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    print_violations(e, err);
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

inline int cmd_analyze(const std::string& csv_path, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + csv_path + "'");
    const auto m = read_responses_csv(in);
    const double alpha = cronbach_alpha(m);
    const auto spectrum = eigenvalues_symmetric(correlation_matrix(m));
    out << reliability_to_json(m, alpha, spectrum).dump(2) << '\n';
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

inline int cmd_model(std::ostream& out) {
  out << model_to_json().dump(2) << '\n';
  return kExitOk;
}

}  // namespace spldst::cli
