#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "spldst/commands.hpp"

using namespace spldst;
using namespace spldst::cli;

namespace {

const std::string kData = SPLDST_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run assess(const std::string& input, const std::string& format = "json", std::optional<std::string> config = {}) {
  std::ostringstream out, err;
  const int code = cmd_assess(AssessOptions{input, std::move(config), "", format}, out, err);
  return {code, out.str(), err.str()};
}

Run analyze(const std::string& csv) {
  std::ostringstream out, err;
  const int code = cmd_analyze(csv, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() / ("spldst_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = (path_ / name).string();
    std::ofstream(p) << content;
    return p;
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace

TEST(CliAssess, CaseOneJson) {
  const auto r = assess(data("case_study_1.json"));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["core_asset"]["score"].get<double>(), 34.84, 0.01);
  EXPECT_NEAR(j["product_development"]["score"].get<double>(), 29.72, 0.01);
  EXPECT_NEAR(j["management"]["score"].get<double>(), 8.64, 0.01);
  EXPECT_NEAR(j["overall"]["score"].get<double>(), 17.5, 0.01);
}

TEST(CliAssess, RepeatedRunsAreByteIdentical) {
  EXPECT_EQ(assess(data("case_study_3.json")).out, assess(data("case_study_3.json")).out);
}

TEST(CliAssess, MultipleRespondentsAreAveraged) {
  const auto single = json::parse(assess(data("case_study_3.json")).out);
  const auto pair = json::parse(assess(data("case_study_3_respondents.json")).out);
  for (const char* k : {"core_asset", "product_development", "management", "overall"}) {
    EXPECT_NEAR(pair[k]["score"].get<double>(), single[k]["score"].get<double>(), 1e-9) << k;
  }
}

TEST(CliAssess, TableMatchesJsonDisplay) {
  const auto j = json::parse(assess(data("case_study_4.json")).out);
  const auto t = assess(data("case_study_4.json"), "table");
  ASSERT_EQ(t.code, kExitOk);
  EXPECT_NE(t.out.find("Linguistic Output"), std::string::npos);
  std::istringstream lines(t.out);
  std::string line;
  std::getline(lines, line);
  for (const char* k : {"core_asset", "product_development", "management", "overall"}) {
    ASSERT_TRUE(std::getline(lines, line));
    EXPECT_NE(line.find(j[k]["display"].get<std::string>()), std::string::npos) << line;
    EXPECT_NE(line.find(j[k]["label"].get<std::string>()), std::string::npos) << line;
  }
  EXPECT_NE(t.out.find("17.50"), std::string::npos);
}

TEST(CliAssess, OutOfRangeIsDomainError) {
  const auto r = assess(data("invalid_q9.json"));
  EXPECT_EQ(r.code, kExitDomain);
  EXPECT_NE(r.err.find("q9"), std::string::npos);
  EXPECT_NE(r.err.find("0-50"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliAssess, IoAndFormatErrors) {
  EXPECT_EQ(assess(data("does_not_exist.json")).code, kExitIo);
  EXPECT_EQ(assess(data("case_study_1.json"), "xml").code, kExitDomain);
  TempDir dir;
  EXPECT_EQ(assess(dir.file("broken.json", "{\"respondents\": [")).code, kExitDomain);
  EXPECT_EQ(assess(data("case_study_1.json"), "json", data("missing_config.json")).code, kExitIo);
}

TEST(CliAssess, WritesOutputFile) {
  TempDir dir;
  std::ostringstream out, err;
  const auto target = dir.path("report.json");
  ASSERT_EQ(cmd_assess(AssessOptions{data("case_study_2.json"), {}, target, "json"}, out, err), kExitOk);
  EXPECT_TRUE(out.str().empty());
  EXPECT_EQ(read_file(target), assess(data("case_study_2.json")).out);
}

TEST(CliAssess, ConfigFromFileAndEnvironment) {
  TempDir dir;
  auto cfg = config_to_json(default_config());
  EXPECT_EQ(assess(data("case_study_3.json"), "json", data("default_config.json")).out, assess(data("case_study_3.json")).out);

  cfg["finalTree"] = json::array({json::array({"core", "management"}), "product"});
  const auto alt = dir.file("alt.json", cfg.dump());
  const auto explicit_run = assess(data("case_study_3.json"), "json", alt);
  ASSERT_EQ(explicit_run.code, kExitOk);
  EXPECT_NE(explicit_run.out, assess(data("case_study_3.json")).out);

  ::setenv(kConfigEnv, alt.c_str(), 1);
  const auto env_run = assess(data("case_study_3.json"));
  ::unsetenv(kConfigEnv);
  EXPECT_EQ(env_run.out, explicit_run.out);

  cfg["finalTree"] = json::array({"core", "product"});
  EXPECT_EQ(assess(data("case_study_3.json"), "json", dir.file("bad.json", cfg.dump())).code, kExitDomain);
}

TEST(CliCalibrate, BuiltinTargets) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_calibrate("builtin", out, err), kExitOk) << err.str();
  const auto j = json::parse(out.str());
  EXPECT_LE(j["residual"].get<double>(), kCalibrationTolerance);
  EXPECT_TRUE(j["default_config_among_best"].get<bool>());
  EXPECT_EQ(j["configs_evaluated"], 77616);
  EXPECT_EQ(j["tie_count"].get<std::size_t>(), j["best"].size());
}

TEST(CliCalibrate, TargetFiles) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_calibrate(data("targets_case1.json"), out, err), kExitOk) << err.str();
  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_calibrate(data("targets_impossible.json"), out2, err2), kExitDomain);
  EXPECT_NE(err2.str().find("tolerance"), std::string::npos);
  std::ostringstream out3, err3;
  EXPECT_EQ(cmd_calibrate(data("nope.json"), out3, err3), kExitIo);
}

TEST(CliAnalyze, IdenticalItems) {
  const auto r = analyze(data("identical_items.csv"));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["alpha"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["items"], 17);
  EXPECT_EQ(j["retained_count"], 1);
  EXPECT_NEAR(j["eigenvalues"][0].get<double>(), 17.0, 1e-8);
}

TEST(CliAnalyze, UncorrelatedItemsRetainNothing) {
  const auto r = analyze(data("orthogonal_items.csv"));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["retained_count"], 0);
  for (const auto& v : j["eigenvalues"]) EXPECT_NEAR(v.get<double>(), 1.0, 1e-9);
}

TEST(CliAnalyze, Errors) {
  EXPECT_EQ(analyze(data("two_rows.csv")).code, kExitOk);
  const auto bad = analyze(data("malformed.csv"));
  EXPECT_EQ(bad.code, kExitDomain);
  EXPECT_NE(bad.err.find("3"), std::string::npos);
  EXPECT_EQ(analyze(data("missing.csv")).code, kExitIo);

  TempDir dir;
  const auto one_row = analyze(dir.file("one.csv", "q1,q2\n1,2\n"));
  EXPECT_EQ(one_row.code, kExitDomain);
  const auto flat = analyze(dir.file("flat.csv", "q1,q2,q3\n1,5,2\n2,5,4\n3,5,1\n"));
  EXPECT_EQ(flat.code, kExitDomain);
  EXPECT_NE(flat.err.find("q2"), std::string::npos);
}

TEST(CliModel, DescribesVocabularyAndRules) {
  std::ostringstream out;
  ASSERT_EQ(cmd_model(out), kExitOk);
  const auto j = json::parse(out.str());
  EXPECT_EQ(j["rules"].size(), 9U);
  bool partial = false, very_high = false;
  for (const auto& t : j["variables"]["input"]["terms"]) {
    if (t["name"] == "Partial") partial = t["trapezoid"] == json::array({16.5, 21.5, 33, 38});
  }
  for (const auto& t : j["variables"]["output"]["terms"]) {
    if (t["name"] == "Very High") very_high = t["trapezoid"] == json::array({40, 45, 50, 50});
  }
  EXPECT_TRUE(partial);
  EXPECT_TRUE(very_high);
}
