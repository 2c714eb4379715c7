#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "spldst/reliability.hpp"

using namespace spldst;

namespace {

std::vector<std::string> item_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i) names.push_back("q" + std::to_string(i));
  return names;
}

ResponseMatrix random_responses(std::mt19937& rng, std::size_t n, std::size_t k) {
  std::uniform_real_distribution<double> score(0.0, 50.0);
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (auto& r : rows) {
    for (auto& v : r) v = score(rng);
  }
  return ResponseMatrix(item_names(k), rows);
}

Matrix random_symmetric(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      m(i, j) = u(rng);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

// Alpha straight from its definition with a separate two-pass variance.
double alpha_by_definition(const ResponseMatrix& m) {
  const double n = static_cast<double>(m.respondents());
  const double k = static_cast<double>(m.items());
  auto var = [n](const std::vector<double>& v) {
    double s = 0, ss = 0;
    for (double x : v) s += x;
    const double mean = s / n;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / (n - 1);
  };
  double sum_items = 0;
  std::vector<double> totals(m.respondents(), 0.0);
  for (std::size_t j = 0; j < m.items(); ++j) {
    const auto col = m.column(j);
    sum_items += var(col);
    for (std::size_t i = 0; i < col.size(); ++i) totals[i] += col[i];
  }
  return k / (k - 1) * (1 - sum_items / var(totals));
}

}  // namespace

TEST(CronbachAlpha, IdenticalItemsGiveOne) {
  std::vector<std::vector<double>> rows;
  for (double v : {10.0, 20.0, 35.0, 42.0}) rows.push_back(std::vector<double>(17, v));
  EXPECT_NEAR(cronbach_alpha(ResponseMatrix(item_names(17), rows)), 1.0, 1e-12);
}

TEST(CronbachAlpha, ConstantTotalsAreAnError) {
  ResponseMatrix m({"x", "neg_x"}, {{1, -1}, {2, -2}, {3, -3}});
  EXPECT_THROW(cronbach_alpha(m), StatisticsError);
}

TEST(CronbachAlpha, MatchesDefinition) {
  std::mt19937 rng(41);
  for (int i = 0; i < 20; ++i) {
    const auto m = random_responses(rng, 10, 17);
    EXPECT_NEAR(cronbach_alpha(m), alpha_by_definition(m), 1e-10);
  }
}

TEST(CronbachAlpha, Invariances) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_responses(rng, 12, 17);
    const double a = cronbach_alpha(m);
    EXPECT_NEAR(a, cronbach_alpha(m, VarianceDivisor::population), 1e-12);

    std::vector<std::vector<double>> shifted(m.respondents()), scaled(m.respondents());
    for (std::size_t i = 0; i < m.respondents(); ++i) {
      for (std::size_t j = 0; j < m.items(); ++j) {
        shifted[i].push_back(m.at(i, j) + (j == 3 ? 7.5 : 0.0));
        scaled[i].push_back(m.at(i, j) * 2.5);
      }
    }
    EXPECT_NEAR(a, cronbach_alpha(ResponseMatrix(m.item_names(), shifted)), 1e-10);
    EXPECT_NEAR(a, cronbach_alpha(ResponseMatrix(m.item_names(), scaled)), 1e-10);
  }
}

TEST(ResponseMatrix, Shape) {
  EXPECT_THROW(ResponseMatrix({"a", "b"}, {{1, 2}}), std::invalid_argument);
  EXPECT_THROW(ResponseMatrix({"a", "b"}, {{1, 2}, {3}}), std::invalid_argument);
  EXPECT_THROW(ResponseMatrix({"a"}, {{1}, {2}}), std::invalid_argument);
}

TEST(Correlation, Basics) {
  std::mt19937 rng(47);
  auto m = random_responses(rng, 30, 5);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < m.respondents(); ++i) rows.push_back({m.at(i, 0), m.at(i, 0), m.at(i, 1)});
  const auto r = correlation_matrix(ResponseMatrix({"a", "copy", "b"}, rows));
  EXPECT_DOUBLE_EQ(r(0, 0), 1.0);
  EXPECT_NEAR(r(0, 1), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r(1, 2), r(2, 1));
}

TEST(Correlation, IndependentColumnsNearZero) {
  std::mt19937 rng(53);
  const auto r = correlation_matrix(random_responses(rng, 1000, 6));
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      if (i != j) {
        EXPECT_LT(std::abs(r(i, j)), 0.3);
      }
    }
  }
}

TEST(Correlation, ZeroVarianceItemIsNamed) {
  ResponseMatrix m({"q1", "q2", "q3"}, {{1, 5, 2}, {2, 5, 4}, {3, 5, 1}});
  try {
    correlation_matrix(m);
    FAIL() << "expected StatisticsError";
  } catch (const StatisticsError& e) {
    EXPECT_NE(std::string(e.what()).find("q2"), std::string::npos);
  }
}

TEST(Jacobi, Identity) {
  const auto e = eigenvalues_symmetric(Matrix::identity(17));
  ASSERT_EQ(e.eigenvalues.size(), 17U);
  for (double v : e.eigenvalues) EXPECT_EQ(v, 1.0);
  EXPECT_TRUE(kaiser_retained(e).empty());
}

TEST(Jacobi, TwoByTwo) {
  Matrix m(2, 2);
  m(0, 0) = m(1, 1) = 1.0;
  m(0, 1) = m(1, 0) = 0.5;
  const auto e = eigenvalues_symmetric(m);
  EXPECT_NEAR(e.eigenvalues[0], 1.5, 1e-12);
  EXPECT_NEAR(e.eigenvalues[1], 0.5, 1e-12);
  EXPECT_EQ(e.scree[0].first, 1U);
}

TEST(Jacobi, RejectsNonSymmetric) {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(eigenvalues_symmetric(m), std::invalid_argument);
  EXPECT_THROW(eigenvalues_symmetric(Matrix(2, 3)), std::invalid_argument);
}

TEST(Jacobi, TraceReconstructionAndEigenOracle) {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_symmetric(rng, 17);
    const auto e = eigenvalues_symmetric(a);
    double sum = 0;
    for (double v : e.eigenvalues) sum += v;
    EXPECT_NEAR(sum, a.trace(), 1e-8);
    for (std::size_t i = 1; i < e.eigenvalues.size(); ++i) EXPECT_GE(e.eigenvalues[i - 1], e.eigenvalues[i]);

    double worst = 0;
    for (std::size_t i = 0; i < 17; ++i) {
      for (std::size_t j = 0; j < 17; ++j) {
        double r = 0;
        for (std::size_t k = 0; k < 17; ++k) r += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
        worst = std::max(worst, std::abs(r - a(i, j)));
      }
    }
    EXPECT_LT(worst, 1e-8);

    Eigen::MatrixXd em(17, 17);
    for (int i = 0; i < 17; ++i) {
      for (int j = 0; j < 17; ++j) em(i, j) = a(i, j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(em);
    const auto ref = solver.eigenvalues();  // ascending
    for (int i = 0; i < 17; ++i) EXPECT_NEAR(e.eigenvalues[i], ref(16 - i), 1e-9);
  }
}

TEST(Jacobi, CorrelationSpectrumIsNonNegativeAndSumsToK) {
  std::mt19937 rng(61);
  for (std::size_t n : {5U, 20U, 200U}) {
    const auto e = eigenvalues_symmetric(correlation_matrix(random_responses(rng, n, 17)));
    double sum = 0;
    for (double v : e.eigenvalues) {
      sum += v;
      EXPECT_GE(v, -1e-8);
    }
    EXPECT_NEAR(sum, 17.0, 1e-8);
  }
}

TEST(Kaiser, StrictInequality) {
  EXPECT_EQ(kaiser_retained(std::vector<double>{1.69, 1.08, 1.0, 0.5}), (std::vector<double>{1.69, 1.08}));
  EXPECT_TRUE(kaiser_retained(std::vector<double>(17, 1.0)).empty());
  EXPECT_EQ(kaiser_retained(std::vector<double>{2.0, 1.0000001}).size(), 2U);
}

TEST(Csv, ParsesHeaderAndRows) {
  std::istringstream in("q1,q2,q3\n1,2,3\n\n4.5, 5 ,6\n");
  const auto m = read_responses_csv(in);
  EXPECT_EQ(m.items(), 3U);
  EXPECT_EQ(m.respondents(), 2U);
  EXPECT_DOUBLE_EQ(m.at(1, 0), 4.5);
  EXPECT_DOUBLE_EQ(m.at(1, 1), 5.0);
}

TEST(Csv, ReportsLineNumbers) {
  std::istringstream bad_value("q1,q2\n1,2\n3,abc\n");
  try {
    read_responses_csv(bad_value);
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
  std::istringstream short_row("q1,q2\n1,2\n3\n");
  try {
    read_responses_csv(short_row);
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
  std::istringstream empty("");
  EXPECT_THROW(read_responses_csv(empty), CsvError);
}
