#pragma once

/// \file reliability.hpp
/// Internal-consistency and construct-validity statistics for questionnaire
/// responses: Cronbach's alpha, Pearson item correlations, and the spectrum
/// of the correlation matrix via cyclic Jacobi rotations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spldst {

/// Dense row-major square or rectangular matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Respondents x items score table.
class ResponseMatrix {
 public:
  ResponseMatrix(std::vector<std::string> items, std::vector<std::vector<double>> rows)
      : items_(std::move(items)), rows_(std::move(rows)) {
    if (items_.size() < 2) throw std::invalid_argument("response matrix needs at least two items");
    if (rows_.size() < 2) throw std::invalid_argument("response matrix needs at least two respondents");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].size() != items_.size()) {
        throw std::invalid_argument("respondent " + std::to_string(r + 1) + " has " + std::to_string(rows_[r].size()) +
                                    " values, expected " + std::to_string(items_.size()));
      }
      for (double v : rows_[r]) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite score in row " + std::to_string(r + 1));
      }
    }
  }

  std::size_t respondents() const { return rows_.size(); }
  std::size_t items() const { return items_.size(); }
  const std::vector<std::string>& item_names() const { return items_; }
  double at(std::size_t respondent, std::size_t item) const { return rows_[respondent][item]; }
  std::vector<double> column(std::size_t item) const {
    std::vector<double> c;
    c.reserve(rows_.size());
    for (const auto& r : rows_) c.push_back(r[item]);
    return c;
  }

 private:
  std::vector<std::string> items_;
  std::vector<std::vector<double>> rows_;
};

namespace detail {

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sum of squared deviations divided by \p divisor_offset subtracted from n.
inline double variance(const std::vector<double>& v, std::size_t divisor_offset = 1) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - divisor_offset);
}

}  // namespace detail

/// Variance divisor: sample (n-1) or population (n).
enum class VarianceDivisor { sample, population };

/// (k/(k-1)) * (1 - sum of item variances / variance of row totals).
/// Throws StatisticsError when the row totals do not vary.
inline double cronbach_alpha(const ResponseMatrix& m, VarianceDivisor divisor = VarianceDivisor::sample) {
  const std::size_t offset = divisor == VarianceDivisor::sample ? 1 : 0;
  const auto k = static_cast<double>(m.items());
  double item_var = 0.0;
  for (std::size_t j = 0; j < m.items(); ++j) item_var += detail::variance(m.column(j), offset);
  std::vector<double> totals(m.respondents(), 0.0);
  for (std::size_t i = 0; i < m.respondents(); ++i) {
    for (std::size_t j = 0; j < m.items(); ++j) totals[i] += m.at(i, j);
  }
  const double total_var = detail::variance(totals, offset);
  if (!(total_var > 0.0)) throw StatisticsError("total score variance is zero; alpha is undefined");
  return (k / (k - 1.0)) * (1.0 - item_var / total_var);
}

/// Pearson correlations between items, with an exact unit diagonal.
/// Throws StatisticsError naming the first item with zero variance.
inline Matrix correlation_matrix(const ResponseMatrix& m) {
  const std::size_t k = m.items();
  std::vector<std::vector<double>> centered(k);
  std::vector<double> norms(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto col = m.column(j);
    const double mu = detail::mean(col);
    double ss = 0.0;
    for (double& x : col) {
      x -= mu;
      ss += x * x;
    }
    if (!(ss > 0.0)) throw StatisticsError("item '" + m.item_names()[j] + "' has zero variance");
    norms[j] = std::sqrt(ss);
    centered[j] = std::move(col);
  }
  Matrix r(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    r(a, a) = 1.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < centered[a].size(); ++i) s += centered[a][i] * centered[b][i];
      const double v = std::clamp(s / (norms[a] * norms[b]), -1.0, 1.0);
      r(a, b) = v;
      r(b, a) = v;
    }
  }
  return r;
}

struct EigenReport {
  std::vector<double> eigenvalues;  // descending
  std::vector<double> retained;     // Kaiser: strictly greater than one
  std::vector<std::pair<std::size_t, double>> scree;  // (1-based index, eigenvalue)
  Matrix eigenvectors;  // column i pairs with eigenvalues[i]
  std::size_t sweeps = 0;
};

inline std::vector<double> kaiser_retained(const std::vector<double>& eigenvalues) {
  std::vector<double> out;
  for (double v : eigenvalues) {
    if (v > 1.0) out.push_back(v);
  }
  return out;
}

inline std::vector<double> kaiser_retained(const EigenReport& e) { return kaiser_retained(e.eigenvalues); }

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, iterated
/// until the off-diagonal Frobenius norm drops below 1e-12. Throws std::invalid_argument when the
/// input is not square or not symmetric within 1e-10.
inline EigenReport eigenvalues_symmetric(const Matrix& input) {
  const std::size_t n = input.rows();
  if (n == 0 || input.cols() != n) throw std::invalid_argument("eigenvalues_symmetric needs a square matrix");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > 1e-10) {
        throw std::invalid_argument("matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ")");
      }
    }
  }

  Matrix a = input;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = s;
      a(j, i) = s;
    }
  }
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };
  constexpr double tol = 1e-12;

  EigenReport report;
  constexpr std::size_t kMaxSweeps = 100;
  while (off_norm() >= tol) {
    if (report.sweeps++ == kMaxSweeps) throw std::runtime_error("Jacobi iteration did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that annihilates a(p,q), using the smaller root.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  report.eigenvectors = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    report.eigenvalues.push_back(a(order[i], order[i]));
    for (std::size_t k = 0; k < n; ++k) report.eigenvectors(k, i) = v(k, order[i]);
    report.scree.emplace_back(i + 1, report.eigenvalues.back());
  }
  report.retained = kaiser_retained(report.eigenvalues);
  return report;
}

/// Thrown by read_responses_csv with the offending 1-based line number.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Header row of item names, then one comma-separated row per respondent.
/// Blank lines are skipped.
inline ResponseMatrix read_responses_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  };

  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    for (auto& c : split(line)) header.push_back(trim(c));
  }
  if (header.empty()) throw CsvError(lineno == 0 ? 1 : lineno, "missing header row");
  for (const auto& h : header) {
    if (h.empty()) throw CsvError(lineno, "empty column name in header");
  }

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw CsvError(lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const auto text = trim(cells[j]);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (text.empty() || used != text.size() || !std::isfinite(value)) {
        throw CsvError(lineno, "column '" + header[j] + "': not a number: '" + text + "'");
      }
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  try {
    return ResponseMatrix(std::move(header), std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw CsvError(lineno, e.what());
  }
}

}  // namespace spldst
