#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

// Self-contained statistics kernel. All functions are pure.
namespace tempus::stats {

// Quartiles use linear interpolation between order statistics at zero-based
// position (n - 1) * q.
struct Descriptives {
  std::size_t n = 0;
  double mean = 0;
  double sd = 0;  // sample (n - 1); reported as 0 when n == 1
  bool sd_defined = false;
  double min = 0;
  double max = 0;
  double median = 0;
  double q1 = 0;
  double q3 = 0;
  double iqr = 0;
};

Descriptives describe(std::span<const double> values);

// `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double q);

double mean(std::span<const double> values);
// Sample variance with n - 1 denominator; requires n >= 2.
double sample_variance(std::span<const double> values);

struct TestReport {
  std::string method;  // "welch_t", "paired_t", "mann_whitney_u"
  double statistic = 0;  // t, or U of the first sample
  std::optional<double> df;
  std::optional<double> z;
  double p_two_sided = 1;
  std::optional<double> effect_size;  // eta squared = z^2 / N
  std::string degenerate;  // empty unless a degenerate path was taken

  bool is_degenerate() const { return !degenerate.empty(); }
};

TestReport welch_t(std::span<const double> a, std::span<const double> b);
TestReport paired_t(std::span<const double> a, std::span<const double> b);

struct MannWhitneyOptions {
  bool continuity_correction = false;
};

// Midranks for ties, normal approximation with tie-corrected variance.
TestReport mann_whitney(std::span<const double> a, std::span<const double> b,
                        const MannWhitneyOptions& options = {});

struct Fences {
  double low = 0;
  double high = 0;
};

// Q1 - 1.5 IQR and Q3 + 1.5 IQR; requires n >= 4.
Fences iqr_fences(std::span<const double> values);

// Regularized incomplete beta I_x(a, b). `y` must equal 1 - x; passing it
// separately avoids cancellation when x is close to 1.
double incomplete_beta(double a, double b, double x, double y);
double incomplete_beta(double a, double b, double x);

// Two-sided p-value of Student's t.
double t_survival(double t, double df);
// Two-sided p-value of a standard normal deviate.
double normal_survival(double z);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Pearson correlation of the columns; fails on a constant column.
Matrix correlation_matrix(const Matrix& data);

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

struct PrincipalComponent {
  double eigenvalue = 0;
  double variance_fraction = 0;  // eigenvalue / number of columns
  std::vector<double> loadings;  // unit eigenvector
  int iterations = 0;
};

// Dominant eigenpair of the correlation matrix by power iteration from the
// all-ones vector.
PrincipalComponent first_principal_component(const Matrix& data,
                                             const PowerIterationOptions& options = {});
double first_pc_variance(const Matrix& data, const PowerIterationOptions& options = {});

nlohmann::json to_json(const Descriptives& d);
nlohmann::json to_json(const TestReport& r);

}  // namespace tempus::stats
