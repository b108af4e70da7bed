#include "tempus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tempus/error.hpp"

namespace tempus::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  fail(ErrorKind::Validation, "incomplete beta continued fraction did not converge");
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(ErrorKind::Validation, std::string(what) + ": non-finite value");
  }
}

}  // namespace

double mean(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::Validation, "mean of empty sample");
  double s = 0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) fail(ErrorKind::Validation, "variance needs at least two values");
  const double m = mean(values);
  double ss = 0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorKind::Validation, "quantile of empty sample");
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Descriptives describe(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::Validation, "describe() needs at least one value");
  require_finite(values, "describe");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Descriptives d;
  d.n = sorted.size();
  d.mean = mean(sorted);
  d.sd_defined = d.n >= 2;
  d.sd = d.sd_defined ? std::sqrt(sample_variance(values)) : 0.0;
  d.min = sorted.front();
  d.max = sorted.back();
  d.median = quantile_sorted(sorted, 0.5);
  d.q1 = quantile_sorted(sorted, 0.25);
  d.q3 = quantile_sorted(sorted, 0.75);
  d.iqr = d.q3 - d.q1;
  return d;
}

double incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0) || !(b > 0)) fail(ErrorKind::Validation, "incomplete beta needs a, b > 0");
  if (x < 0 || x > 1) fail(ErrorKind::Validation, "incomplete beta needs 0 <= x <= 1");
  if (x == 0) return 0.0;
  if (y == 0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

double t_survival(double t, double df) {
  if (!std::isfinite(t)) fail(ErrorKind::Validation, "t_survival: non-finite t");
  if (!(df > 0) || !std::isfinite(df)) fail(ErrorKind::Validation, "t_survival: df must be positive");
  if (t == 0) return 1.0;
  const double t2 = t * t;
  const double x = df / (df + t2);
  const double y = t2 / (df + t2);
  return std::clamp(incomplete_beta(df / 2.0, 0.5, x, y), 0.0, 1.0);
}

double normal_survival(double z) {
  if (std::isnan(z)) fail(ErrorKind::Validation, "normal_survival: NaN");
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

TestReport welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) fail(ErrorKind::Validation, "welch_t needs at least two values per sample");
  require_finite(a, "welch_t");
  require_finite(b, "welch_t");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_variance(a) / na;
  const double vb = sample_variance(b) / nb;
  const double se2 = va + vb;

  TestReport r;
  r.method = "welch_t";
  if (se2 == 0) {
    r.df = na + nb - 2;
    if (ma == mb) {
      r.statistic = 0;
      r.p_two_sided = 1;
      r.degenerate = "zero variance in both samples, equal means";
    } else {
      r.statistic = ma > mb ? kInf : -kInf;
      r.p_two_sided = 0;
      r.degenerate = "zero variance in both samples, unequal means: t is infinite";
    }
    return r;
  }
  r.statistic = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1) + vb * vb / (nb - 1));
  r.p_two_sided = t_survival(r.statistic, *r.df);
  return r;
}

TestReport paired_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorKind::Validation, "paired_t: samples differ in length");
  if (a.size() < 2) fail(ErrorKind::Validation, "paired_t needs at least two pairs");
  require_finite(a, "paired_t");
  require_finite(b, "paired_t");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double n = static_cast<double>(d.size());
  const double md = mean(d);
  const double sd = std::sqrt(sample_variance(d));

  TestReport r;
  r.method = "paired_t";
  r.df = n - 1;
  if (sd == 0) {
    if (md == 0) {
      r.statistic = 0;
      r.p_two_sided = 1;
      r.degenerate = "all differences are zero";
    } else {
      r.statistic = md > 0 ? kInf : -kInf;
      r.p_two_sided = 0;
      r.degenerate = "constant non-zero differences: t is infinite";
    }
    return r;
  }
  r.statistic = md / (sd / std::sqrt(n));
  r.p_two_sided = t_survival(r.statistic, *r.df);
  return r;
}

TestReport mann_whitney(std::span<const double> a, std::span<const double> b,
                        const MannWhitneyOptions& options) {
  if (a.empty() || b.empty()) fail(ErrorKind::Validation, "mann_whitney needs non-empty samples");
  require_finite(a, "mann_whitney");
  require_finite(b, "mann_whitney");

  struct Item {
    double value;
    bool first;
  };
  std::vector<Item> pooled;
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(), [](const Item& x, const Item& y) { return x.value < y.value; });

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  double rank_sum_a = 0;
  double tie_term = 0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].first) rank_sum_a += midrank;
    }
    i = j;
  }

  TestReport r;
  r.method = "mann_whitney_u";
  r.statistic = rank_sum_a - na * (na + 1) / 2.0;
  const double mu = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((n + 1) - tie_term / (n * (n - 1)));
  if (!(var > 0)) {
    r.z = 0;
    r.p_two_sided = 1;
    r.effect_size = 0;
    r.degenerate = "all values identical: zero variance";
    return r;
  }
  double diff = r.statistic - mu;
  if (options.continuity_correction) {
    diff = diff > 0 ? std::max(diff - 0.5, 0.0) : std::min(diff + 0.5, 0.0);
  }
  const double z = diff / std::sqrt(var);
  r.z = z;
  r.p_two_sided = normal_survival(z);
  r.effect_size = z * z / n;
  return r;
}

Fences iqr_fences(std::span<const double> values) {
  if (values.size() < 4) fail(ErrorKind::Validation, "IQR fences need at least four values");
  const auto d = describe(values);
  return {d.q1 - 1.5 * d.iqr, d.q3 + 1.5 * d.iqr};
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) fail(ErrorKind::Validation, "ragged matrix rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix correlation_matrix(const Matrix& data) {
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  if (n < 2 || p < 1) fail(ErrorKind::Validation, "correlation needs at least 2 rows and 1 column");
  Matrix z(n, p);
  for (std::size_t c = 0; c < p; ++c) {
    double m = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (!std::isfinite(data(r, c))) fail(ErrorKind::Validation, "non-finite matrix entry");
      m += data(r, c);
    }
    m /= static_cast<double>(n);
    double ss = 0;
    for (std::size_t r = 0; r < n; ++r) ss += (data(r, c) - m) * (data(r, c) - m);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0)) fail(ErrorKind::Validation, "column " + std::to_string(c) + " is constant");
    for (std::size_t r = 0; r < n; ++r) z(r, c) = (data(r, c) - m) / sd;
  }
  Matrix corr(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0;
      for (std::size_t r = 0; r < n; ++r) s += z(r, i) * z(r, j);
      s /= static_cast<double>(n - 1);
      corr(i, j) = s;
      corr(j, i) = s;
    }
  }
  return corr;
}

PrincipalComponent first_principal_component(const Matrix& data, const PowerIterationOptions& options) {
  const Matrix c = correlation_matrix(data);
  const std::size_t p = c.cols();

  auto multiply = [&](const std::vector<double>& v) {
    std::vector<double> w(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) w[i] += c(i, j) * v[j];
    }
    return w;
  };
  auto norm = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  // All-ones start. If it lies in the null space (possible for rank-deficient
  // sign patterns), fall back to the standard basis vectors in order.
  for (std::size_t start = 0; start <= p; ++start) {
    std::vector<double> v(p, 0.0);
    if (start == 0) {
      std::fill(v.begin(), v.end(), 1.0 / std::sqrt(static_cast<double>(p)));
    } else {
      v[start - 1] = 1.0;
    }
    bool collapsed = false;
    for (int it = 1; it <= options.max_iterations; ++it) {
      auto w = multiply(v);
      const double lambda = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
      double residual = 0;
      for (std::size_t i = 0; i < p; ++i) residual += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
      residual = std::sqrt(residual);
      const double wn = norm(w);
      if (wn < 1e-300) {
        collapsed = true;
        break;
      }
      if (residual <= options.tolerance * std::fabs(lambda)) {
        PrincipalComponent pc;
        pc.eigenvalue = lambda;
        pc.variance_fraction = std::clamp(lambda / static_cast<double>(p), 0.0, 1.0);
        pc.loadings = std::move(v);
        pc.iterations = it;
        return pc;
      }
      for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / wn;
    }
    if (!collapsed) {
      fail(ErrorKind::Validation, "power iteration did not converge in " +
                                      std::to_string(options.max_iterations) + " iterations");
    }
  }
  fail(ErrorKind::Validation, "power iteration collapsed for every start vector");
}

double first_pc_variance(const Matrix& data, const PowerIterationOptions& options) {
  return first_principal_component(data, options).variance_fraction;
}

nlohmann::json to_json(const Descriptives& d) {
  return {{"n", d.n},       {"mean", d.mean},     {"sd", d.sd},   {"sd_defined", d.sd_defined},
          {"min", d.min},   {"max", d.max},       {"median", d.median},
          {"q1", d.q1},     {"q3", d.q3},         {"iqr", d.iqr}};
}

nlohmann::json to_json(const TestReport& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  };
  nlohmann::json j = {{"method", r.method}, {"statistic", num(r.statistic)}, {"p_two_sided", r.p_two_sided}};
  if (r.df) j["df"] = num(*r.df);
  if (r.z) j["z"] = num(*r.z);
  if (r.effect_size) j["effect_size"] = *r.effect_size;
  if (r.is_degenerate()) j["degenerate"] = r.degenerate;
  return j;
}

}  // namespace tempus::stats
