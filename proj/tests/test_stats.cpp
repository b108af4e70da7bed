#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles/oracles.hpp"
#include "support.hpp"
#include "tempus/error.hpp"
#include "tempus/stats.hpp"

using namespace tempus;
using namespace tempus::stats;

namespace {

bool close(double got, long double want, double tol) {
  const long double scale = std::max<long double>(1, std::fabs(want));
  return std::fabs(got - want) <= tol * scale;
}

std::vector<double> normal_sample(std::mt19937_64& rng, std::size_t n, double mu, double sigma) {
  std::normal_distribution<double> d(mu, sigma);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("describe: small examples") {
  const std::vector<double> v = {4, 1, 3, 2};
  const auto d = describe(v);
  CHECK(d.n == 4);
  CHECK(d.mean == 2.5);
  CHECK(d.median == 2.5);
  CHECK(d.q1 == 1.75);
  CHECK(d.q3 == 3.25);
  CHECK(d.iqr == 1.5);
  CHECK(d.min == 1);
  CHECK(d.max == 4);
  CHECK(d.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const auto f = iqr_fences(v);
  CHECK(f.low == -0.5);
  CHECK(f.high == 5.5);

  const std::vector<double> one = {5};
  const auto s = describe(one);
  CHECK(s.median == 5);
  CHECK(s.q1 == 5);
  CHECK(s.q3 == 5);
  CHECK(s.sd == 0);
  CHECK_FALSE(s.sd_defined);
  CHECK_THROWS_AS(describe(std::vector<double>{}), Error);
  CHECK_THROWS_AS(iqr_fences(std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(describe(std::vector<double>{1, std::nan("")}), Error);
}

TEST_CASE("describe agrees with the longhand quantile") {
  auto rng = support::rng(99);
  std::uniform_int_distribution<int> len(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = normal_sample(rng, len(rng), 0.5, 0.2);
    const auto d = describe(v);
    CHECK(d.q1 == oracle::quantile(v, 0.25));
    CHECK(d.median == oracle::quantile(v, 0.5));
    CHECK(d.q3 == oracle::quantile(v, 0.75));
    CHECK(close(d.mean, oracle::mean(v), 1e-14));
  }
}

TEST_CASE("welch t") {
  const std::vector<double> a = {1, 2, 3, 4}, b = {10, 20, 30, 40};
  const auto r = welch_t(a, b);
  const auto o = oracle::welch(a, b);
  CHECK(close(r.statistic, o.t, 1e-12));
  CHECK(close(*r.df, o.df, 1e-12));
  CHECK(close(r.p_two_sided, o.p, 1e-12));
  CHECK(r.method == "welch_t");

  SUBCASE("degenerate") {
    const std::vector<double> c = {2, 2, 2}, d = {2, 2}, e = {3, 3};
    auto same = welch_t(c, d);
    CHECK(same.statistic == 0);
    CHECK(same.p_two_sided == 1);
    CHECK(same.is_degenerate());
    auto apart = welch_t(c, e);
    CHECK(std::isinf(apart.statistic));
    CHECK(apart.statistic < 0);
    CHECK(apart.p_two_sided == 0);
    CHECK_THROWS_AS(welch_t(std::vector<double>{1}, d), Error);
  }
}

TEST_CASE("welch t on randomized fixtures") {
  auto rng = support::rng(2024);
  std::uniform_int_distribution<int> len(2, 40);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = normal_sample(rng, len(rng), 0.4, 0.1 + 0.01 * trial);
    auto b = normal_sample(rng, len(rng), 0.45, 0.2);
    const auto r = welch_t(a, b);
    const auto o = oracle::welch(a, b);
    CHECK(close(r.statistic, o.t, 1e-9));
    CHECK(close(*r.df, o.df, 1e-9));
    CHECK(close(r.p_two_sided, o.p, 1e-9));
  }
}

TEST_CASE("paired t") {
  const std::vector<double> a = {0.31, 0.42, 0.29, 0.55, 0.47}, b = {0.30, 0.35, 0.33, 0.41, 0.40};
  const auto r = paired_t(a, b);
  const auto o = oracle::paired(a, b);
  CHECK(close(r.statistic, o.t, 1e-12));
  CHECK(*r.df == 4);
  CHECK(close(r.p_two_sided, o.p, 1e-12));

  const std::vector<double> c = {1, 2, 3};
  auto zero = paired_t(c, c);
  CHECK(zero.statistic == 0);
  CHECK(zero.p_two_sided == 1);
  const std::vector<double> shifted = {2, 3, 4};
  auto inf = paired_t(shifted, c);
  CHECK(std::isinf(inf.statistic));
  CHECK(inf.p_two_sided == 0);
  CHECK_THROWS_AS(paired_t(c, std::vector<double>{1, 2}), Error);
}

TEST_CASE("mann-whitney: examples") {
  const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  const auto r = mann_whitney(a, b);
  CHECK(r.statistic == 0);
  CHECK(*r.z < 0);
  const auto swapped = mann_whitney(b, a);
  CHECK(swapped.statistic == 9);
  CHECK(r.statistic + swapped.statistic == 9);
  CHECK(r.p_two_sided == doctest::Approx(swapped.p_two_sided));

  const std::vector<double> c = {1, 2};
  const auto tie = mann_whitney(c, c);
  CHECK(tie.statistic == 2);
  CHECK(*tie.z == 0);
  CHECK(tie.p_two_sided == 1);
  CHECK(*tie.effect_size == 0);

  const std::vector<double> flat = {3, 3};
  CHECK(mann_whitney(flat, flat).is_degenerate());
  CHECK_THROWS_AS(mann_whitney(std::vector<double>{}, c), Error);
}

TEST_CASE("mann-whitney: exhaustive enumeration for small samples") {
  auto rng = support::rng(8);
  std::uniform_int_distribution<int> level(0, 3);  // few levels, so ties are common
  for (std::size_t na = 1; na <= 7; ++na) {
    for (std::size_t nb = 1; na + nb <= 8; ++nb) {
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> a(na), b(nb);
        for (auto& x : a) x = level(rng);
        for (auto& x : b) x = level(rng);
        const auto r = mann_whitney(a, b);
        const auto e = oracle::enumerate_u(a, b);
        CHECK(r.statistic == e.u);
        CHECK(r.statistic + mann_whitney(b, a).statistic == static_cast<double>(na * nb));
        if (e.perm_variance > 0) {
          CHECK(close(*r.z, e.z, 1e-9));
          CHECK(close(r.p_two_sided, e.p_normal, 1e-9));
          CHECK(close(*r.effect_size, e.eta_squared, 1e-9));
        } else {
          CHECK(r.is_degenerate());
        }
      }
    }
  }
}

TEST_CASE("t survival") {
  CHECK(close(t_survival(2, 10), oracle::t_two_sided_quadrature(2, 10), 1e-9));
  CHECK(t_survival(0, 5) == 1);
  double prev = 1;
  for (double t = 0.25; t < 20; t += 0.25) {
    const double p = t_survival(t, 7.5);
    CHECK(p < prev);
    CHECK(p == t_survival(-t, 7.5));
    CHECK(close(p, oracle::t_two_sided_boost(t, 7.5), 1e-10));
    prev = p;
  }
  for (double df : {1.0, 2.5, 30.0, 1e4}) {
    CHECK(close(t_survival(1.3, df), oracle::t_two_sided_quadrature(1.3, df), 1e-9));
  }
  CHECK_THROWS_AS(t_survival(1, 0), Error);
  CHECK(normal_survival(0) == 1);
  CHECK(normal_survival(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("incomplete beta") {
  CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(incomplete_beta(2, 3, 0) == 0);
  CHECK(incomplete_beta(2, 3, 1) == 1);
  // I_x(a, b) = 1 - I_{1-x}(b, a)
  CHECK(incomplete_beta(2.5, 4, 0.35) == doctest::Approx(1 - incomplete_beta(4, 2.5, 0.65)).epsilon(1e-13));
  // I_x(1, b) = 1 - (1 - x)^b
  CHECK(incomplete_beta(1, 3, 0.2) == doctest::Approx(1 - std::pow(0.8, 3)).epsilon(1e-14));
  CHECK_THROWS_AS(incomplete_beta(0, 1, 0.5), Error);
  CHECK_THROWS_AS(incomplete_beta(1, 1, 1.5), Error);
}

TEST_CASE("first principal component") {
  SUBCASE("rank one") {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 12; ++i) {
      const double x = i * 0.7 - 3;
      rows.push_back({x, 2 * x + 1, -0.5 * x, 3 * x - 2});
    }
    CHECK(first_pc_variance(Matrix::from_rows(rows)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("independent columns approach 1/p") {
    auto rng = support::rng(17);
    Matrix m(10000, 5);
    std::normal_distribution<double> d;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = d(rng);
    CHECK(std::fabs(first_pc_variance(m) - 0.2) < 0.05);
  }
  SUBCASE("matches Jacobi on a fixed matrix") {
    const std::vector<std::vector<double>> rows = {
        {2, 1, 5, 3}, {4, 3, 6, 1}, {1, 0, 2, 4}, {6, 5, 7, 0}, {3, 3, 3, 3},
        {5, 2, 6, 2}, {0, 1, 1, 6}, {7, 6, 6, 1}, {2, 2, 4, 5}, {4, 4, 5, 2},
    };
    const auto pc = first_principal_component(Matrix::from_rows(rows));
    CHECK(close(pc.variance_fraction, oracle::first_pc_fraction(rows), 1e-8));
    double norm = 0;
    for (double l : pc.loadings) norm += l * l;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("invariant to column rescaling") {
    auto rng = support::rng(4);
    std::vector<std::vector<double>> rows;
    std::normal_distribution<double> d;
    for (int i = 0; i < 30; ++i) {
      const double f = d(rng);
      rows.push_back({f + d(rng), f + 0.5 * d(rng), d(rng), 2 * f + d(rng)});
    }
    auto scaled = rows;
    for (auto& r : scaled) {
      r[0] *= 1000;
      r[2] = r[2] * 0.001 + 50;
    }
    CHECK(std::fabs(first_pc_variance(Matrix::from_rows(rows)) - first_pc_variance(Matrix::from_rows(scaled))) <
          1e-9);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(first_pc_variance(Matrix::from_rows({{1, 2}})), Error);
    CHECK_THROWS_AS(first_pc_variance(Matrix::from_rows({{1, 2}, {1, 3}})), Error);
    CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), Error);
  }
}
