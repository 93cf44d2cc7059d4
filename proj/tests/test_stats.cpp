#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/rng.hpp"
#include "paradoxlab/stats.hpp"

using namespace paradoxlab;

TEST_CASE("pairwise_sum matches sequential accumulation") {
  Rng rng(11);
  std::vector<double> v(5000);
  for (auto& x : v) x = rng.unit() - 0.5;
  const double expected = std::accumulate(v.begin(), v.end(), 0.0);
  CHECK(pairwise_sum(v) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pearson is exactly 1 on affine data") {
  std::vector<double> x(50), y(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.1 * static_cast<double>(i + 1);
    y[i] = 3.0 - 2.0 * x[i];
  }
  CHECK(*pearson(x, x) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(*pearson(x, y) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("pearson undefined on constant input") {
  const std::vector<double> c(10, 0.4);
  std::vector<double> x(10);
  std::iota(x.begin(), x.end(), 0.0);
  CHECK_FALSE(pearson(c, x).has_value());
  CHECK_FALSE(pearson(x, c).has_value());
}

TEST_CASE("average ranks share tie groups") {
  const std::vector<double> v{10.0, 20.0, 20.0, 30.0};
  const auto r = average_ranks(v);
  CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});
}

TEST_CASE("spearman is 1 for any strictly monotone map") {
  Rng rng(5);
  std::vector<double> x(200), y(200);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.unit();
    y[i] = std::exp(3.0 * x[i]);  // monotone, nonlinear
  }
  CHECK(*spearman(x, y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ols perfect fit y = 2x reports the infinity sentinel") {
  std::vector<double> x(50), y(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i) * 0.01;
    y[i] = 2.0 * x[i];
  }
  const auto res = ols_regression(x, y);
  CHECK(res.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::isinf(res.f_statistic));
  CHECK(res.p_value == 0.0);
  CHECK(res.n == 50);
}

TEST_CASE("ols slope equals the covariance/variance oracle") {
  Rng rng(77);
  std::vector<double> x(1000), y(1000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal(0.0, 2.0);
    y[i] = 1.5 * x[i] + rng.normal(0.0, 1.0);
  }
  const auto res = ols_regression(x, y);

  // independent two-pass oracle
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    var += (x[i] - mx) * (x[i] - mx);
  }
  CHECK(res.slope == doctest::Approx(cov / var).epsilon(1e-10));
}

TEST_CASE("ols recovers the slope of y = 0.5x + noise") {
  Rng rng(2024);
  std::vector<double> x(10000), y(10000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.unit();
    y[i] = 0.5 * x[i] + rng.normal(0.0, 0.05);
  }
  const auto res = ols_regression(x, y);
  CHECK(res.slope > 0.49);
  CHECK(res.slope < 0.51);
  CHECK(res.p_value < 1e-10);
}

TEST_CASE("ols rejects constant regressor and tiny samples") {
  const std::vector<double> c(10, 1.0);
  std::vector<double> y(10);
  std::iota(y.begin(), y.end(), 0.0);
  CHECK_THROWS_AS(ols_regression(c, y), NumericError);
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(ols_regression(two, two), NumericError);
}

TEST_CASE("incomplete beta matches boost to 1e-10") {
  const double as[] = {0.5, 1.0, 2.5, 10.0, 250.0, 4999.0};
  const double bs[] = {0.5, 1.0, 3.0, 25.0, 0.5};
  const double xs[] = {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-9};
  for (const double a : as) {
    for (const double b : bs) {
      for (const double x : xs) {
        const double ours = incomplete_beta(a, b, x);
        const double ref = boost::math::ibeta(a, b, x);
        CHECK(std::fabs(ours - ref) <= 1e-10);
      }
    }
  }
}

TEST_CASE("f survival matches boost fisher_f") {
  const boost::math::fisher_f dist(1.0, 98.0);
  for (const double f : {0.1, 1.0, 3.84, 10.0, 100.0, 2.222e5}) {
    const double ref = boost::math::cdf(boost::math::complement(dist, f));
    CHECK(std::fabs(f_survival(f, 1.0, 98.0) - ref) <= 1e-10 * std::max(1.0, ref));
  }
  CHECK(f_survival(std::numeric_limits<double>::infinity(), 1.0, 98.0) == 0.0);
}

TEST_CASE("larger F means smaller p at fixed degrees of freedom") {
  double last_p = 1.0;
  for (double f = 0.5; f < 1e6; f *= 4.0) {
    const double p = f_survival(f, 1.0, 48.0);
    CHECK(p < last_p);
    last_p = p;
  }
}

TEST_CASE("percentile with linear interpolation between closest ranks") {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);  // 1..100
  // h = (n-1)p: p=0.025 -> 2.475 -> 3.475; p=0.975 -> 96.525 -> 97.525
  CHECK(percentile_sorted(v, 0.025) == doctest::Approx(3.475).epsilon(1e-12));
  CHECK(percentile_sorted(v, 0.975) == doctest::Approx(97.525).epsilon(1e-12));
  CHECK(percentile_sorted(v, 0.0) == 1.0);
  CHECK(percentile_sorted(v, 1.0) == 100.0);
  CHECK(percentile_sorted(v, 0.5) == doctest::Approx(50.5));

  const std::vector<double> constant(40, 7.25);
  CHECK(percentile_sorted(constant, 0.025) == 7.25);
  CHECK(percentile_sorted(constant, 0.975) == 7.25);
}

TEST_CASE("rng: child seeds decorrelate and draws stay in range") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));

  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.bounded(17);
    CHECK(x < 17);
    CHECK(x == b.bounded(17));  // identical stream for identical seed
  }

  Rng c(123);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = c.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sq / n - 1.0) < 0.02);
}

TEST_CASE("rng shuffle is a permutation") {
  Rng rng(7);
  std::vector<int> v(500);
  std::iota(v.begin(), v.end(), 0);
  auto shuffled = v;
  rng.shuffle(shuffled.begin(), shuffled.end());
  CHECK(shuffled != v);
  std::sort(shuffled.begin(), shuffled.end());
  CHECK(shuffled == v);
}
