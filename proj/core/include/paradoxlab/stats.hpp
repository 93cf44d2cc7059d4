#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace paradoxlab {

/// Ordinary least squares of y on x with intercept, plus the F test for
/// slope = 0 against F(1, n-2). A numerically perfect fit reports
/// f_statistic = +infinity and p_value = 0.
struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Deterministic sum: fixed pairwise reduction tree over the buffer, so the
// result does not depend on worker count or accumulation order.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

// Sample Pearson correlation; nullopt when either vector is constant or
// fewer than two observations are given.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based, ties get the mean of their rank range).
std::vector<double> average_ranks(std::span<const double> values);

// Spearman rank correlation with tie correction via average ranks.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// Throws NumericError on a constant regressor or n < 3.
RegressionResult ols_regression(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta I_x(a, b), evaluated with Lentz's continued
// fraction; absolute accuracy around 1e-14 over the tested domain.
double incomplete_beta(double a, double b, double x);

// P(F > f) for an F(d1, d2) variate.
double f_survival(double f, double d1, double d2);

// Quantile of a sorted sample at probability p in [0, 1], linear
// interpolation between closest ranks (Hyndman-Fan type 7: h = (n-1)p).
double percentile_sorted(std::span<const double> sorted, double p);

}  // namespace paradoxlab
