#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levy_ep {

/// Sample mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Two-pass mean and standard error, summed in index order.
Estimate mean_and_se(std::span<const double> values);

/// (estimate - target) / se, with 0/0 defined as 0.
double z_score(double estimate, double target, double se);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_lo = 0.0;  // 95% interval
  double ci_hi = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

/// Weighted least squares of log(estimate.mean) on log(x), with delta-method
/// variances (se/mean)^2. Falls back to unweighted when any se is zero.
SlopeFit fit_loglog(std::span<const double> x, std::span<const Estimate> y);

/// Two-sample Kolmogorov-Smirnov statistic sup|F_a - F_b|. Sorts copies.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic p-value of the two-sample KS statistic.
double ks_pvalue(double d, std::size_t n_a, std::size_t n_b);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace levy_ep
