#include "levy_ep/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levy_ep/errors.hpp"

namespace levy_ep {

Estimate mean_and_se(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean_and_se: empty sample");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double z_score(double estimate, double target, double se) {
  const double diff = estimate - target;
  if (se == 0.0) {
    if (diff == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return diff / se;
}

namespace {

SlopeFit weighted_fit(std::span<const double> x, std::span<const double> y,
                      std::span<const double> w, bool known_variance) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || w.size() != n) {
    throw DomainError("line fit needs at least two matching points");
  }
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xm) * (x[i] - xm);
    sxy += w[i] * (x[i] - xm) * (y[i] - ym);
  }
  if (sxx <= 0.0) throw DomainError("line fit: abscissae are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  if (known_variance) {
    fit.slope_se = std::sqrt(1.0 / sxx);
  } else if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += w[i] * r * r;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  fit.ci_lo = fit.slope - 1.96 * fit.slope_se;
  fit.ci_hi = fit.slope + 1.96 * fit.slope_se;
  return fit;
}

}  // namespace

SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
  std::vector<double> w(x.size(), 1.0);
  return weighted_fit(x, y, w, false);
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const Estimate> y) {
  std::vector<double> lx, ly, w;
  bool weighted = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i].mean > 0.0)) {
      throw DomainError("log-log fit needs positive abscissae and estimates");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i].mean));
    const double rel = y[i].se / y[i].mean;
    if (!(rel > 0.0)) weighted = false;
    w.push_back(rel > 0.0 ? 1.0 / (rel * rel) : 1.0);
  }
  if (!weighted) std::fill(w.begin(), w.end(), 1.0);
  return weighted_fit(lx, ly, w, weighted);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n_a, std::size_t n_b) {
  const double ne = static_cast<double>(n_a) * static_cast<double>(n_b) /
                    static_cast<double>(n_a + n_b);
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // The alternating series converges slowly here; use the theta-function form
    // 1 - sqrt(2 pi)/lambda sum_k exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double pi = 3.14159265358979323846;
    const double w = -pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double term = std::exp(w * (2 * k - 1) * (2 * k - 1));
      cdf += term;
      if (term < 1e-17 * cdf) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * cdf, 0.0, 1.0);
  }
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0, c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

}  // namespace levy_ep
