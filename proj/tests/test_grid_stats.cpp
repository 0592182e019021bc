#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "levy_ep/errors.hpp"
#include "levy_ep/grid_stats.hpp"
#include "levy_ep/sde_schemes.hpp"
#include "levy_ep/stats.hpp"

using namespace levy_ep;
using Rational = boost::rational<boost::multiprecision::cpp_int>;

namespace {

bool near_z(const Estimate& e, double target, double bound = 4.0) {
  return std::abs(z_score(e.mean, target, e.se)) < bound;
}

double to_double(const Rational& r) {
  return static_cast<double>(boost::multiprecision::cpp_bin_float_50(r.numerator()) /
                             boost::multiprecision::cpp_bin_float_50(r.denominator()));
}

// E[tau] for a rate n/T Poisson grid: given k arrivals in [0, T] the k + 1
// spacings are uniform, so E[tau | k] = T H_{k+1} / (k + 1).
double tau_series(int n, double T) {
  const double mu = n;
  double p = std::exp(-mu), h = 1.0, total = 0.0;
  for (int k = 0; k < 400; ++k) {
    total += p * T * h / (k + 1);
    p *= mu / (k + 1);
    h += 1.0 / (k + 2);
  }
  return total;
}

}  // namespace

TEST_CASE("largest gap examples") {
  const std::vector<double> a{0.0, 0.2, 0.5, 0.9};
  CHECK(largest_gap(a, 1.0) == doctest::Approx(0.4));
  const std::vector<double> past{0.3, 1.5};
  CHECK(largest_gap(past, 1.0) == doctest::Approx(0.7));
  const std::vector<double> none{2.0};
  CHECK(largest_gap(none, 1.0) == 1.0);
  const std::vector<double> tail{0.0, 0.1};
  CHECK(largest_gap(tail, 1.0) == doctest::Approx(0.9));
}

TEST_CASE("harmonic gap mean against exact rationals") {
  Rational h(0);
  for (int m = 1; m <= 100; ++m) {
    h += Rational(1, m);
    const double exact = to_double(h / Rational(m));
    CAPTURE(m);
    CHECK(std::abs(harmonic_gap_mean(m) - exact) <= 4e-16 * exact);
  }
}

TEST_CASE("largest spacing sampler") {
  Rng rng(12);
  CHECK(sample_largest_spacing(1, rng) == 1.0);
  for (int m : {2, 5, 20}) {
    std::vector<double> v(200000);
    for (auto& x : v) {
      x = sample_largest_spacing(m, rng);
      REQUIRE(x >= 1.0 / m);
      REQUIRE(x <= 1.0);
    }
    CAPTURE(m);
    CHECK(near_z(mean_and_se(v), harmonic_gap_mean(m)));
  }
}

TEST_CASE("Mauldon target") {
  // lambda_2 = max(U, 1 - U) is uniform on [1/2, 1].
  const double s = 0.25;
  const double direct = 2.0 / s * (1.0 / (1.0 - s) - 1.0 / (1.0 - 0.5 * s));
  CHECK(mauldon_target(2, s) == doctest::Approx(direct).epsilon(1e-15));
  CHECK(mauldon_target(2, s) == doctest::Approx(32.0 / 21.0).epsilon(1e-15));
  CHECK(mauldon_target(1, -0.3) == doctest::Approx(1.0 / 1.3).epsilon(1e-15));
  CHECK(mauldon_target(7, 0.0) == 1.0);
  CHECK_THROWS_AS(mauldon_target(3, 0.5), DomainError);

  const auto one = mauldon_moment_check(1, 0.3, 10000, 1);
  CHECK(one.empirical == doctest::Approx(1.0 / 0.7).epsilon(1e-12));
  CHECK(one.se < 1e-12);
  for (int m : {2, 5, 10}) {
    for (double sv : {-0.4, 0.25, 0.45}) {
      const auto c = mauldon_moment_check(m, sv, 200000, 99);
      CAPTURE(m);
      CAPTURE(sv);
      CHECK(c.target == mauldon_target(m, sv));
      CHECK(std::abs(c.z) < 5.0);
    }
  }
}

TEST_CASE("Gamma hitting moments") {
  const auto g = gamma_hitting_moments(1, 1.0);
  CHECK(g.second == 1.0);
  CHECK(g.fourth == 9.0);  // E(1 - E)^4 = 1 - 4 + 12 - 24 + 24
  const auto h = gamma_hitting_moments(4, 2.0);
  CHECK(h.second == doctest::Approx(1.0));
  CHECK(h.fourth == doctest::Approx(3.0 * 16.0 * 6.0 / 64.0));
  const auto big = gamma_hitting_moments(10000, 1.0);
  CHECK(big.fourth / (big.second * big.second) == doctest::Approx(3.0).epsilon(0.01));

  const auto mc = gamma_hitting_moments_mc(20, 1.5, 400000, 5);
  const auto exact = gamma_hitting_moments(20, 1.5);
  CHECK(near_z(mc.second, exact.second));
  CHECK(near_z(mc.fourth, exact.fourth));
}

TEST_CASE("exponential raw moments") {
  CHECK_THROWS_AS(exp_raw_moments(0, 3, 1.0), DomainError);
  CHECK(exp_raw_moments(1, 4, 2.0) == doctest::Approx(0.5));
  CHECK(exp_raw_moments(8, 1, 1.0) == doctest::Approx(40320.0));
  const auto v = chunked_samples(10000000, 17, 1, 1, [](Rng& r) { return std::pow(r.exponential(1.0), 8); });
  const Estimate e = mean_and_se(v);
  CHECK(std::abs(e.mean - 40320.0) < 10.0 * e.se);
}

TEST_CASE("mean absolute deviation of the Gamma law") {
  for (int n : {1, 2, 5, 50, 1000, 100000}) {
    for (double T : {0.5, 1.0, 3.0}) {
      const double closed = 2.0 * T * std::exp(n * std::log(n) - n - std::lgamma(n + 1.0));
      CAPTURE(n);
      CAPTURE(T);
      CHECK(gamma_mean_abs_deviation(n, T) == doctest::Approx(closed).epsilon(1e-9));
    }
  }
  CHECK(gamma_mean_abs_deviation(1, 1.0) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("tau matches the spacing series") {
  CHECK(tau_series(1, 1.0) == doctest::Approx(0.7965995992970532).epsilon(1e-14));
  const std::vector<int> ns{1, 2, 8};
  const auto scan = tau_moment_scan(ns, 1.0, 200000, 3);
  REQUIRE(scan.rows.size() == 3);
  for (const auto& row : scan.rows) {
    CAPTURE(row.n);
    CHECK(near_z(row.tau, tau_series(row.n, 1.0)));
    CHECK(row.log_bound == doctest::Approx(std::log(row.n + 1.0) / row.n));
  }
  CHECK(scan.kappa == scan.rows[0].ratio);
  CHECK(scan.tau_slope.slope < 0.0);

  const std::vector<int> one{4};
  CHECK_THROWS_AS(tau_moment_scan(one, 1.0, 2000, 1), DomainError);
  CHECK_THROWS_AS(tau_moment_scan(ns, 1.0, 10, 1), DomainError);
}

TEST_CASE("maximal grid deviation") {
  // n = 1: max_i |t_i - iT| = |t_1 - T|, so the p = 2 moment is T^2.
  const auto c = max_grid_deviation_check(1, 1.0, 2, 400000, 8);
  CHECK(near_z(c.lhs, 1.0));
  CHECK(c.rhs == doctest::Approx(8.0));
  CHECK(c.pass);
  for (int p : {1, 2, 4}) {
    const auto d = max_grid_deviation_check(16, 2.0, p, 20000, 8);
    CAPTURE(p);
    CHECK(d.pass);
    CHECK(d.lhs.mean > 0.0);
  }
  CHECK_THROWS_AS(max_grid_deviation_check(4, 1.0, 3, 1000, 1), DomainError);
}

TEST_CASE("Poisson arrivals are conditionally uniform") {
  Rng rng(44);
  std::vector<double> pooled, reference;
  const double T = 3.0;
  for (int k = 0; k < 40000; ++k) {
    const auto g = build_grid_past(5, T, rng);
    if (g.steps() != 6) continue;  // five arrivals inside [0, T]
    for (std::size_t i = 1; i < g.steps(); ++i) pooled.push_back(g.arrivals[i] / T);
  }
  REQUIRE(pooled.size() > 10000);
  for (std::size_t i = 0; i < 200000; ++i) reference.push_back(rng.uniform());
  const std::size_t na = pooled.size(), nb = reference.size();
  const double d = ks_statistic(pooled, reference);
  CHECK(ks_pvalue(d, na, nb) > 0.001);
}

TEST_CASE("chunked sampling is independent of worker count") {
  auto draw = [](Rng& r) { return r.normal(); };
  const auto a = chunked_samples(10001, 7, 3, 1, draw);
  const auto b = chunked_samples(10001, 7, 3, 4, draw);
  REQUIRE(a.size() == 10001);
  CHECK(a == b);
  CHECK(chunked_samples(10001, 8, 3, 1, draw) != a);
  CHECK(chunked_samples(10001, 7, 4, 1, draw) != a);
  CHECK(mauldon_moment_check(4, 0.2, 20000, 5, 1).empirical ==
        mauldon_moment_check(4, 0.2, 20000, 5, 3).empirical);
}
