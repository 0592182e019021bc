#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "levy_ep/errors.hpp"
#include "levy_ep/levy_core.hpp"
#include "levy_ep/rng.hpp"
#include "levy_ep/sde_problem.hpp"
#include "levy_ep/stats.hpp"

using namespace levy_ep;
using cd = std::complex<double>;

namespace {

ExpMixtureJump example_mixture() { return {0.5, {{1.0, 3.0}}, {{1.0, 4.0}}}; }

std::vector<LevyModel> zoo() {
  return {
      LevyModel::brownian(0.3, 1.2),
      LevyModel::compound_poisson(0.1, 1.0, TwoPointJump{-1.0, 1.0, 0.5}),
      LevyModel::compound_poisson(-0.2, 2.0, UniformJump{-0.5, 1.5}, 0.4),
      LevyModel::compound_poisson(0.0, 2.0, NormalJump{0.3, 0.7}),
      LevyModel::compound_poisson(0.05, 1.5, ExpMixtureJump{0.3, {{0.4, 2.0}, {0.6, 5.0}}, {{1.0, 3.0}}}),
      LevyModel::hyperexponential(0.0, 1.0, 1.0, example_mixture()),
  };
}

// Empirical E[exp(i theta X_t)] with the standard error of its modulus error.
struct EmpiricalCf {
  cd value;
  double se;
};

EmpiricalCf empirical_cf(const LevyModel& m, double theta, double t, int n, Rng& rng) {
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    const double x = sample_increment(m, t, rng)(0);
    re[i] = std::cos(theta * x);
    im[i] = std::sin(theta * x);
  }
  const Estimate r = mean_and_se(re), s = mean_and_se(im);
  return {{r.mean, s.mean}, std::hypot(r.se, s.se)};
}

}  // namespace

TEST_CASE("characteristic exponent examples") {
  for (const auto& m : zoo()) CHECK(std::abs(char_exponent(m, 0.0)) == 0.0);

  CHECK(std::abs(char_exponent(LevyModel::brownian(0.0, 1.0), 2.0) - cd(2.0, 0.0)) < 1e-15);

  const LevyModel pm1 = LevyModel::compound_poisson(0.0, 1.0, TwoPointJump{-1.0, 1.0, 0.5});
  // 1 - cos(pi) = 2.
  CHECK(std::abs(char_exponent(pm1, std::numbers::pi) - cd(2.0, 0.0)) < 1e-14);
}

TEST_CASE("exponent matches the empirical characteristic function") {
  Rng rng(17);
  const LevyModel pm1 = LevyModel::compound_poisson(0.0, 1.0, TwoPointJump{-1.0, 1.0, 0.5});
  const double t = 0.1, theta = std::numbers::pi;
  const auto emp = empirical_cf(pm1, theta, t, 1000000, rng);
  CHECK(std::abs(emp.value - std::exp(-t * char_exponent(pm1, theta))) < 4.0 * emp.se);

  for (const auto& m : zoo()) {
    if (!m.capabilities().exact_path_samplable) continue;
    for (double th : {0.3, 1.0, 2.5}) {
      const auto e = empirical_cf(m, th, 0.2, 100000, rng);
      CAPTURE(m.name());
      CAPTURE(th);
      CHECK(std::abs(e.value - std::exp(-0.2 * char_exponent(m, th))) < 4.0 * e.se);
    }
  }
}

TEST_CASE("exponent symmetry and sign") {
  for (const auto& m : zoo()) {
    for (double th = -20.0; th <= 20.0; th += 0.37) {
      const cd a = char_exponent(m, th), b = char_exponent(m, -th);
      CHECK(std::abs(b - std::conj(a)) < 1e-12 * (1.0 + std::abs(a)));
      CHECK(a.real() >= -1e-14);
    }
  }
  // E[X_t] = b t: the drift enters as -i b theta.
  const cd psi = char_exponent(LevyModel::brownian(0.7, 0.0), 1.0);
  CHECK(std::abs(psi - cd(0.0, -0.7)) < 1e-15);
}

TEST_CASE("uniform jump exponent is stable near zero") {
  const LevyModel m = LevyModel::compound_poisson(0.0, 1.0, UniformJump{-0.5, 1.5});
  // Psi ~ theta^2 E[J^2] / 2 - i theta^3 E[J^3] / 6 as theta -> 0.
  const double th = 1e-6;
  const double ej2 = (1.5 * 1.5 * 1.5 + 0.5 * 0.5 * 0.5) / 3.0 / 2.0;
  CHECK(char_exponent(m, th).real() == doctest::Approx(0.5 * th * th * ej2).epsilon(1e-6));
}

TEST_CASE("process moments") {
  const auto bm = process_moments(LevyModel::brownian(0.0, 1.0), 1.0);
  CHECK(bm.mean(0) == 0.0);
  CHECK(bm.covariance(0, 0) == doctest::Approx(1.0));

  const LevyModel cp = LevyModel::compound_poisson(0.0, 2.0, NormalJump{0.0, 1.0});
  const auto m3 = process_moments(cp, 3.0);
  CHECK(m3.mean(0) == 0.0);
  CHECK(m3.covariance(0, 0) == doctest::Approx(6.0));

  for (const auto& m : zoo()) {
    const auto z = process_moments(m, 0.0);
    CHECK(z.mean.norm() == 0.0);
    CHECK(z.covariance.norm() == 0.0);
  }
  CHECK_THROWS_AS(process_moments(cp, -1.0), DomainError);

  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, 0.0, 0.5, 2.0;
  const LevyModel bm2 = LevyModel::brownian(Eigen::Vector2d(0.1, -0.2), sigma);
  const auto c = process_moments(bm2, 2.0);
  CHECK((c.covariance - 2.0 * sigma * sigma.transpose()).norm() < 1e-14);
  CHECK((c.mean - Eigen::Vector2d(0.2, -0.4)).norm() < 1e-15);
}

TEST_CASE("sampled moments agree with closed forms") {
  Rng rng(2024);
  const int n = 100000;
  const double t = 1.5;
  for (const auto& m : zoo()) {
    if (!m.capabilities().exact_path_samplable) continue;
    std::vector<double> x(n), x2(n);
    for (int i = 0; i < n; ++i) x[i] = sample_increment(m, t, rng)(0);
    const auto pm = process_moments(m, t);
    const Estimate mean = mean_and_se(x);
    for (int i = 0; i < n; ++i) x2[i] = (x[i] - pm.mean(0)) * (x[i] - pm.mean(0));
    const Estimate var = mean_and_se(x2);
    CAPTURE(m.name());
    CHECK(std::abs(z_score(mean.mean, pm.mean(0), mean.se)) < 4.0);
    CHECK(std::abs(z_score(var.mean, pm.covariance(0, 0), var.se)) < 4.0);
  }
}

TEST_CASE("declared k") {
  const LevyModel bm = LevyModel::brownian(0.0, 1.0);
  CHECK(declared_k(bm, make_problem(Coefficient::linear(), 1.0, 1.0)) == doctest::Approx(1.0));

  const LevyModel drift3 = LevyModel::brownian(3.0, 1.0);
  CHECK(declared_k(drift3, make_problem(Coefficient::linear(), 1.0, 1.0)) == doctest::Approx(3.0));

  // int x^2 Pi(dx) = rate * E[J^2] = 4.
  const LevyModel cp = LevyModel::compound_poisson(0.0, 4.0, TwoPointJump{-1.0, 1.0, 0.5});
  CHECK(declared_k(cp, make_problem(Coefficient::constant(0.5), 0.5, 1.0)) == doctest::Approx(2.0));
}

TEST_CASE("capabilities") {
  CHECK(LevyModel::brownian(0.0, 1.0).capabilities().exact_path_samplable);
  CHECK(LevyModel::brownian(0.0, 1.0).capabilities().resolvent_samplable);
  const auto cp = LevyModel::compound_poisson(0.0, 1.0, NormalJump{});
  CHECK(cp.capabilities().exact_path_samplable);
  const auto hx = LevyModel::hyperexponential(0.0, 1.0, 1.0, example_mixture());
  CHECK_FALSE(hx.capabilities().exact_path_samplable);
  CHECK(hx.capabilities().resolvent_samplable);
  CHECK(hx.is_scalar());
  CHECK_FALSE(hx.is_continuous());

  Rng rng(1);
  CHECK_THROWS_AS(sample_increment(hx, 1.0, rng), CapabilityError);

  // Degenerate intensity keeps exact sampling.
  CHECK(LevyModel::hyperexponential(0.1, 1.0, 0.0, example_mixture()).capabilities().exact_path_samplable);

  Eigen::MatrixXd mix(2, 2);
  mix << 1.0, 0.5, 0.0, 1.0;
  const auto both = LevyModel::compose(mix, {LevyModel::brownian(0.0, 1.0), hx});
  CHECK(both.dimension() == 2);
  CHECK_FALSE(both.capabilities().exact_path_samplable);
  CHECK_FALSE(both.capabilities().resolvent_samplable);
  const auto exact = LevyModel::compose(mix, {LevyModel::brownian(0.0, 1.0), cp});
  CHECK(exact.capabilities().exact_path_samplable);
  CHECK(exact.capabilities().resolvent_samplable);
}

TEST_CASE("composite exponent is the sum over factors") {
  Eigen::MatrixXd mix(2, 2);
  mix << 1.0, 0.5, -0.3, 2.0;
  const auto a = LevyModel::brownian(0.2, 0.8);
  const auto b = LevyModel::compound_poisson(0.1, 1.0, TwoPointJump{-1.0, 2.0, 0.4});
  const auto x = LevyModel::compose(mix, {a, b});
  const Eigen::Vector2d theta(0.7, -1.1);
  const Eigen::Vector2d proj = mix.transpose() * theta;
  const cd expect = char_exponent(a, proj(0)) + char_exponent(b, proj(1));
  CHECK(std::abs(char_exponent(x, theta) - expect) < 1e-14);
}

TEST_CASE("invalid descriptors") {
  CHECK_THROWS_AS(LevyModel::brownian(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(LevyModel::compound_poisson(0.0, -1.0, NormalJump{}), DomainError);
  CHECK_THROWS_AS(LevyModel::compound_poisson(0.0, 1.0, TwoPointJump{-1.0, 1.0, 1.5}), DomainError);
  CHECK_THROWS_AS(LevyModel::compound_poisson(0.0, 1.0, UniformJump{1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(LevyModel::compound_poisson(0.0, 1.0, NormalJump{0.0, -1.0}), DomainError);
  CHECK_THROWS_AS(LevyModel::hyperexponential(0.0, 1.0, 1.0, {0.5, {{0.5, 3.0}}, {{1.0, 4.0}}}),
                  DomainError);
  CHECK_THROWS_AS(LevyModel::hyperexponential(0.0, 1.0, 1.0, {0.5, {{1.0, -3.0}}, {{1.0, 4.0}}}),
                  DomainError);
  CHECK_THROWS_AS(LevyModel::hyperexponential(0.0, 1.0, -1.0, example_mixture()), DomainError);
  CHECK_THROWS_AS(char_exponent(LevyModel::brownian(0.0, 1.0), INFINITY), DomainError);
}
