#include <doctest.h>

#include <cmath>
#include <vector>

#include "levy_ep/errors.hpp"
#include "levy_ep/levy_core.hpp"
#include "levy_ep/reference_solutions.hpp"
#include "levy_ep/sde_problem.hpp"
#include "levy_ep/sde_schemes.hpp"
#include "levy_ep/stats.hpp"

using namespace levy_ep;

namespace {

bool near_z(const Estimate& e, double target, double bound = 4.0) {
  return std::abs(z_score(e.mean, target, e.se)) < bound;
}

}  // namespace

TEST_CASE("coupled Brownian endpoint moments") {
  const double b = 0.4, sigma = 1.5, T = 2.0;
  const auto model = LevyModel::brownian(b, sigma);
  const std::vector<double> grid{0.0, 0.3, 1.1, 2.5};
  Rng rng(1);
  std::vector<double> x(200000), v(200000);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto p = couple_brownian(grid, T, model, rng);
    x[k] = p.cumulative()(0, static_cast<Eigen::Index>(p.horizon_index));
    v[k] = (x[k] - b * T) * (x[k] - b * T);
  }
  CHECK(near_z(mean_and_se(x), b * T));
  CHECK(near_z(mean_and_se(v), sigma * sigma * T));
}

TEST_CASE("path layout") {
  const auto model = LevyModel::brownian(0.0, 1.0);
  Rng rng(2);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const std::vector<double> extra{0.25, 0.75, 1.0};
  const auto p = couple_path(grid, 1.0, model, rng, extra);
  CHECK(p.times == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(p.horizon_index == 4);
  CHECK(p.grid_index == std::vector<std::size_t>{0, 2, 4});
  CHECK(p.is_grid == std::vector<bool>{true, false, true, false, true});
  CHECK(p.increments.cols() == 4);
  const auto gi = p.grid_increments();
  REQUIRE(gi.cols() == 2);
  CHECK(gi(0, 0) == doctest::Approx(p.increments(0, 0) + p.increments(0, 1)));
  CHECK(gi.sum() == doctest::Approx(p.increments.sum()));
  CHECK(p.index_of(0.75) == 3);
  CHECK_THROWS_AS(p.index_of(0.6), DomainError);
}

TEST_CASE("compound Poisson jump count") {
  const double rate = 3.0, T = 1.0;
  const auto model = LevyModel::compound_poisson(0.0, rate, TwoPointJump{-0.5, 0.5, 0.5});
  const std::vector<double> grid{0.0, 0.4};
  Rng rng(3);
  std::vector<double> count(200000);
  for (auto& c : count) {
    const auto p = couple_compound_poisson(grid, T, model, rng);
    for (const auto& j : p.jumps) {
      CHECK(j.time <= T);
      CHECK(p.index_of(j.time) > 0);
    }
    c = static_cast<double>(p.jumps.size());
  }
  CHECK(near_z(mean_and_se(count), rate * T));
}

TEST_CASE("drift-only path") {
  const auto model = LevyModel::compound_poisson(0.7, 0.0, TwoPointJump{});
  const std::vector<double> grid{0.0, 0.2, 0.9};
  Rng rng(4);
  const auto p = couple_path(grid, 1.0, model, rng);
  CHECK(p.jumps.empty());
  for (Eigen::Index k = 0; k < p.increments.cols(); ++k) {
    const double dt = p.times[static_cast<std::size_t>(k) + 1] - p.times[static_cast<std::size_t>(k)];
    CHECK(p.increments(0, k) == doctest::Approx(0.7 * dt).epsilon(1e-15));
  }
}

TEST_CASE("compensated drift between jumps") {
  // A two-point law with mean 0.2 at rate 2 compensates the drift by -0.4.
  const auto model = LevyModel::compound_poisson(1.0, 2.0, TwoPointJump{-1.0, 1.0, 0.4});
  const std::vector<double> grid{0.0};
  Rng rng(5);
  const auto p = couple_path(grid, 3.0, model, rng);
  std::size_t j = 0;
  for (Eigen::Index k = 0; k < p.increments.cols(); ++k) {
    const double t1 = p.times[static_cast<std::size_t>(k) + 1];
    const double dt = t1 - p.times[static_cast<std::size_t>(k)];
    double expect = 0.6 * dt;
    if (j < p.jumps.size() && p.jumps[j].time == t1) expect += p.jumps[j++].size(0);
    CHECK(p.increments(0, k) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("grid containing T gives one horizon point") {
  const auto model = LevyModel::brownian(0.0, 1.0);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  Rng rng(6);
  const auto p = couple_path(grid, 1.0, model, rng);
  CHECK(p.times.size() == 3);
  CHECK(p.horizon_index == 2);
}

TEST_CASE("closed forms on a hand-built path") {
  const auto model = LevyModel::compound_poisson(0.0, 1.0, TwoPointJump{-0.5, 0.3, 0.5});
  CoupledPath p;
  p.times = {0.0, 0.5, 1.0};
  p.increments.resize(1, 2);
  // Compensated drift of this law is -0.5 * (-0.1) = 0.05 per unit time.
  p.increments << 0.025 + 0.3, 0.025;
  p.is_grid = {true, false, true};
  p.grid_index = {0, 2};
  p.horizon_index = 2;
  p.horizon = 1.0;
  p.jumps.push_back({0.5, Eigen::VectorXd::Constant(1, 0.3)});

  const auto lin = make_problem(Coefficient::linear(2.0), 1.5, 1.0);
  const auto y = exact_solution_path(lin, model, p);
  CHECK(y(0, 0) == 1.5);
  CHECK(y(0, 1) == doctest::Approx(1.5 * std::exp(2.0 * 0.025) * 1.6).epsilon(1e-14));
  CHECK(y(0, 2) == doctest::Approx(1.5 * std::exp(2.0 * 0.05) * 1.6).epsilon(1e-14));

  const auto con = make_problem(Coefficient::constant(-3.0), 1.0, 1.0);
  CHECK(exact_terminal(con, model, p)(0) == doctest::Approx(1.0 - 3.0 * 0.35).epsilon(1e-14));
  const auto zero = make_problem(Coefficient::zero(), 4.0, 1.0);
  CHECK(exact_terminal(zero, model, p)(0) == 4.0);
}

TEST_CASE("geometric Brownian mean") {
  const double b = 0.3, sigma = 0.8, c = 1.2, T = 1.0;
  const auto model = LevyModel::brownian(b, sigma);
  const auto p = make_problem(Coefficient::linear(c), 1.0, T);
  const std::vector<double> grid{0.0};
  Rng rng(7);
  std::vector<double> y(400000);
  for (auto& v : y) {
    v = exact_terminal(p, model, couple_path(grid, T, model, rng))(0);
    CHECK(v > 0.0);
  }
  CHECK(near_z(mean_and_se(y), std::exp(c * b * T)));
}

TEST_CASE("jumps above -1/c keep the linear solution positive") {
  const auto model = LevyModel::compound_poisson(0.0, 5.0, UniformJump{-0.9, 2.0}, 0.5);
  const auto p = make_problem(Coefficient::linear(1.0), 1.0, 2.0);
  const std::vector<double> grid{0.0};
  Rng rng(8);
  for (int k = 0; k < 2000; ++k) {
    const auto path = couple_path(grid, 2.0, model, rng);
    const auto y = exact_solution_path(p, model, path);
    CHECK(y.minCoeff() > 0.0);
  }
}

TEST_CASE("fine Euler approaches the exact path") {
  const auto model = LevyModel::compound_poisson(0.1, 2.0, TwoPointJump{-0.3, 0.2, 0.5}, 0.6);
  const auto p = make_problem(Coefficient::linear(1.0), 1.0, 1.0);
  const std::vector<double> grid{0.0};
  std::vector<double> fine(100000);
  for (std::size_t k = 0; k < fine.size(); ++k) fine[k] = (k + 1) * 1e-5;
  Rng rng(9);
  double sq = 0.0;
  const int paths = 20;
  for (int k = 0; k < paths; ++k) {
    const auto path = couple_path(grid, 1.0, model, rng, fine);
    const double e = exact_terminal(p, model, path)(0);
    const double f = fine_euler_path(p, path)(0, static_cast<Eigen::Index>(path.horizon_index));
    sq += (e - f) * (e - f);
  }
  CHECK(std::sqrt(sq / paths) < 5e-3);
}

TEST_CASE("coupling errors") {
  Rng rng(10);
  const std::vector<double> grid{0.0, 1.0};
  const auto hx = LevyModel::hyperexponential(0.0, 1.0, 1.0, {0.5, {{1.0, 3.0}}, {{1.0, 4.0}}});
  CHECK_THROWS_AS(couple_path(grid, 1.0, hx, rng), CapabilityError);
  const auto jumpy = LevyModel::compound_poisson(0.0, 1.0, TwoPointJump{}, 0.5);
  CHECK_THROWS_AS(couple_brownian(grid, 1.0, jumpy, rng), CapabilityError);
  CHECK_THROWS_AS(couple_compound_poisson(grid, 1.0, jumpy, rng), CapabilityError);
  const auto bm = LevyModel::brownian(0.0, 1.0);
  const std::vector<double> bad_start{0.1, 1.0};
  const std::vector<double> not_increasing{0.0, 0.5, 0.5};
  CHECK_THROWS_AS(couple_path(bad_start, 1.0, bm, rng), DomainError);
  CHECK_THROWS_AS(couple_path(not_increasing, 1.0, bm, rng), DomainError);
  CHECK_THROWS_AS(couple_path(grid, 0.0, bm, rng), DomainError);
  const std::vector<double> neg{-1.0};
  CHECK_THROWS_AS(couple_path(grid, 1.0, bm, rng, neg), DomainError);

  const auto sine = make_problem(Coefficient::sine(1.0, 0.5), 0.0, 1.0);
  CHECK_FALSE(has_exact_solution(sine, bm));
  CHECK_THROWS_AS(exact_solution_path(sine, bm, couple_path(grid, 1.0, bm, rng)), CapabilityError);
  CHECK_FALSE(has_exact_solution(make_problem(Coefficient::zero(), 0.0, 1.0), hx));
}
