#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levy_ep/levy_core.hpp"
#include "levy_ep/resolvent_sampler.hpp"
#include "levy_ep/rng.hpp"
#include "levy_ep/sde_problem.hpp"

namespace levy_ep {

/// Arrival times 0 = t_0 < t_1 < ... of a rate n/T Poisson process.
struct RandomGrid {
  std::vector<double> arrivals;  // arrivals[0] == 0
  double rate = 0.0;
  int n = 0;

  std::size_t steps() const { return arrivals.size() - 1; }
  double last() const { return arrivals.back(); }
};

enum class StopRule { fixed_n, enhanced };

enum class Scheme { euler_poisson, enhanced, euler_maruyama };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);
std::vector<std::string> scheme_names();

/// Exactly n arrivals.
RandomGrid build_grid(int n, double T, Rng& rng);
/// Arrivals up to and including the first one strictly after T.
RandomGrid build_grid_past(int n, double T, Rng& rng);
/// Deterministic grid iT/n, i = 0..n.
std::vector<double> uniform_grid(int n, double T);

struct SchemeTrajectory {
  /// Absent when increments came from the Wiener-Hopf route, which does not
  /// reveal the exponential times.
  std::optional<RandomGrid> grid;
  Eigen::MatrixXd states;      // d_Y x (steps + 1)
  Eigen::MatrixXd increments;  // d_X x steps
  Eigen::VectorXd terminal;
  StopRule stop_rule = StopRule::fixed_n;
};

/// Euler recursion y_i = y_{i-1} + a(y_{i-1}) dX_i over the columns of
/// `increments`. Throws NumericalBlowup on a non-finite state.
Eigen::MatrixXd euler_chain(const SdeProblem& problem, const Eigen::MatrixXd& increments);

/// Terminal value of the same recursion without storing the chain.
Eigen::VectorXd euler_terminal(const SdeProblem& problem, const Eigen::MatrixXd& increments);

/// Euler-Poisson chain over n resolvent increments with q = n/T.
SchemeTrajectory run_euler_poisson(const SdeProblem& problem, const ResolventSampler& sampler,
                                   int n, Rng& rng);
SchemeTrajectory run_euler_poisson(const SdeProblem& problem, const LevyModel& model, int n,
                                   Rng& rng);

/// Euler-Poisson chain stopped at the first arrival past T. Needs the joint
/// law of (increment, time), i.e. an exact path sampler.
SchemeTrajectory run_enhanced(const SdeProblem& problem, const LevyModel& model, int n, Rng& rng);

/// Classical Euler scheme on iT/n. `increments` (d_X x n) replaces sampling.
Eigen::VectorXd run_euler_maruyama(const SdeProblem& problem, const LevyModel& model, int n,
                                   Rng& rng,
                                   const std::optional<Eigen::MatrixXd>& increments = std::nullopt);

/// Random interpolation Y^_t = Y^_{iota(t)} + a(Y^_{iota(t)}) (X_t - X_{iota(t)})
/// at sorted query times in [0, t_last]. Intermediate X values are drawn from
/// the Brownian bridge pinned by the consumed increments, so the model must
/// be continuous. Returns d_Y x queries.
Eigen::MatrixXd interpolate_hat(const SchemeTrajectory& trajectory, const SdeProblem& problem,
                                const LevyModel& model, Rng& rng,
                                std::span<const double> query_times);

}  // namespace levy_ep
