#include "levy_ep/sde_schemes.hpp"

#include <algorithm>
#include <cmath>

#include "levy_ep/errors.hpp"

namespace levy_ep {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::euler_poisson:
      return "euler_poisson";
    case Scheme::enhanced:
      return "enhanced";
    case Scheme::euler_maruyama:
      return "euler_maruyama";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "euler_poisson") return Scheme::euler_poisson;
  if (name == "enhanced") return Scheme::enhanced;
  if (name == "euler_maruyama") return Scheme::euler_maruyama;
  throw DomainError("unknown scheme '" + name + "'");
}

std::vector<std::string> scheme_names() { return {"euler_poisson", "enhanced", "euler_maruyama"}; }

namespace {

void check_grid_args(int n, double T) {
  if (n < 1) throw DomainError("grid: n must be at least 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("grid: T must be positive");
}

void check_dims(const SdeProblem& problem, const LevyModel& model) {
  if (problem.a.dim_x() != model.dimension()) {
    throw DomainError("coefficient column count does not match the driver dimension");
  }
}

}  // namespace

RandomGrid build_grid(int n, double T, Rng& rng) {
  check_grid_args(n, T);
  RandomGrid g;
  g.n = n;
  g.rate = n / T;
  g.arrivals.resize(static_cast<std::size_t>(n) + 1);
  g.arrivals[0] = 0.0;
  for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) {
    g.arrivals[i] = g.arrivals[i - 1] + rng.exponential(g.rate);
  }
  return g;
}

RandomGrid build_grid_past(int n, double T, Rng& rng) {
  check_grid_args(n, T);
  RandomGrid g;
  g.n = n;
  g.rate = n / T;
  g.arrivals.reserve(static_cast<std::size_t>(n) + 8);
  g.arrivals.push_back(0.0);
  double t = 0.0;
  while (t <= T) {
    t += rng.exponential(g.rate);
    g.arrivals.push_back(t);
  }
  return g;
}

std::vector<double> uniform_grid(int n, double T) {
  check_grid_args(n, T);
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) g[static_cast<std::size_t>(i)] = T * i / n;
  return g;
}

Eigen::MatrixXd euler_chain(const SdeProblem& problem, const Eigen::MatrixXd& increments) {
  const auto steps = increments.cols();
  Eigen::MatrixXd states(problem.y0.size(), steps + 1);
  states.col(0) = problem.y0;
  Eigen::VectorXd y = problem.y0;
  for (Eigen::Index i = 0; i < steps; ++i) {
    y.noalias() += problem.a(y) * increments.col(i);
    if (!y.allFinite()) {
      throw NumericalBlowup(static_cast<std::size_t>(i + 1), "Euler recursion produced a non-finite state");
    }
    states.col(i + 1) = y;
  }
  return states;
}

Eigen::VectorXd euler_terminal(const SdeProblem& problem, const Eigen::MatrixXd& increments) {
  Eigen::VectorXd y = problem.y0;
  for (Eigen::Index i = 0; i < increments.cols(); ++i) {
    y.noalias() += problem.a(y) * increments.col(i);
    if (!y.allFinite()) {
      throw NumericalBlowup(static_cast<std::size_t>(i + 1), "Euler recursion produced a non-finite state");
    }
  }
  return y;
}

SchemeTrajectory run_euler_poisson(const SdeProblem& problem, const ResolventSampler& sampler,
                                   int n, Rng& rng) {
  check_grid_args(n, problem.T);
  check_dims(problem, sampler.model());
  const double q = n / problem.T;
  if (std::abs(sampler.rate() - q) > 1e-12 * q) {
    throw DomainError("run_euler_poisson: sampler rate must equal n/T");
  }
  SchemeTrajectory traj;
  traj.increments.resize(sampler.model().dimension(), n);
  RandomGrid grid;
  grid.n = n;
  grid.rate = q;
  grid.arrivals.push_back(0.0);
  bool timed = true;
  for (int i = 0; i < n; ++i) {
    ResolventSample s = sampler.sample(rng);
    traj.increments.col(i) = s.value;
    if (s.elapsed) {
      grid.arrivals.push_back(grid.arrivals.back() + *s.elapsed);
    } else {
      timed = false;
    }
  }
  if (timed) traj.grid = std::move(grid);
  traj.states = euler_chain(problem, traj.increments);
  traj.terminal = traj.states.col(n);
  traj.stop_rule = StopRule::fixed_n;
  return traj;
}

SchemeTrajectory run_euler_poisson(const SdeProblem& problem, const LevyModel& model, int n,
                                   Rng& rng) {
  check_grid_args(n, problem.T);
  return run_euler_poisson(problem, ResolventSampler(model, n / problem.T), n, rng);
}

SchemeTrajectory run_enhanced(const SdeProblem& problem, const LevyModel& model, int n, Rng& rng) {
  check_grid_args(n, problem.T);
  check_dims(problem, model);
  if (!model.capabilities().exact_path_samplable) {
    throw CapabilityError("enhanced scheme needs joint (increment, time) samples; model '" +
                          model.name() + "' has no exact path sampler");
  }
  RandomGrid grid;
  grid.n = n;
  grid.rate = n / problem.T;
  grid.arrivals.push_back(0.0);
  std::vector<Eigen::VectorXd> incs;
  double t = 0.0;
  while (t <= problem.T) {
    const double e = rng.exponential(grid.rate);
    incs.push_back(sample_increment(model, e, rng));
    t += e;
    grid.arrivals.push_back(t);
  }
  SchemeTrajectory traj;
  traj.increments.resize(model.dimension(), static_cast<Eigen::Index>(incs.size()));
  for (std::size_t i = 0; i < incs.size(); ++i) traj.increments.col(static_cast<Eigen::Index>(i)) = incs[i];
  traj.states = euler_chain(problem, traj.increments);
  traj.terminal = traj.states.col(traj.states.cols() - 1);
  traj.grid = std::move(grid);
  traj.stop_rule = StopRule::enhanced;
  return traj;
}

Eigen::VectorXd run_euler_maruyama(const SdeProblem& problem, const LevyModel& model, int n,
                                   Rng& rng, const std::optional<Eigen::MatrixXd>& increments) {
  check_grid_args(n, problem.T);
  check_dims(problem, model);
  if (increments) {
    if (increments->rows() != model.dimension() || increments->cols() != n) {
      throw DomainError("run_euler_maruyama: increments must be d_X x n");
    }
    return euler_terminal(problem, *increments);
  }
  if (!model.capabilities().exact_path_samplable) {
    throw CapabilityError("Euler-Maruyama needs fixed-time increments; model '" + model.name() +
                          "' has no exact path sampler");
  }
  const double dt = problem.T / n;
  Eigen::MatrixXd incs(model.dimension(), n);
  for (int i = 0; i < n; ++i) incs.col(i) = sample_increment(model, dt, rng);
  return euler_terminal(problem, incs);
}

Eigen::MatrixXd interpolate_hat(const SchemeTrajectory& trajectory, const SdeProblem& problem,
                                const LevyModel& model, Rng& rng,
                                std::span<const double> query_times) {
  if (!trajectory.grid) {
    throw CapabilityError("interpolate_hat: trajectory has no grid times");
  }
  if (!model.capabilities().exact_path_samplable || !model.is_continuous()) {
    throw CapabilityError("interpolate_hat: bridge sampling is only available for continuous models");
  }
  const auto& t = trajectory.grid->arrivals;
  if (!std::is_sorted(query_times.begin(), query_times.end())) {
    throw DomainError("interpolate_hat: query times must be sorted");
  }
  for (double s : query_times) {
    if (!(s >= 0.0 && s <= t.back())) throw DomainError("interpolate_hat: query outside [0, t_last]");
  }

  const auto tr = model.triplet();
  const Eigen::MatrixXd cov = tr.diffusion * tr.diffusion.transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::MatrixXd root =
      eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const auto d = model.dimension();

  Eigen::MatrixXd out(problem.y0.size(), static_cast<Eigen::Index>(query_times.size()));
  std::size_t interval = 0;
  double bridge_time = 0.0;
  Eigen::VectorXd bridge_value = Eigen::VectorXd::Zero(d);  // X_s - X_{t_i}
  for (std::size_t q = 0; q < query_times.size(); ++q) {
    const double s = query_times[q];
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), s) - t.begin()) - 1;
    const auto col = static_cast<Eigen::Index>(q);
    if (i + 1 >= t.size()) {
      out.col(col) = trajectory.states.col(static_cast<Eigen::Index>(t.size() - 1));
      continue;
    }
    if (i != interval || q == 0) {
      interval = i;
      bridge_time = t[i];
      bridge_value.setZero();
    }
    const double remaining = t[i + 1] - bridge_time;
    const double h = s - bridge_time;
    const Eigen::VectorXd target = trajectory.increments.col(static_cast<Eigen::Index>(i));
    Eigen::VectorXd noise(d);
    for (Eigen::Index k = 0; k < d; ++k) noise(k) = rng.normal();
    const double frac = remaining > 0.0 ? h / remaining : 0.0;
    bridge_value += frac * (target - bridge_value) +
                    std::sqrt(std::max(0.0, h * (remaining - h) / remaining)) * (root * noise);
    bridge_time = s;
    const Eigen::VectorXd y = trajectory.states.col(static_cast<Eigen::Index>(i));
    out.col(col) = y + problem.a(y) * bridge_value;
  }
  return out;
}

}  // namespace levy_ep
