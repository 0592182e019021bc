#include "levy_ep/convergence_lab.hpp"

#include <algorithm>
#include <cmath>

#include "levy_ep/errors.hpp"
#include "levy_ep/grid_stats.hpp"
#include "levy_ep/parallel.hpp"
#include "levy_ep/reference_solutions.hpp"

namespace levy_ep {

namespace {

void require_reference(const SdeProblem& problem, const LevyModel& model) {
  if (!has_exact_solution(problem, model)) {
    throw CapabilityError("no exact reference for coefficient '" + problem.a.name() +
                          "' driven by model '" + model.name() + "'");
  }
}

void require_paths(std::size_t paths) {
  if (paths < 1000) throw DomainError("at least 1e3 paths are required");
}

std::vector<double> scheme_grid(Scheme scheme, int n, double T, Rng& rng) {
  switch (scheme) {
    case Scheme::euler_poisson:
      return build_grid(n, T, rng).arrivals;
    case Scheme::enhanced:
      return build_grid_past(n, T, rng).arrivals;
    case Scheme::euler_maruyama:
      return uniform_grid(n, T);
  }
  throw DomainError("unknown scheme");
}

void check_ladder(std::span<const int> n_values) {
  if (n_values.size() < 5) throw DomainError("a rate ladder needs at least five n values");
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) throw DomainError("n values must be increasing");
  }
  const double r = static_cast<double>(n_values[1]) / n_values[0];
  for (std::size_t i = 2; i < n_values.size(); ++i) {
    const double ri = static_cast<double>(n_values[i]) / n_values[i - 1];
    if (std::abs(ri - r) > 1e-9 * r) throw DomainError("n values must be geometric");
  }
}

std::vector<double> as_doubles(std::span<const int> v) { return {v.begin(), v.end()}; }

}  // namespace

Estimate estimate_mse(const SdeProblem& problem, const LevyModel& model, Scheme scheme, int n,
                      std::size_t paths, const RunOptions& options) {
  require_reference(problem, model);
  require_paths(paths);
  std::vector<double> err(paths);
  parallel_for(paths, options.workers, [&](std::size_t p) {
    Rng rng = Rng::substream(options.seed, static_cast<std::uint64_t>(n), p);
    const auto grid = scheme_grid(scheme, n, problem.T, rng);
    const CoupledPath path = couple_path(grid, problem.T, model, rng);
    const Eigen::VectorXd truth = exact_terminal(problem, model, path);
    const Eigen::MatrixXd inc = path.grid_increments();
    const Eigen::VectorXd approx = scheme == Scheme::euler_maruyama
                                       ? run_euler_maruyama(problem, model, n, rng, inc)
                                       : euler_terminal(problem, inc);
    err[p] = (truth - approx).squaredNorm();
  });
  return mean_and_se(err);
}

ConvergenceReport rate_ladder(const SdeProblem& problem, const LevyModel& model, Scheme scheme,
                              std::span<const int> n_values, std::size_t paths,
                              const RunOptions& options) {
  check_ladder(n_values);
  ConvergenceReport report;
  report.scheme = scheme;
  report.problem_id = problem.a.name() + "/" + model.name();
  report.n_values.assign(n_values.begin(), n_values.end());
  report.paths_per_n = paths;
  report.master_seed = options.seed;
  for (int n : n_values) report.mse.push_back(estimate_mse(problem, model, scheme, n, paths, options));
  report.slope = fit_loglog(as_doubles(n_values), report.mse);
  return report;
}

MarginalScan grid_marginal_error_scan(const SdeProblem& problem, const LevyModel& model, int n,
                                      std::size_t paths, const RunOptions& options) {
  require_reference(problem, model);
  require_paths(paths);
  const auto width = static_cast<std::size_t>(n) + 1;
  const auto marks = uniform_grid(n, problem.T);
  std::vector<double> err(paths * width);
  parallel_for(paths, options.workers, [&](std::size_t p) {
    Rng rng = Rng::substream(options.seed, static_cast<std::uint64_t>(n), p);
    const RandomGrid grid = build_grid(n, problem.T, rng);
    const CoupledPath path = couple_path(grid.arrivals, problem.T, model, rng, marks);
    const Eigen::MatrixXd chain = euler_chain(problem, path.grid_increments());
    const Eigen::MatrixXd exact = exact_solution_path(problem, model, path);
    for (std::size_t i = 0; i < width; ++i) {
      const auto k = static_cast<Eigen::Index>(path.index_of(marks[i]));
      err[p * width + i] = (exact.col(k) - chain.col(static_cast<Eigen::Index>(i))).squaredNorm();
    }
  });
  MarginalScan scan;
  scan.n = n;
  std::vector<double> column(paths);
  for (std::size_t i = 0; i < width; ++i) {
    for (std::size_t p = 0; p < paths; ++p) column[p] = err[p * width + i];
    scan.per_index.push_back(mean_and_se(column));
    if (scan.per_index[i].mean > scan.per_index[scan.argmax].mean) scan.argmax = i;
  }
  scan.max = scan.per_index[scan.argmax];
  return scan;
}

MarginalLadder marginal_error_ladder(const SdeProblem& problem, const LevyModel& model,
                                     std::span<const int> n_values, std::size_t paths,
                                     const RunOptions& options) {
  check_ladder(n_values);
  MarginalLadder ladder;
  std::vector<Estimate> maxima;
  for (int n : n_values) {
    ladder.scans.push_back(grid_marginal_error_scan(problem, model, n, paths, options));
    maxima.push_back(ladder.scans.back().max);
  }
  ladder.slope = fit_loglog(as_doubles(n_values), maxima);
  return ladder;
}

DiscretizationScan discretization_bound_scan(const SdeProblem& problem, const LevyModel& model,
                                             std::span<const int> n_values, std::size_t paths,
                                             const RunOptions& options) {
  require_reference(problem, model);
  require_paths(paths);
  if (n_values.empty()) throw DomainError("discretization scan: no n values");
  const double T = problem.T;
  DiscretizationScan scan;
  for (int n : n_values) {
    std::vector<double> sup(paths), func(paths);
    parallel_for(paths, options.workers, [&](std::size_t p) {
      Rng rng = Rng::substream(options.seed, static_cast<std::uint64_t>(n), p);
      const RandomGrid grid = build_grid(n, T, rng);
      const CoupledPath path = couple_path(grid.arrivals, T, model, rng);
      const Eigen::MatrixXd chain = euler_chain(problem, path.grid_increments());
      const Eigen::MatrixXd exact = exact_solution_path(problem, model, path);
      const Eigen::MatrixXd x = path.cumulative();
      double worst = 0.0;
      std::size_t g = 0;
      for (std::size_t k = 0; k < path.times.size() && path.times[k] <= T; ++k) {
        while (g + 1 < path.grid_index.size() && path.grid_index[g + 1] <= k) ++g;
        const auto gi = static_cast<Eigen::Index>(g);
        const auto from = static_cast<Eigen::Index>(path.grid_index[g]);
        const auto kk = static_cast<Eigen::Index>(k);
        const Eigen::VectorXd y = chain.col(gi);
        const Eigen::VectorXd hat = y + problem.a(y) * (x.col(kk) - x.col(from));
        worst = std::max(worst, (exact.col(kk) - hat).squaredNorm());
      }
      sup[p] = worst;
      const double tau = largest_gap(grid.arrivals, T);
      func[p] = 2.0 * tau + tau * tau;
    });
    DiscretizationRow row;
    row.n = n;
    row.sup_error = mean_and_se(sup);
    row.functional = mean_and_se(func);
    row.ratio = row.sup_error.mean / row.functional.mean;
    scan.rows.push_back(row);
  }
  scan.K = scan.rows.front().ratio;
  scan.bounded = true;
  for (const auto& row : scan.rows) {
    if (row.sup_error.mean - 3.0 * row.sup_error.se > scan.K * row.functional.mean) {
      scan.bounded = false;
    }
  }
  return scan;
}

double hitting_error_closed_form(const SdeProblem& problem, const LevyModel& model, int n) {
  if (problem.a.kind() != CoefficientKind::constant && problem.a.kind() != CoefficientKind::zero) {
    throw CapabilityError("hitting error closed form needs a constant coefficient");
  }
  const Eigen::MatrixXd A = problem.a(problem.y0);
  const ProcessMoments m = process_moments(model, 1.0);
  const double spread = (A * m.covariance * A.transpose()).trace();
  const double bias = (A * m.mean).squaredNorm();
  const double T = problem.T;
  return spread * gamma_mean_abs_deviation(n, T) + bias * T * T / n;
}

}  // namespace levy_ep
