#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "levy_ep/levy_core.hpp"
#include "levy_ep/sde_problem.hpp"
#include "levy_ep/sde_schemes.hpp"
#include "levy_ep/stats.hpp"

namespace levy_ep {

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Mean of |Y_T - scheme terminal|^2 over coupled paths. Path p at rung n
/// draws from substream (seed, n, p): the grid first, then the coupled path.
Estimate estimate_mse(const SdeProblem& problem, const LevyModel& model, Scheme scheme, int n,
                      std::size_t paths, const RunOptions& options);

struct ConvergenceReport {
  Scheme scheme = Scheme::euler_poisson;
  std::string problem_id;
  std::vector<int> n_values;
  std::vector<Estimate> mse;
  SlopeFit slope;
  std::size_t paths_per_n = 0;
  std::uint64_t master_seed = 0;
};

/// estimate_mse over a geometric ladder of at least five n values, with a
/// weighted log-log slope.
ConvergenceReport rate_ladder(const SdeProblem& problem, const LevyModel& model, Scheme scheme,
                              std::span<const int> n_values, std::size_t paths,
                              const RunOptions& options);

struct MarginalScan {
  int n = 0;
  std::vector<Estimate> per_index;  // i = 0..n, E|Y_{iT/n} - Y~_{t_i}|^2
  std::size_t argmax = 0;
  Estimate max;
};

/// Chain values at t_i against the exact solution at iT/n, on a path refined
/// by the uniform grid.
MarginalScan grid_marginal_error_scan(const SdeProblem& problem, const LevyModel& model, int n,
                                      std::size_t paths, const RunOptions& options);

struct MarginalLadder {
  std::vector<MarginalScan> scans;
  SlopeFit slope;  // of the max term
};

MarginalLadder marginal_error_ladder(const SdeProblem& problem, const LevyModel& model,
                                     std::span<const int> n_values, std::size_t paths,
                                     const RunOptions& options);

struct DiscretizationRow {
  int n = 0;
  Estimate sup_error;   // E[sup over refined times in [0,T] of |Y - Y^|^2]
  Estimate functional;  // E[2 tau + tau^2] on the same grids
  double ratio = 0.0;
};

struct DiscretizationScan {
  std::vector<DiscretizationRow> rows;
  double K = 0.0;        // ratio at the smallest n
  bool bounded = false;  // sup_error - 3 se <= K * functional at every n
};

/// Interpolated scheme against the exact solution at every point of the
/// coupled path up to T.
DiscretizationScan discretization_bound_scan(const SdeProblem& problem, const LevyModel& model,
                                             std::span<const int> n_values, std::size_t paths,
                                             const RunOptions& options);

/// E|A (X_T - X_{t_n})|^2 for a constant coefficient A:
///   tr(A C A^T) E|T - t_n| + |A m|^2 T^2 / n
/// with C and m the covariance and mean of X_1.
double hitting_error_closed_form(const SdeProblem& problem, const LevyModel& model, int n);

}  // namespace levy_ep
