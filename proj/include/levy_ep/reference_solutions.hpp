#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "levy_ep/levy_core.hpp"
#include "levy_ep/rng.hpp"
#include "levy_ep/sde_problem.hpp"

namespace levy_ep {

struct JumpEvent {
  double time;
  Eigen::VectorXd size;  // jump of X
};

/// One exact driving path on a refined partition shared by a scheme and the
/// true solution.
struct CoupledPath {
  std::vector<double> times;             // sorted, times[0] == 0
  Eigen::MatrixXd increments;            // d_X x (times.size() - 1)
  std::vector<bool> is_grid;             // per time
  std::vector<std::size_t> grid_index;   // positions of the scheme grid in `times`
  std::size_t horizon_index = 0;         // position of T
  std::vector<JumpEvent> jumps;          // all jumps on [0, times.back()]
  double horizon = 0.0;                  // T

  /// X at every refined time (column k is X_{times[k]}).
  Eigen::MatrixXd cumulative() const;
  /// Sums of increments between consecutive grid points: the scheme input.
  Eigen::MatrixXd grid_increments() const;
  /// Position of an exact refined time; throws if absent.
  std::size_t index_of(double t) const;
};

/// Couples any exact-path model on grid U {T} U extra_times U jump times.
/// `grid` must start at 0 and be strictly increasing.
CoupledPath couple_path(std::span<const double> grid, double T, const LevyModel& model, Rng& rng,
                        std::span<const double> extra_times = {});

/// Gaussian increments on grid U {T}; model must be continuous.
CoupledPath couple_brownian(std::span<const double> grid, double T, const LevyModel& model,
                            Rng& rng, std::span<const double> extra_times = {});

/// Exact jump times and sizes on [0, max(t_last, T)]; model must have no
/// diffusion part.
CoupledPath couple_compound_poisson(std::span<const double> grid, double T,
                                    const LevyModel& model, Rng& rng,
                                    std::span<const double> extra_times = {});

/// True when exact_solution_path supports the (coefficient, model) pair.
bool has_exact_solution(const SdeProblem& problem, const LevyModel& model);

/// Exact Y at every refined time of the path (d_Y x times.size()):
///   a == A:         y0 + A X_t
///   a(y) = c y:     y0 exp(c X^c_t - c^2 s^2 t / 2) prod_{jumps <= t} (1 + c dX)
/// where X^c is X with its jumps removed and s^2 its Gaussian variance rate.
Eigen::MatrixXd exact_solution_path(const SdeProblem& problem, const LevyModel& model,
                                    const CoupledPath& path);

/// Y_T from the path.
Eigen::VectorXd exact_terminal(const SdeProblem& problem, const LevyModel& model,
                               const CoupledPath& path);

/// Euler recursion along every refined interval of the path (a fine reference
/// when no closed form exists). Returns d_Y x times.size().
Eigen::MatrixXd fine_euler_path(const SdeProblem& problem, const CoupledPath& path);

}  // namespace levy_ep
