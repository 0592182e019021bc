#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levy_ep/convergence_lab.hpp"
#include "levy_ep/levy_core.hpp"
#include "levy_ep/sde_problem.hpp"
#include "levy_ep/stats.hpp"

namespace levy_ep {

/// Uniform nodes on [x_lo, x_hi]. Values beyond the ends are extended as
/// constants.
class SpatialGrid {
 public:
  SpatialGrid(double x_lo, double x_hi, int nodes);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int size() const { return nodes_; }
  double h() const { return h_; }
  double node(int j) const { return lo_ + h_ * j; }
  Eigen::VectorXd points() const;

  /// Piecewise linear interpolation of nodal values, constant outside.
  double interpolate(const Eigen::VectorXd& u, double x) const;

 private:
  double lo_;
  double hi_;
  int nodes_;
  double h_;
};

struct RotheState {
  int i = 0;
  Eigen::VectorXd u;
  double dt = 0.0;
};

/// Named bounded test functions f.
struct TestFunction {
  std::string name;
  std::function<double(double)> fn;
};

/// constant (value), identity, square, bump (center, width):
/// exp(1 - 1/(1 - r^2)) for r = (x - center)/width inside (-1, 1), else 0.
TestFunction make_test_function(const std::string& name,
                                const std::map<std::string, double>& params = {});
std::vector<std::string> test_function_names();

/// Implicit steps (I - dt A) u_i = u_{i-1} of the generator
///   A u = a c u' + a^2 s^2 u''/2 + sum_k r_k (u(x + a z_k) - u(x))
/// for a one-dimensional problem driven by Brownian motion plus compound
/// Poisson jumps with finitely many sizes z_k. c is the drift net of the jump
/// compensator. Central differences; the nonlocal sum is iterated to a fixed
/// point around a tridiagonal solve.
class RotheSolver {
 public:
  RotheSolver(const SdeProblem& problem, const LevyModel& model, SpatialGrid grid, int n);

  const SpatialGrid& grid() const { return grid_; }
  double dt() const { return dt_; }
  int steps() const { return n_; }

  RotheState initial(const TestFunction& f) const;
  RotheState step(const RotheState& state) const;
  /// States 0..n.
  std::vector<RotheState> solve(const TestFunction& f) const;

  /// A u at x, using the same stencil as the solver at the nodes.
  double apply_generator(const Eigen::VectorXd& u, double x) const;

  /// Fixed-point iterations used by the latest step.
  int last_iterations() const { return last_iterations_; }

 private:
  struct Jump {
    double rate;
    double size;
  };

  Coefficient a_fn_;
  SpatialGrid grid_;
  int n_;
  double dt_;
  double drift_ = 0.0;    // c
  double variance_ = 0.0; // s^2
  double jump_rate_ = 0.0;
  std::vector<Jump> jumps_;
  Eigen::VectorXd a_;     // a at nodes
  // I - dt D as a tridiagonal matrix and its elimination factors.
  Eigen::VectorXd lower_, diag_, upper_;
  Eigen::VectorXd pivot_, ratio_;
  mutable int last_iterations_ = 0;

  Eigen::VectorXd thomas(const Eigen::VectorXd& rhs) const;
};

double apply_generator(const SdeProblem& problem, const LevyModel& model, const SpatialGrid& grid,
                       const Eigen::VectorXd& u, double x);

RotheState rothe_step(const RotheState& state, const SdeProblem& problem, const LevyModel& model,
                      const SpatialGrid& grid);

struct RotheRow {
  int i = 0;
  double x0 = 0.0;
  double u = 0.0;
  Estimate mc;
  double z = 0.0;
};

/// u_i(x0) from the solver beside the Monte Carlo mean of f(Y_{t_i}) for the
/// true solution at the arrival times, started at x0. Exact solutions are used
/// when available, otherwise a fine Euler path on a refinement of step T/(64n).
std::vector<RotheRow> rothe_vs_monte_carlo(const SdeProblem& problem, const LevyModel& model,
                                           const TestFunction& f, int n, double x0,
                                           const SpatialGrid& grid, std::size_t paths,
                                           const RunOptions& options);

struct LaplaceCarlsonCheck {
  double lhs = 0.0;  // u_1(x0)
  Estimate rhs;      // E_x0[f(Y_{e(n/T)})]
  double z = 0.0;
};

LaplaceCarlsonCheck laplace_carlson_check(const SdeProblem& problem, const LevyModel& model,
                                          const TestFunction& f, int n, double x0,
                                          const SpatialGrid& grid, std::size_t paths,
                                          const RunOptions& options);

}  // namespace levy_ep
