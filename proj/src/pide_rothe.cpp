#include "levy_ep/pide_rothe.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <variant>

#include "levy_ep/errors.hpp"
#include "levy_ep/parallel.hpp"
#include "levy_ep/reference_solutions.hpp"
#include "levy_ep/sde_schemes.hpp"

namespace levy_ep {

namespace {

constexpr double kFixedPointTol = 1e-10;
constexpr int kFixedPointMax = 200;

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// Total variance rate of a one-dimensional model, for the domain margin.
double variance_rate(const LevyModel& model) {
  return process_moments(model, 1.0).covariance(0, 0);
}

}  // namespace

SpatialGrid::SpatialGrid(double x_lo, double x_hi, int nodes)
    : lo_(x_lo), hi_(x_hi), nodes_(nodes), h_(0.0) {
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_hi > x_lo)) {
    throw DomainError("spatial grid: need finite x_lo < x_hi");
  }
  if (nodes < 16) throw DomainError("spatial grid: at least 16 nodes");
  h_ = (x_hi - x_lo) / (nodes - 1);
}

Eigen::VectorXd SpatialGrid::points() const {
  Eigen::VectorXd x(nodes_);
  for (int j = 0; j < nodes_; ++j) x(j) = node(j);
  return x;
}

double SpatialGrid::interpolate(const Eigen::VectorXd& u, double x) const {
  if (x <= lo_) return u(0);
  if (x >= hi_) return u(nodes_ - 1);
  const double s = (x - lo_) / h_;
  const int j = std::min(static_cast<int>(s), nodes_ - 2);
  const double w = s - j;
  return (1.0 - w) * u(j) + w * u(j + 1);
}

TestFunction make_test_function(const std::string& name,
                                const std::map<std::string, double>& params) {
  if (name == "constant") {
    const double c = param(params, "value", 1.0);
    return {name, [c](double) { return c; }};
  }
  if (name == "identity") return {name, [](double x) { return x; }};
  if (name == "square") return {name, [](double x) { return x * x; }};
  if (name == "bump") {
    const double center = param(params, "center", 1.0);
    const double width = param(params, "width", 0.5);
    if (!(width > 0.0)) throw DomainError("bump: width must be positive");
    return {name, [center, width](double x) {
              const double r = (x - center) / width;
              if (std::abs(r) >= 1.0) return 0.0;
              return std::exp(1.0 - 1.0 / (1.0 - r * r));
            }};
  }
  throw DomainError("unknown test function '" + name + "'");
}

std::vector<std::string> test_function_names() { return {"constant", "identity", "square", "bump"}; }

RotheSolver::RotheSolver(const SdeProblem& problem, const LevyModel& model, SpatialGrid grid, int n)
    : a_fn_(problem.a), grid_(std::move(grid)), n_(n), dt_(0.0) {
  if (n < 1) throw DomainError("rothe: n must be at least 1");
  if (!(problem.T > 0.0)) throw DomainError("rothe: T must be positive");
  if (model.dimension() != 1 || problem.a.dim_y() != 1 || problem.a.dim_x() != 1) {
    throw CapabilityError("rothe: one-dimensional problems only");
  }
  dt_ = problem.T / n;

  const Eigen::MatrixXd& mix = model.mixing();
  for (std::size_t f = 0; f < model.factors().size(); ++f) {
    const ScalarLevy& z = model.factors()[f];
    const double m = mix(0, static_cast<Eigen::Index>(f));
    drift_ += m * z.drift;
    variance_ += m * m * z.sigma * z.sigma;
    if (std::holds_alternative<NoJumps>(z.jumps)) continue;
    const auto* cp = std::get_if<CompoundPoisson>(&z.jumps);
    const auto* two = cp ? std::get_if<TwoPointJump>(&cp->size) : nullptr;
    if (!two) {
      throw CapabilityError("rothe: jumps must take finitely many values (two-point law); model '" +
                            model.name() + "'");
    }
    if (cp->rate == 0.0) continue;
    jumps_.push_back({cp->rate * two->p_low, m * two->low});
    jumps_.push_back({cp->rate * (1.0 - two->p_low), m * two->high});
  }
  for (const Jump& j : jumps_) {
    jump_rate_ += j.rate;
    drift_ -= j.rate * j.size;
  }

  const int N = grid_.size();
  a_.resize(N);
  double inf_a = INFINITY;
  for (int j = 0; j < N; ++j) {
    Eigen::VectorXd y(1);
    y(0) = grid_.node(j);
    a_(j) = a_fn_(y)(0, 0);
    inf_a = std::min(inf_a, std::abs(a_(j)));
  }
  if (!(std::sqrt(variance_) * inf_a > 0.0)) {
    throw DomainError("rothe: operator is not uniformly elliptic on the grid (sigma * inf|a| = 0)");
  }

  const double h = grid_.h();
  lower_.resize(N);
  diag_.resize(N);
  upper_.resize(N);
  for (int j = 0; j < N; ++j) {
    const double alpha = 0.5 * a_(j) * a_(j) * variance_ / (h * h);
    const double beta = a_(j) * drift_ / (2.0 * h);
    lower_(j) = -dt_ * (alpha - beta);
    upper_(j) = -dt_ * (alpha + beta);
    diag_(j) = 1.0 + dt_ * (2.0 * alpha + jump_rate_);
  }
  // Ghost nodes carry the end values.
  diag_(0) += lower_(0);
  lower_(0) = 0.0;
  diag_(N - 1) += upper_(N - 1);
  upper_(N - 1) = 0.0;

  pivot_.resize(N);
  ratio_.resize(N);
  pivot_(0) = diag_(0);
  ratio_(0) = upper_(0) / pivot_(0);
  for (int j = 1; j < N; ++j) {
    pivot_(j) = diag_(j) - lower_(j) * ratio_(j - 1);
    if (pivot_(j) == 0.0) throw SolverError("rothe: singular tridiagonal system");
    ratio_(j) = upper_(j) / pivot_(j);
  }
}

Eigen::VectorXd RotheSolver::thomas(const Eigen::VectorXd& rhs) const {
  const int N = grid_.size();
  Eigen::VectorXd x(N);
  x(0) = rhs(0) / pivot_(0);
  for (int j = 1; j < N; ++j) x(j) = (rhs(j) - lower_(j) * x(j - 1)) / pivot_(j);
  for (int j = N - 2; j >= 0; --j) x(j) -= ratio_(j) * x(j + 1);
  return x;
}

RotheState RotheSolver::initial(const TestFunction& f) const {
  RotheState s;
  s.dt = dt_;
  s.u.resize(grid_.size());
  for (int j = 0; j < grid_.size(); ++j) s.u(j) = f.fn(grid_.node(j));
  if (!s.u.allFinite()) throw DomainError("rothe: f is not finite on the grid");
  return s;
}

RotheState RotheSolver::step(const RotheState& state) const {
  const int N = grid_.size();
  if (state.u.size() != N) throw DomainError("rothe: state does not match the grid");
  RotheState next;
  next.i = state.i + 1;
  next.dt = dt_;
  if (jumps_.empty()) {
    next.u = thomas(state.u);
    last_iterations_ = 1;
  } else {
    Eigen::VectorXd u = state.u;
    Eigen::VectorXd rhs(N);
    int it = 0;
    for (;;) {
      if (++it > kFixedPointMax) {
        throw SolverError("rothe: jump fixed point did not converge in 200 iterations");
      }
      for (int j = 0; j < N; ++j) {
        double nonlocal = 0.0;
        for (const Jump& k : jumps_) nonlocal += k.rate * grid_.interpolate(u, grid_.node(j) + a_(j) * k.size);
        rhs(j) = state.u(j) + dt_ * nonlocal;
      }
      Eigen::VectorXd v = thomas(rhs);
      const double change = (v - u).cwiseAbs().maxCoeff();
      u = std::move(v);
      if (change < kFixedPointTol) break;
    }
    next.u = std::move(u);
    last_iterations_ = it;
  }
  if (!next.u.allFinite()) throw NumericalBlowup(next.i, "rothe step produced non-finite values");
  return next;
}

std::vector<RotheState> RotheSolver::solve(const TestFunction& f) const {
  std::vector<RotheState> out;
  out.reserve(static_cast<std::size_t>(n_) + 1);
  out.push_back(initial(f));
  for (int i = 0; i < n_; ++i) out.push_back(step(out.back()));
  return out;
}

double RotheSolver::apply_generator(const Eigen::VectorXd& u, double x) const {
  if (u.size() != grid_.size()) throw DomainError("generator: u does not match the grid");
  if (!(x >= grid_.lo() && x <= grid_.hi())) throw DomainError("generator: x outside the grid");
  const double h = grid_.h();
  Eigen::VectorXd y(1);
  y(0) = x;
  const double ax = a_fn_(y)(0, 0);
  const double left = grid_.interpolate(u, x - h);
  const double mid = grid_.interpolate(u, x);
  const double right = grid_.interpolate(u, x + h);
  double out = ax * drift_ * (right - left) / (2.0 * h) +
               0.5 * ax * ax * variance_ * (right - 2.0 * mid + left) / (h * h);
  for (const Jump& k : jumps_) out += k.rate * (grid_.interpolate(u, x + ax * k.size) - mid);
  return out;
}

double apply_generator(const SdeProblem& problem, const LevyModel& model, const SpatialGrid& grid,
                       const Eigen::VectorXd& u, double x) {
  return RotheSolver(problem, model, grid, 1).apply_generator(u, x);
}

RotheState rothe_step(const RotheState& state, const SdeProblem& problem, const LevyModel& model,
                      const SpatialGrid& grid) {
  if (!(state.dt > 0.0)) throw DomainError("rothe_step: state needs a positive dt");
  const int n = static_cast<int>(std::lround(problem.T / state.dt));
  if (n < 1 || std::abs(problem.T / n - state.dt) > 1e-12 * state.dt) {
    throw DomainError("rothe_step: dt must be T/n");
  }
  return RotheSolver(problem, model, grid, n).step(state);
}

namespace {

void check_domain(const SdeProblem& problem, const LevyModel& model, const SpatialGrid& grid,
                  double x0) {
  Eigen::VectorXd y(1);
  y(0) = x0;
  const double sd = std::abs(problem.a(y)(0, 0)) * std::sqrt(variance_rate(model) * problem.T);
  if (x0 - 6.0 * sd < grid.lo() || x0 + 6.0 * sd > grid.hi()) {
    throw DomainError("rothe: domain must contain x0 with a margin of 6 standard deviations of Y_T");
  }
}

// Per path f(Y_{t_i}) for i = 1..n, row-major in (path, i).
std::vector<double> sample_true_values(const SdeProblem& problem, const LevyModel& model,
                                       const TestFunction& f, int n, std::size_t paths,
                                       const RunOptions& options) {
  const bool exact = has_exact_solution(problem, model);
  const auto width = static_cast<std::size_t>(n);
  std::vector<double> out(paths * width);
  parallel_for(paths, options.workers, [&](std::size_t p) {
    Rng rng = Rng::substream(options.seed, static_cast<std::uint64_t>(n), p);
    const RandomGrid grid = build_grid(n, problem.T, rng);
    std::vector<double> extra;
    if (!exact) {
      const double step = problem.T / (64.0 * n);
      for (int k = 1; k * step < grid.last(); ++k) extra.push_back(k * step);
    }
    const CoupledPath path = couple_path(grid.arrivals, problem.T, model, rng, extra);
    const Eigen::MatrixXd y =
        exact ? exact_solution_path(problem, model, path) : fine_euler_path(problem, path);
    for (std::size_t i = 0; i < width; ++i) {
      const auto k = static_cast<Eigen::Index>(path.grid_index[i + 1]);
      out[p * width + i] = f.fn(y(0, k));
    }
  });
  return out;
}

}  // namespace

std::vector<RotheRow> rothe_vs_monte_carlo(const SdeProblem& problem, const LevyModel& model,
                                           const TestFunction& f, int n, double x0,
                                           const SpatialGrid& grid, std::size_t paths,
                                           const RunOptions& options) {
  if (paths < 2) throw DomainError("rothe_vs_monte_carlo: need at least two paths");
  const RotheSolver solver(problem, model, grid, n);
  check_domain(problem, model, grid, x0);
  SdeProblem started = problem;
  started.y0 = Eigen::VectorXd::Constant(1, x0);
  const auto states = solver.solve(f);
  const auto values = sample_true_values(started, model, f, n, paths, options);
  std::vector<RotheRow> rows;
  std::vector<double> column(paths);
  for (int i = 1; i <= n; ++i) {
    for (std::size_t p = 0; p < paths; ++p) {
      column[p] = values[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i - 1)];
    }
    RotheRow row;
    row.i = i;
    row.x0 = x0;
    row.u = grid.interpolate(states[static_cast<std::size_t>(i)].u, x0);
    row.mc = mean_and_se(column);
    row.z = z_score(row.mc.mean, row.u, row.mc.se);
    rows.push_back(row);
  }
  return rows;
}

LaplaceCarlsonCheck laplace_carlson_check(const SdeProblem& problem, const LevyModel& model,
                                          const TestFunction& f, int n, double x0,
                                          const SpatialGrid& grid, std::size_t paths,
                                          const RunOptions& options) {
  if (paths < 2) throw DomainError("laplace_carlson_check: need at least two paths");
  const RotheSolver solver(problem, model, grid, n);
  check_domain(problem, model, grid, x0);
  SdeProblem started = problem;
  started.y0 = Eigen::VectorXd::Constant(1, x0);
  const RotheState u1 = solver.step(solver.initial(f));
  // One arrival at rate n/T: the n = 1 grid of a horizon T/n.
  started.T = problem.T / n;
  const auto values = sample_true_values(started, model, f, 1, paths, options);
  LaplaceCarlsonCheck out;
  out.lhs = grid.interpolate(u1.u, x0);
  out.rhs = mean_and_se(values);
  out.z = z_score(out.rhs.mean, out.lhs, out.rhs.se);
  return out;
}

}  // namespace levy_ep
