#include "levy_ep/reference_solutions.hpp"

#include <algorithm>
#include <cmath>

#include "levy_ep/errors.hpp"
#include "levy_ep/sde_schemes.hpp"

namespace levy_ep {

Eigen::MatrixXd CoupledPath::cumulative() const {
  Eigen::MatrixXd x(increments.rows(), static_cast<Eigen::Index>(times.size()));
  x.col(0).setZero();
  for (Eigen::Index k = 0; k < increments.cols(); ++k) x.col(k + 1) = x.col(k) + increments.col(k);
  return x;
}

Eigen::MatrixXd CoupledPath::grid_increments() const {
  const auto steps = static_cast<Eigen::Index>(grid_index.size()) - 1;
  Eigen::MatrixXd out(increments.rows(), std::max<Eigen::Index>(steps, 0));
  for (Eigen::Index i = 0; i < steps; ++i) {
    const auto from = static_cast<Eigen::Index>(grid_index[static_cast<std::size_t>(i)]);
    const auto to = static_cast<Eigen::Index>(grid_index[static_cast<std::size_t>(i) + 1]);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(increments.rows());
    for (Eigen::Index k = from; k < to; ++k) sum += increments.col(k);
    out.col(i) = sum;
  }
  return out;
}

std::size_t CoupledPath::index_of(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) throw DomainError("time is not part of the coupled path");
  return static_cast<std::size_t>(it - times.begin());
}

CoupledPath couple_path(std::span<const double> grid, double T, const LevyModel& model, Rng& rng,
                        std::span<const double> extra_times) {
  if (!model.capabilities().exact_path_samplable) {
    throw CapabilityError("coupling needs an exact path sampler; model '" + model.name() +
                          "' has none");
  }
  if (grid.empty() || grid.front() != 0.0) throw DomainError("coupling: grid must start at 0");
  if (!(T > 0.0)) throw DomainError("coupling: T must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("coupling: grid must be strictly increasing");
  }
  double end = std::max(grid.back(), T);
  for (double e : extra_times) {
    if (!(e >= 0.0)) throw DomainError("coupling: negative extra time");
    end = std::max(end, e);
  }

  struct RawJump {
    double time;
    std::size_t factor;
    double size;
  };
  std::vector<RawJump> raw;
  const auto& factors = model.factors();
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const auto* cp = std::get_if<CompoundPoisson>(&factors[j].jumps);
    if (cp == nullptr || cp->rate <= 0.0) continue;
    double t = rng.exponential(cp->rate);
    while (t <= end) {
      raw.push_back({t, j, sample_jump(cp->size, rng)});
      t += rng.exponential(cp->rate);
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawJump& a, const RawJump& b) { return a.time < b.time; });

  CoupledPath path;
  path.horizon = T;
  path.times.assign(grid.begin(), grid.end());
  path.times.push_back(T);
  path.times.insert(path.times.end(), extra_times.begin(), extra_times.end());
  for (const auto& jmp : raw) path.times.push_back(jmp.time);
  std::sort(path.times.begin(), path.times.end());
  path.times.erase(std::unique(path.times.begin(), path.times.end()), path.times.end());

  path.is_grid.assign(path.times.size(), false);
  for (double g : grid) {
    const std::size_t k = path.index_of(g);
    path.is_grid[k] = true;
    path.grid_index.push_back(k);
  }
  path.horizon_index = path.index_of(T);

  const auto nf = static_cast<Eigen::Index>(factors.size());
  Eigen::VectorXd drift(nf), sigma(nf);
  for (Eigen::Index j = 0; j < nf; ++j) {
    const auto& f = factors[static_cast<std::size_t>(j)];
    drift(j) = f.drift - jump_rate(f.jumps) * jump_mean(f.jumps);
    sigma(j) = f.sigma;
  }
  const Eigen::MatrixXd& mix = model.mixing();
  const auto steps = static_cast<Eigen::Index>(path.times.size()) - 1;
  path.increments.resize(model.dimension(), steps);
  Eigen::VectorXd dz(nf);
  std::size_t next_jump = 0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    const double t1 = path.times[static_cast<std::size_t>(k) + 1];
    const double dt = t1 - path.times[static_cast<std::size_t>(k)];
    const double root = std::sqrt(dt);
    for (Eigen::Index j = 0; j < nf; ++j) {
      dz(j) = drift(j) * dt;
      if (sigma(j) > 0.0) dz(j) += sigma(j) * root * rng.normal();
    }
    while (next_jump < raw.size() && raw[next_jump].time == t1) {
      const auto& jmp = raw[next_jump];
      dz(static_cast<Eigen::Index>(jmp.factor)) += jmp.size;
      path.jumps.push_back({t1, mix.col(static_cast<Eigen::Index>(jmp.factor)) * jmp.size});
      ++next_jump;
    }
    path.increments.col(k).noalias() = mix * dz;
  }
  return path;
}

CoupledPath couple_brownian(std::span<const double> grid, double T, const LevyModel& model,
                            Rng& rng, std::span<const double> extra_times) {
  if (!model.is_continuous()) throw CapabilityError("couple_brownian: model has jumps");
  return couple_path(grid, T, model, rng, extra_times);
}

CoupledPath couple_compound_poisson(std::span<const double> grid, double T,
                                    const LevyModel& model, Rng& rng,
                                    std::span<const double> extra_times) {
  for (const auto& f : model.factors()) {
    if (f.sigma != 0.0) throw CapabilityError("couple_compound_poisson: model has a diffusion part");
  }
  return couple_path(grid, T, model, rng, extra_times);
}

bool has_exact_solution(const SdeProblem& problem, const LevyModel& model) {
  if (!model.capabilities().exact_path_samplable) return false;
  switch (problem.a.kind()) {
    case CoefficientKind::zero:
    case CoefficientKind::constant:
      return true;
    case CoefficientKind::linear:
      return model.dimension() == 1;
    default:
      return false;
  }
}

Eigen::MatrixXd exact_solution_path(const SdeProblem& problem, const LevyModel& model,
                                    const CoupledPath& path) {
  if (!has_exact_solution(problem, model)) {
    throw CapabilityError("no closed-form solution for coefficient '" + problem.a.name() +
                          "' driven by model '" + model.name() + "'");
  }
  const auto count = static_cast<Eigen::Index>(path.times.size());
  Eigen::MatrixXd y(problem.y0.size(), count);
  switch (problem.a.kind()) {
    case CoefficientKind::zero:
      y.colwise() = problem.y0;
      break;
    case CoefficientKind::constant: {
      const Eigen::MatrixXd x = path.cumulative();
      y = (problem.a.parameter() * x).colwise() + problem.y0;
      break;
    }
    case CoefficientKind::linear: {
      const double c = problem.a.parameter()(0, 0);
      const auto tr = model.triplet();
      const double var_rate = (tr.diffusion * tr.diffusion.transpose())(0, 0);
      double x = 0.0, jump_total = 0.0, product = 1.0;
      std::size_t next_jump = 0;
      y.col(0) = problem.y0;
      for (Eigen::Index k = 1; k < count; ++k) {
        const double t = path.times[static_cast<std::size_t>(k)];
        x += path.increments(0, k - 1);
        while (next_jump < path.jumps.size() && path.jumps[next_jump].time <= t) {
          const double dx = path.jumps[next_jump].size(0);
          jump_total += dx;
          product *= 1.0 + c * dx;
          ++next_jump;
        }
        const double cont = x - jump_total;
        y.col(k) = problem.y0 * (std::exp(c * cont - 0.5 * c * c * var_rate * t) * product);
      }
      break;
    }
    default:
      break;
  }
  return y;
}

Eigen::VectorXd exact_terminal(const SdeProblem& problem, const LevyModel& model,
                               const CoupledPath& path) {
  return exact_solution_path(problem, model, path).col(static_cast<Eigen::Index>(path.horizon_index));
}

Eigen::MatrixXd fine_euler_path(const SdeProblem& problem, const CoupledPath& path) {
  return euler_chain(problem, path.increments);
}

}  // namespace levy_ep
