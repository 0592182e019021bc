#include "levy_ep/sde_problem.hpp"

#include <cmath>

#include "levy_ep/errors.hpp"

namespace levy_ep {

Coefficient::Coefficient(CoefficientKind kind, std::string name, int dim_y, int dim_x,
                         double lipschitz, Fn fn)
    : kind_(kind),
      name_(std::move(name)),
      dim_y_(dim_y),
      dim_x_(dim_x),
      lipschitz_(lipschitz),
      fn_(std::move(fn)) {
  if (dim_y_ < 1 || dim_x_ < 1) throw DomainError("coefficient dimensions must be positive");
  if (!(lipschitz_ >= 0.0)) throw DomainError("coefficient Lipschitz constant must be non-negative");
}

Coefficient Coefficient::zero(int dim_y, int dim_x) {
  Coefficient c(CoefficientKind::zero, "zero", dim_y, dim_x, 0.0,
                [dim_y, dim_x](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(dim_y, dim_x); });
  c.parameter_ = Eigen::MatrixXd::Zero(dim_y, dim_x);
  return c;
}

Coefficient Coefficient::constant(const Eigen::MatrixXd& value) {
  Coefficient c(CoefficientKind::constant, "constant", static_cast<int>(value.rows()),
                static_cast<int>(value.cols()), 0.0,
                [value](const Eigen::VectorXd&) { return value; });
  c.parameter_ = value;
  return c;
}

Coefficient Coefficient::linear(double scale, int dim_y) {
  Coefficient c(CoefficientKind::linear, "linear", dim_y, 1, std::abs(scale),
                [scale](const Eigen::VectorXd& y) { return Eigen::MatrixXd(scale * y); });
  c.parameter_ = Eigen::MatrixXd::Constant(1, 1, scale);
  return c;
}

Coefficient Coefficient::sine(double base, double amplitude) {
  Coefficient c(CoefficientKind::sine, "sine", 1, 1, std::abs(amplitude),
                [base, amplitude](const Eigen::VectorXd& y) {
                  return Eigen::MatrixXd::Constant(1, 1, base + amplitude * std::sin(y(0)));
                });
  c.parameter_ = (Eigen::MatrixXd(1, 2) << base, amplitude).finished();
  return c;
}

std::vector<std::string> coefficient_names() { return {"zero", "constant", "linear", "sine"}; }

Coefficient make_coefficient(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "zero") return Coefficient::zero();
  if (name == "constant") return Coefficient::constant(get("value", 1.0));
  if (name == "linear") return Coefficient::linear(get("scale", 1.0));
  if (name == "sine") return Coefficient::sine(get("base", 1.0), get("amplitude", 0.5));
  throw DomainError("unknown coefficient '" + name + "'");
}

SdeProblem make_problem(Coefficient a, Eigen::VectorXd y0, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("horizon T must be positive and finite");
  if (y0.size() != a.dim_y()) throw DomainError("y0 dimension does not match the coefficient");
  const double k = std::max(a.lipschitz(), a(y0).norm());
  return SdeProblem{std::move(a), k, std::move(y0), T};
}

SdeProblem make_problem(Coefficient a, double y0, double T) {
  return make_problem(std::move(a), Eigen::VectorXd::Constant(1, y0), T);
}

bool check_lipschitz(const SdeProblem& problem, Rng& rng, int pairs) {
  const double k = problem.lipschitz_k * (1.0 + 1e-12) + 1e-15;
  if (problem.a(problem.y0).norm() > k) return false;
  const auto d = problem.y0.size();
  for (int p = 0; p < pairs; ++p) {
    Eigen::VectorXd x(d), xp(d);
    const double scale = std::pow(10.0, 2.0 * rng.uniform() - 1.0);
    for (Eigen::Index i = 0; i < d; ++i) {
      x(i) = problem.y0(i) + scale * rng.normal();
      xp(i) = x(i) + scale * rng.normal();
    }
    if ((problem.a(x) - problem.a(xp)).norm() > k * (x - xp).norm()) return false;
  }
  return true;
}

}  // namespace levy_ep
