#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levy_ep/rng.hpp"

namespace levy_ep {

enum class CoefficientKind { zero, constant, linear, sine, custom };

/// Pluggable coefficient a: R^{d_Y} -> R^{d_Y x d_X}.
class Coefficient {
 public:
  using Fn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  Coefficient(CoefficientKind kind, std::string name, int dim_y, int dim_x, double lipschitz,
              Fn fn);

  /// a == 0.
  static Coefficient zero(int dim_y = 1, int dim_x = 1);
  /// a == A.
  static Coefficient constant(const Eigen::MatrixXd& value);
  static Coefficient constant(double value) { return constant(Eigen::MatrixXd::Constant(1, 1, value)); }
  /// a(y) = scale * y, a d_Y x 1 column (scalar driver).
  static Coefficient linear(double scale = 1.0, int dim_y = 1);
  /// a(y) = base + amplitude * sin(y), one-dimensional and bounded.
  static Coefficient sine(double base, double amplitude);

  Eigen::MatrixXd operator()(const Eigen::VectorXd& y) const { return fn_(y); }

  CoefficientKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int dim_y() const { return dim_y_; }
  int dim_x() const { return dim_x_; }
  double lipschitz() const { return lipschitz_; }
  /// Constant matrix for `constant`, the scale for `linear` (1x1).
  const Eigen::MatrixXd& parameter() const { return parameter_; }

 private:
  CoefficientKind kind_;
  std::string name_;
  int dim_y_;
  int dim_x_;
  double lipschitz_;
  Fn fn_;
  Eigen::MatrixXd parameter_;
};

/// Named built-ins: zero, constant, linear, sine.
std::vector<std::string> coefficient_names();
/// Builds a built-in from a name and numeric parameters
/// (constant: value; linear: scale; sine: base, amplitude).
Coefficient make_coefficient(const std::string& name, const std::map<std::string, double>& params);

/// Y_t = y0 + int_0^t a(Y_{s-}) dX_s on [0, T].
struct SdeProblem {
  Coefficient a;
  double lipschitz_k;
  Eigen::VectorXd y0;
  double T;
};

/// Builds a problem with lipschitz_k = max(Lip(a), |a(y0)|).
SdeProblem make_problem(Coefficient a, Eigen::VectorXd y0, double T);
SdeProblem make_problem(Coefficient a, double y0, double T);

/// Spot-checks |a(x)-a(x')| <= k|x-x'| on random pairs and |a(y0)| <= k.
/// Returns false on the first violation.
bool check_lipschitz(const SdeProblem& problem, Rng& rng, int pairs = 200);

}  // namespace levy_ep
