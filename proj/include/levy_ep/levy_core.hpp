#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "levy_ep/rng.hpp"

namespace levy_ep {

struct SdeProblem;

// ---------------------------------------------------------------------------
// Jump-size laws for compound Poisson jumps. All are scalar.

/// Value `low` with probability `p_low`, otherwise `high`.
struct TwoPointJump {
  double low = -1.0;
  double high = 1.0;
  double p_low = 0.5;
};

struct UniformJump {
  double lo = -1.0;
  double hi = 1.0;
};

struct NormalJump {
  double mean = 0.0;
  double stddev = 1.0;
};

/// One exponential phase: weight within its side, and rate.
struct ExpPhase {
  double weight = 1.0;
  double rate = 1.0;
};

/// Two-sided mixture of exponentials: with probability p_up the jump is
/// +Exp(rate) drawn from `up`, otherwise -Exp(rate) drawn from `down`.
struct ExpMixtureJump {
  double p_up = 0.5;
  std::vector<ExpPhase> up;
  std::vector<ExpPhase> down;
};

using JumpSize = std::variant<TwoPointJump, UniformJump, NormalJump, ExpMixtureJump>;

struct NoJumps {};

struct CompoundPoisson {
  double rate = 0.0;
  JumpSize size;
};

/// Compound Poisson with hyperexponential jumps, treated as a resolvent-only
/// driver: its paths are never sampled directly.
struct Hyperexponential {
  double intensity = 0.0;
  ExpMixtureJump jumps;
};

using JumpMeasure = std::variant<NoJumps, CompoundPoisson, Hyperexponential>;

/// A one-dimensional Levy process with E[Z_t] = drift * t. Jumps are
/// compensated, so `drift` is the mean rate whatever the jump law.
struct ScalarLevy {
  double drift = 0.0;
  double sigma = 0.0;
  JumpMeasure jumps = NoJumps{};
};

// ---------------------------------------------------------------------------

/// (b, Sigma, second moment of Pi) of the composite process.
struct LevyTriplet {
  Eigen::VectorXd drift;
  Eigen::MatrixXd diffusion;           // Sigma; Sigma Sigma^T is the Gaussian covariance rate
  Eigen::MatrixXd jump_second_moment;  // int x x^T Pi(dx)
};

struct Capabilities {
  bool resolvent_samplable = false;
  bool exact_path_samplable = false;
};

/// Driving process X_t = M Z_t where Z has independent scalar Levy components.
///
/// A plain one-dimensional model has M = [1]. Multidimensional Brownian
/// motion with drift b and diffusion Sigma is stored as M = [Sigma | b] acting
/// on standard Brownian components plus a unit-drift clock.
class LevyModel {
 public:
  LevyModel(Eigen::MatrixXd mixing, std::vector<ScalarLevy> factors, std::string name);

  static LevyModel brownian(double drift, double sigma);
  static LevyModel brownian(const Eigen::VectorXd& drift, const Eigen::MatrixXd& sigma);
  static LevyModel compound_poisson(double drift, double rate, JumpSize size, double sigma = 0.0);
  static LevyModel hyperexponential(double drift, double sigma, double intensity,
                                    ExpMixtureJump jumps);
  /// X = mixing * (Z_1, ..., Z_k) with each Z_j an independent model.
  static LevyModel compose(const Eigen::MatrixXd& mixing, const std::vector<LevyModel>& parts);

  int dimension() const { return static_cast<int>(mixing_.rows()); }
  const Eigen::MatrixXd& mixing() const { return mixing_; }
  const std::vector<ScalarLevy>& factors() const { return factors_; }
  const std::string& name() const { return name_; }
  Capabilities capabilities() const { return caps_; }

  /// True when X is one-dimensional and driven by a single scalar factor.
  bool is_scalar() const { return mixing_.rows() == 1 && factors_.size() == 1; }
  /// True when no factor has jumps.
  bool is_continuous() const;

  LevyTriplet triplet() const;

 private:
  Eigen::MatrixXd mixing_;
  std::vector<ScalarLevy> factors_;
  std::string name_;
  Capabilities caps_;
};

// Scalar-law helpers shared by samplers and solvers.
double jump_mean(const JumpSize& size);
double jump_second_moment(const JumpSize& size);
std::complex<double> jump_cf(const JumpSize& size, double theta);
double sample_jump(const JumpSize& size, Rng& rng);

/// Rate and law of jumps, or rate 0 when the factor has none.
double jump_rate(const JumpMeasure& jumps);
double jump_mean(const JumpMeasure& jumps);
double jump_second_moment(const JumpMeasure& jumps);

/// Psi of a scalar factor: E[exp(i theta Z_t)] = exp(-t Psi(theta)).
std::complex<double> char_exponent(const ScalarLevy& factor, double theta);

/// Psi(theta) = -i<b,theta> + 1/2 <theta, Sigma Sigma^T theta>
///              + int (1 - e^{i<theta,x>} + i<theta,x>) Pi(dx),
/// with the drift sign chosen so that E[X_t] = +b t.
std::complex<double> char_exponent(const LevyModel& model, const Eigen::VectorXd& theta);
std::complex<double> char_exponent(const LevyModel& model, double theta);

struct ProcessMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

ProcessMoments process_moments(const LevyModel& model, double t);

/// Smallest k bounding |Sigma|, |b|, (int |x|^2 Pi)^{1/2}, |y0|, the Lipschitz
/// constant of the coefficient and |a(y0)|. Reporting only.
double declared_k(const LevyModel& model, const SdeProblem& problem);

/// Exact increment X_{t+dt} - X_t. Requires exact_path_samplable.
Eigen::VectorXd sample_increment(const LevyModel& model, double dt, Rng& rng);

}  // namespace levy_ep
