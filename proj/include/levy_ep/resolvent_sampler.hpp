#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "levy_ep/levy_core.hpp"
#include "levy_ep/rng.hpp"

namespace levy_ep {

/// Law of a non-negative variable: an atom at zero plus exponential phases.
struct ExponentialMixture {
  double atom = 0.0;
  std::vector<ExpPhase> phases;

  /// E[exp(i theta S)].
  std::complex<double> cf(double theta) const;
  double mean() const;
  double sample(Rng& rng) const;
};

/// Wiener-Hopf factors at rate q: `sup` is the law of the running supremum at
/// an independent Exp(q) time, `inf` the law of minus the running infimum.
struct WienerHopfFactors {
  double q = 0.0;
  ExponentialMixture sup;
  ExponentialMixture inf;
  /// Poles of the Laplace exponent on each side (as positive rates).
  std::vector<double> up_poles;
  std::vector<double> down_poles;

  /// sup.cf(theta) * inf.cf(-theta); equals q / (q + Psi(theta)).
  std::complex<double> resolvent_cf(double theta) const;
};

/// log E[exp(z Z_1)] for real z between the innermost poles.
double laplace_exponent(const ScalarLevy& factor, double z);

/// Factorizes a scalar factor with rational exponent (Brownian with drift, or
/// two-sided hyperexponential jumps). Roots of the Laplace exponent equation
/// psi(z) = q are bracketed by the poles and refined by bisection.
WienerHopfFactors wh_factorize(const ScalarLevy& factor, double q);
/// Same for a one-dimensional single-factor model (accounts for scaling).
WienerHopfFactors wh_factorize(const LevyModel& model, double q);

enum class ResolventRoute {
  automatic,    // Wiener-Hopf when the exponent is rational, else exact path
  wiener_hopf,  // S - I with S, I drawn from the factors
  exact_path,   // draw e ~ Exp(q), then the exact increment over e
};

/// X at an independent Exp(q) time. `elapsed` is the time draw when the
/// route produces it jointly.
struct ResolventSample {
  Eigen::VectorXd value;
  std::optional<double> elapsed;
};

/// Immutable sampler for X_{e(q)}; shareable across threads, each caller
/// passes its own Rng.
class ResolventSampler {
 public:
  ResolventSampler(const LevyModel& model, double q,
                   ResolventRoute route = ResolventRoute::automatic);

  ResolventSample sample(Rng& rng) const;

  double rate() const { return q_; }
  ResolventRoute route() const { return route_; }
  const LevyModel& model() const { return model_; }
  /// Present for the Wiener-Hopf route (factor-level, before mixing).
  const std::optional<WienerHopfFactors>& factors() const { return factors_; }

 private:
  LevyModel model_;
  double q_;
  ResolventRoute route_;
  std::optional<WienerHopfFactors> factors_;
};

ResolventSample sample_resolvent(const LevyModel& model, double q, Rng& rng,
                                 ResolventRoute route = ResolventRoute::automatic);

struct CfCheckRow {
  double theta = 0.0;
  std::complex<double> empirical;
  std::complex<double> target;  // q / (q + Psi(theta))
  double se_re = 0.0;
  double se_im = 0.0;
  double z = 0.0;  // |empirical - target| / sqrt(se_re^2 + se_im^2)
};

/// Empirical characteristic function of X_{e(q)} against q / (q + Psi).
std::vector<CfCheckRow> validate_resolvent_cf(const LevyModel& model, double q,
                                              std::span<const double> thetas,
                                              std::size_t n_samples, Rng& rng,
                                              ResolventRoute route = ResolventRoute::automatic);

}  // namespace levy_ep
