#include "levy_ep/levy_core.hpp"

#include <cmath>

#include "levy_ep/errors.hpp"
#include "levy_ep/sde_problem.hpp"

namespace levy_ep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void validate_mixture(const ExpMixtureJump& m) {
  if (!(m.p_up >= 0.0 && m.p_up <= 1.0)) throw DomainError("exp-mixture: p_up must lie in [0,1]");
  auto check_side = [](const std::vector<ExpPhase>& side, bool used, const char* label) {
    if (!used) return;
    if (side.empty()) throw DomainError(std::string("exp-mixture: empty ") + label + " side");
    double total = 0.0;
    for (const auto& ph : side) {
      if (!(ph.rate > 0.0) || !std::isfinite(ph.rate)) {
        throw DomainError(std::string("exp-mixture: ") + label + " rates must be positive");
      }
      if (!(ph.weight >= 0.0)) throw DomainError("exp-mixture: negative weight");
      total += ph.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw DomainError(std::string("exp-mixture: ") + label + " weights must sum to 1");
    }
  };
  check_side(m.up, m.p_up > 0.0, "up");
  check_side(m.down, m.p_up < 1.0, "down");
}

void validate_size(const JumpSize& size) {
  std::visit(overloaded{
                 [](const TwoPointJump& j) {
                   if (!(j.p_low >= 0.0 && j.p_low <= 1.0)) {
                     throw DomainError("two-point jump: p_low must lie in [0,1]");
                   }
                 },
                 [](const UniformJump& j) {
                   if (!(j.lo < j.hi)) throw DomainError("uniform jump: need lo < hi");
                 },
                 [](const NormalJump& j) {
                   if (!(j.stddev >= 0.0)) throw DomainError("normal jump: negative stddev");
                 },
                 [](const ExpMixtureJump& j) { validate_mixture(j); },
             },
             size);
}

void validate_factor(const ScalarLevy& f) {
  if (!std::isfinite(f.drift)) throw DomainError("Levy factor: non-finite drift");
  if (!(f.sigma >= 0.0) || !std::isfinite(f.sigma)) {
    throw DomainError("Levy factor: sigma must be finite and non-negative");
  }
  std::visit(overloaded{
                 [](const NoJumps&) {},
                 [](const CompoundPoisson& cp) {
                   if (!(cp.rate >= 0.0)) throw DomainError("compound Poisson: negative rate");
                   validate_size(cp.size);
                 },
                 [](const Hyperexponential& h) {
                   if (!(h.intensity >= 0.0)) throw DomainError("hyperexponential: negative intensity");
                   validate_mixture(h.jumps);
                 },
             },
             f.jumps);
}

bool has_rational_exponent(const ScalarLevy& f) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return true; },
                        [](const CompoundPoisson& cp) {
                          return std::holds_alternative<ExpMixtureJump>(cp.size);
                        },
                        [](const Hyperexponential&) { return true; },
                    },
                    f.jumps);
}

double mixture_mean(const ExpMixtureJump& m) {
  double up = 0.0, down = 0.0;
  if (m.p_up > 0.0) {
    for (const auto& ph : m.up) up += ph.weight / ph.rate;
  }
  if (m.p_up < 1.0) {
    for (const auto& ph : m.down) down += ph.weight / ph.rate;
  }
  return m.p_up * up - (1.0 - m.p_up) * down;
}

double mixture_second(const ExpMixtureJump& m) {
  double up = 0.0, down = 0.0;
  if (m.p_up > 0.0) {
    for (const auto& ph : m.up) up += 2.0 * ph.weight / (ph.rate * ph.rate);
  }
  if (m.p_up < 1.0) {
    for (const auto& ph : m.down) down += 2.0 * ph.weight / (ph.rate * ph.rate);
  }
  return m.p_up * up + (1.0 - m.p_up) * down;
}

std::complex<double> mixture_cf(const ExpMixtureJump& m, double theta) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  C up = 0.0, down = 0.0;
  if (m.p_up > 0.0) {
    for (const auto& ph : m.up) up += ph.weight * ph.rate / (ph.rate - i * theta);
  }
  if (m.p_up < 1.0) {
    for (const auto& ph : m.down) down += ph.weight * ph.rate / (ph.rate + i * theta);
  }
  return m.p_up * up + (1.0 - m.p_up) * down;
}

double pick_phase_rate(const std::vector<ExpPhase>& side, double u) {
  double acc = 0.0;
  for (const auto& ph : side) {
    acc += ph.weight;
    if (u < acc) return ph.rate;
  }
  return side.back().rate;
}

double sample_mixture(const ExpMixtureJump& m, Rng& rng) {
  const bool up = rng.uniform() < m.p_up;
  const auto& side = up ? m.up : m.down;
  const double rate = pick_phase_rate(side, rng.uniform());
  const double e = rng.exponential(rate);
  return up ? e : -e;
}

}  // namespace

// ---------------------------------------------------------------------------

double jump_mean(const JumpSize& size) {
  return std::visit(overloaded{
                        [](const TwoPointJump& j) { return j.p_low * j.low + (1.0 - j.p_low) * j.high; },
                        [](const UniformJump& j) { return 0.5 * (j.lo + j.hi); },
                        [](const NormalJump& j) { return j.mean; },
                        [](const ExpMixtureJump& j) { return mixture_mean(j); },
                    },
                    size);
}

double jump_second_moment(const JumpSize& size) {
  return std::visit(
      overloaded{
          [](const TwoPointJump& j) {
            return j.p_low * j.low * j.low + (1.0 - j.p_low) * j.high * j.high;
          },
          [](const UniformJump& j) { return (j.lo * j.lo + j.lo * j.hi + j.hi * j.hi) / 3.0; },
          [](const NormalJump& j) { return j.mean * j.mean + j.stddev * j.stddev; },
          [](const ExpMixtureJump& j) { return mixture_second(j); },
      },
      size);
}

std::complex<double> jump_cf(const JumpSize& size, double theta) {
  using C = std::complex<double>;
  return std::visit(
      overloaded{
          [&](const TwoPointJump& j) {
            return j.p_low * std::polar(1.0, theta * j.low) +
                   (1.0 - j.p_low) * std::polar(1.0, theta * j.high);
          },
          [&](const UniformJump& j) {
            const double half = 0.5 * theta * (j.hi - j.lo);
            const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
            return C(std::polar(sinc, 0.5 * theta * (j.lo + j.hi)));
          },
          [&](const NormalJump& j) {
            return std::polar(std::exp(-0.5 * j.stddev * j.stddev * theta * theta), theta * j.mean);
          },
          [&](const ExpMixtureJump& j) { return mixture_cf(j, theta); },
      },
      size);
}

double sample_jump(const JumpSize& size, Rng& rng) {
  return std::visit(overloaded{
                        [&](const TwoPointJump& j) { return rng.uniform() < j.p_low ? j.low : j.high; },
                        [&](const UniformJump& j) { return j.lo + (j.hi - j.lo) * rng.uniform(); },
                        [&](const NormalJump& j) { return j.mean + j.stddev * rng.normal(); },
                        [&](const ExpMixtureJump& j) { return sample_mixture(j, rng); },
                    },
                    size);
}

double jump_rate(const JumpMeasure& jumps) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [](const CompoundPoisson& cp) { return cp.rate; },
                        [](const Hyperexponential& h) { return h.intensity; },
                    },
                    jumps);
}

double jump_mean(const JumpMeasure& jumps) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [](const CompoundPoisson& cp) { return jump_mean(cp.size); },
                        [](const Hyperexponential& h) { return mixture_mean(h.jumps); },
                    },
                    jumps);
}

double jump_second_moment(const JumpMeasure& jumps) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [](const CompoundPoisson& cp) { return jump_second_moment(cp.size); },
                        [](const Hyperexponential& h) { return mixture_second(h.jumps); },
                    },
                    jumps);
}

// ---------------------------------------------------------------------------

LevyModel::LevyModel(Eigen::MatrixXd mixing, std::vector<ScalarLevy> factors, std::string name)
    : mixing_(std::move(mixing)), factors_(std::move(factors)), name_(std::move(name)) {
  if (factors_.empty()) throw DomainError("LevyModel: no factors");
  if (mixing_.cols() != static_cast<Eigen::Index>(factors_.size()) || mixing_.rows() < 1) {
    throw DomainError("LevyModel: mixing matrix must be d_X x (number of factors)");
  }
  if (!mixing_.allFinite()) throw DomainError("LevyModel: non-finite mixing matrix");
  bool exact = true;
  for (const auto& f : factors_) {
    validate_factor(f);
    if (std::holds_alternative<Hyperexponential>(f.jumps) && jump_rate(f.jumps) > 0.0) exact = false;
  }
  caps_.exact_path_samplable = exact;
  caps_.resolvent_samplable = exact || (factors_.size() == 1 && has_rational_exponent(factors_[0]));
}

LevyModel LevyModel::brownian(double drift, double sigma) {
  return LevyModel(Eigen::MatrixXd::Ones(1, 1), {ScalarLevy{drift, sigma, NoJumps{}}}, "brownian");
}

LevyModel LevyModel::brownian(const Eigen::VectorXd& drift, const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != drift.size()) {
    throw DomainError("brownian: diffusion rows must match drift dimension");
  }
  if (drift.size() == 1 && sigma.cols() == 1) return brownian(drift(0), std::abs(sigma(0, 0)));
  std::vector<ScalarLevy> factors(static_cast<std::size_t>(sigma.cols()), ScalarLevy{0.0, 1.0, NoJumps{}});
  Eigen::MatrixXd mixing = sigma;
  if (drift.norm() > 0.0) {
    mixing.conservativeResize(Eigen::NoChange, sigma.cols() + 1);
    mixing.col(sigma.cols()) = drift;
    factors.push_back(ScalarLevy{1.0, 0.0, NoJumps{}});
  }
  return LevyModel(std::move(mixing), std::move(factors), "brownian");
}

LevyModel LevyModel::compound_poisson(double drift, double rate, JumpSize size, double sigma) {
  return LevyModel(Eigen::MatrixXd::Ones(1, 1),
                   {ScalarLevy{drift, sigma, CompoundPoisson{rate, std::move(size)}}},
                   "compound_poisson");
}

LevyModel LevyModel::hyperexponential(double drift, double sigma, double intensity,
                                      ExpMixtureJump jumps) {
  return LevyModel(Eigen::MatrixXd::Ones(1, 1),
                   {ScalarLevy{drift, sigma, Hyperexponential{intensity, std::move(jumps)}}},
                   "hyperexponential");
}

LevyModel LevyModel::compose(const Eigen::MatrixXd& mixing, const std::vector<LevyModel>& parts) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& p : parts) {
    rows += p.mixing().rows();
    cols += p.mixing().cols();
  }
  if (parts.empty() || mixing.cols() != rows) {
    throw DomainError("compose: mixing columns must equal the summed part dimensions");
  }
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(rows, cols);
  std::vector<ScalarLevy> factors;
  Eigen::Index r = 0, c = 0;
  for (const auto& p : parts) {
    block.block(r, c, p.mixing().rows(), p.mixing().cols()) = p.mixing();
    r += p.mixing().rows();
    c += p.mixing().cols();
    factors.insert(factors.end(), p.factors().begin(), p.factors().end());
  }
  return LevyModel(mixing * block, std::move(factors), "composite");
}

bool LevyModel::is_continuous() const {
  for (const auto& f : factors_) {
    if (jump_rate(f.jumps) > 0.0) return false;
  }
  return true;
}

LevyTriplet LevyModel::triplet() const {
  const auto k = static_cast<Eigen::Index>(factors_.size());
  Eigen::VectorXd c(k), s(k), m2(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& f = factors_[static_cast<std::size_t>(j)];
    c(j) = f.drift;
    s(j) = f.sigma;
    m2(j) = jump_rate(f.jumps) * jump_second_moment(f.jumps);
  }
  return {mixing_ * c, mixing_ * s.asDiagonal(), mixing_ * m2.asDiagonal() * mixing_.transpose()};
}

// ---------------------------------------------------------------------------

std::complex<double> char_exponent(const ScalarLevy& f, double theta) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  C psi = -i * f.drift * theta + 0.5 * f.sigma * f.sigma * theta * theta;
  const double rate = jump_rate(f.jumps);
  if (rate > 0.0) {
    C cf;
    if (const auto* cp = std::get_if<CompoundPoisson>(&f.jumps)) {
      cf = jump_cf(cp->size, theta);
    } else {
      cf = mixture_cf(std::get<Hyperexponential>(f.jumps).jumps, theta);
    }
    psi += rate * (1.0 - cf + i * theta * jump_mean(f.jumps));
  }
  return psi;
}

std::complex<double> char_exponent(const LevyModel& model, const Eigen::VectorXd& theta) {
  if (theta.size() != model.dimension()) throw DomainError("char_exponent: theta has wrong dimension");
  if (!theta.allFinite()) throw DomainError("char_exponent: theta must be finite");
  const Eigen::VectorXd u = model.mixing().transpose() * theta;
  std::complex<double> psi = 0.0;
  for (std::size_t j = 0; j < model.factors().size(); ++j) {
    psi += char_exponent(model.factors()[j], u(static_cast<Eigen::Index>(j)));
  }
  return psi;
}

std::complex<double> char_exponent(const LevyModel& model, double theta) {
  return char_exponent(model, Eigen::VectorXd::Constant(1, theta));
}

ProcessMoments process_moments(const LevyModel& model, double t) {
  if (!(t >= 0.0)) throw DomainError("process_moments: t must be non-negative");
  const auto tr = model.triplet();
  return {tr.drift * t,
          (tr.diffusion * tr.diffusion.transpose() + tr.jump_second_moment) * t};
}

double declared_k(const LevyModel& model, const SdeProblem& problem) {
  const auto tr = model.triplet();
  const double jump2 = tr.jump_second_moment.trace();
  if (!std::isfinite(jump2)) throw CapabilityError("declared_k: unbounded jump second moment");
  double k = tr.diffusion.norm();
  k = std::max(k, tr.drift.norm());
  k = std::max(k, std::sqrt(jump2));
  k = std::max(k, problem.y0.norm());
  k = std::max(k, problem.lipschitz_k);
  k = std::max(k, problem.a(problem.y0).norm());
  return k;
}

Eigen::VectorXd sample_increment(const LevyModel& model, double dt, Rng& rng) {
  if (!model.capabilities().exact_path_samplable) {
    throw CapabilityError("model '" + model.name() + "' has no exact path sampler");
  }
  if (!(dt >= 0.0)) throw DomainError("sample_increment: negative time step");
  const auto k = static_cast<Eigen::Index>(model.factors().size());
  Eigen::VectorXd z(k);
  const double root = std::sqrt(dt);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& f = model.factors()[static_cast<std::size_t>(j)];
    double v = f.drift * dt;
    if (f.sigma > 0.0) v += f.sigma * root * rng.normal();
    if (const auto* cp = std::get_if<CompoundPoisson>(&f.jumps); cp && cp->rate > 0.0) {
      v -= cp->rate * jump_mean(cp->size) * dt;
      double clock = rng.exponential(cp->rate);
      while (clock <= dt) {
        v += sample_jump(cp->size, rng);
        clock += rng.exponential(cp->rate);
      }
    }
    z(j) = v;
  }
  return model.mixing() * z;
}

}  // namespace levy_ep
