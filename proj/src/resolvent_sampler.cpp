#include "levy_ep/resolvent_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "levy_ep/errors.hpp"
#include "levy_ep/stats.hpp"

namespace levy_ep {

std::complex<double> ExponentialMixture::cf(double theta) const {
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> v = atom;
  for (const auto& ph : phases) v += ph.weight * ph.rate / (ph.rate - i * theta);
  return v;
}

double ExponentialMixture::mean() const {
  double m = 0.0;
  for (const auto& ph : phases) m += ph.weight / ph.rate;
  return m;
}

double ExponentialMixture::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (u < atom || phases.empty()) return 0.0;
  double acc = atom;
  for (const auto& ph : phases) {
    acc += ph.weight;
    if (u < acc) return rng.exponential(ph.rate);
  }
  return rng.exponential(phases.back().rate);
}

std::complex<double> WienerHopfFactors::resolvent_cf(double theta) const {
  return sup.cf(theta) * inf.cf(-theta);
}

namespace {

// Rational part of the exponent: terms coef * z / (rate - z) for up jumps and
// coef * (-z) / (rate + z) for down jumps.
struct RationalExponent {
  double drift = 0.0;  // c - lambda * E[J]
  double half_var = 0.0;
  std::map<double, double> up;    // rate -> lambda * P(phase)
  std::map<double, double> down;  // rate -> lambda * P(phase)

  double operator()(double z) const {
    double v = drift * z + half_var * z * z;
    for (const auto& [rate, coef] : up) v += coef * z / (rate - z);
    for (const auto& [rate, coef] : down) v -= coef * z / (rate + z);
    return v;
  }
};

RationalExponent rational_exponent(const ScalarLevy& f) {
  RationalExponent r;
  r.drift = f.drift;
  r.half_var = 0.5 * f.sigma * f.sigma;
  const ExpMixtureJump* mix = nullptr;
  double rate = 0.0;
  if (const auto* h = std::get_if<Hyperexponential>(&f.jumps)) {
    mix = &h->jumps;
    rate = h->intensity;
  } else if (const auto* cp = std::get_if<CompoundPoisson>(&f.jumps)) {
    mix = std::get_if<ExpMixtureJump>(&cp->size);
    rate = cp->rate;
    if (mix == nullptr && rate > 0.0) {
      throw CapabilityError("Wiener-Hopf factorization needs exponential-mixture jumps");
    }
  }
  if (mix != nullptr && rate > 0.0) {
    r.drift -= rate * jump_mean(f.jumps);
    if (mix->p_up > 0.0) {
      for (const auto& ph : mix->up) {
        if (ph.weight > 0.0) r.up[ph.rate] += rate * mix->p_up * ph.weight;
      }
    }
    if (mix->p_up < 1.0) {
      for (const auto& ph : mix->down) {
        if (ph.weight > 0.0) r.down[ph.rate] += rate * (1.0 - mix->p_up) * ph.weight;
      }
    }
  }
  return r;
}

double bisect(const auto& f, double lo, double hi) {
  // f(lo) < 0 < f(hi)
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 1e-13 * std::abs(mid)) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Point just inside (lo, hi) next to `edge` where f has the wanted sign.
std::optional<double> approach(const auto& f, double edge, double other, bool want_positive) {
  double frac = 1e-3;
  for (int it = 0; it < 200; ++it) {
    const double z = edge + frac * (other - edge);
    if (z == edge) break;
    const double v = f(z);
    if (want_positive ? v > 0.0 : v < 0.0) return z;
    frac *= 0.5;
  }
  return std::nullopt;
}

// Roots of g(x) = 0 for x > 0 where g(0) = -q < 0 and g has simple poles at
// `poles` going to +inf from the left. Returns the roots in increasing order.
std::vector<double> positive_roots(const auto& g, const std::vector<double>& poles) {
  std::vector<double> roots;
  double lo = 0.0;
  for (std::size_t k = 0; k <= poles.size(); ++k) {
    double a = lo;
    if (k > 0) {
      const double other = k < poles.size() ? poles[k] : poles[k - 1] * 2.0 + 1.0;
      const auto p = approach(g, lo, other, false);
      if (!p) throw FactorizationError("could not bracket a root right of a pole");
      a = *p;
    }
    double b;
    if (k < poles.size()) {
      const auto p = approach(g, poles[k], a, true);
      if (!p) throw FactorizationError("could not bracket a root left of a pole");
      b = *p;
    } else {
      b = std::max(2.0 * a, 1.0);
      bool found = false;
      for (int it = 0; it < 2000 && std::isfinite(b); ++it) {
        if (g(b) > 0.0) {
          found = true;
          break;
        }
        b *= 2.0;
      }
      if (!found) break;
    }
    roots.push_back(bisect(g, a, b));
    if (k < poles.size()) lo = poles[k];
  }
  return roots;
}

// E[exp(z S)] = prod(1 - z/pole) / prod(1 - z/root) as atom + exponential phases.
ExponentialMixture partial_fractions(const std::vector<double>& roots,
                                     const std::vector<double>& poles) {
  ExponentialMixture m;
  if (roots.empty()) {
    m.atom = 1.0;
    return m;
  }
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const double beta = roots[j];
    double w = 1.0;
    for (double eta : poles) w *= 1.0 - beta / eta;
    for (std::size_t l = 0; l < roots.size(); ++l) {
      if (l != j) w /= 1.0 - beta / roots[l];
    }
    if (w < -1e-10) throw FactorizationError("negative partial-fraction weight");
    m.phases.push_back({std::max(w, 0.0), beta});
  }
  if (roots.size() == poles.size()) {
    double atom = 1.0;
    for (std::size_t j = 0; j < roots.size(); ++j) atom *= roots[j] / poles[j];
    m.atom = atom;
  }
  double total = m.atom;
  for (const auto& ph : m.phases) total += ph.weight;
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "Wiener-Hopf factor mass " << total << " differs from 1";
    throw FactorizationError(os.str());
  }
  m.atom /= total;
  for (auto& ph : m.phases) ph.weight /= total;
  return m;
}

std::vector<double> keys(const std::map<double, double>& m) {
  std::vector<double> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

}  // namespace

double laplace_exponent(const ScalarLevy& factor, double z) {
  return rational_exponent(factor)(z);
}

WienerHopfFactors wh_factorize(const ScalarLevy& factor, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("wh_factorize: q must be positive");
  const RationalExponent psi = rational_exponent(factor);
  WienerHopfFactors out;
  out.q = q;
  out.up_poles = keys(psi.up);
  out.down_poles = keys(psi.down);

  const auto up_eq = [&](double z) { return psi(z) - q; };
  const auto down_eq = [&](double g) { return psi(-g) - q; };
  const std::vector<double> beta = positive_roots(up_eq, out.up_poles);
  const std::vector<double> gamma = positive_roots(down_eq, out.down_poles);

  const bool diffusive = psi.half_var > 0.0;
  const std::size_t want_up = out.up_poles.size() + ((diffusive || psi.drift > 0.0) ? 1 : 0);
  const std::size_t want_down = out.down_poles.size() + ((diffusive || psi.drift < 0.0) ? 1 : 0);
  if (beta.size() != want_up || gamma.size() != want_down) {
    std::ostringstream os;
    os << "root count mismatch: found " << beta.size() << "/" << gamma.size()
       << " roots for " << out.up_poles.size() << "/" << out.down_poles.size()
       << " poles (up/down)";
    throw FactorizationError(os.str());
  }
  out.sup = partial_fractions(beta, out.up_poles);
  out.inf = partial_fractions(gamma, out.down_poles);
  return out;
}

WienerHopfFactors wh_factorize(const LevyModel& model, double q) {
  if (!model.is_scalar()) {
    throw CapabilityError("Wiener-Hopf factorization needs a one-dimensional single-factor model");
  }
  WienerHopfFactors f = wh_factorize(model.factors()[0], q);
  const double s = model.mixing()(0, 0);
  if (s == 0.0) {
    f.sup = ExponentialMixture{1.0, {}};
    f.inf = ExponentialMixture{1.0, {}};
    f.up_poles.clear();
    f.down_poles.clear();
    return f;
  }
  const double scale = std::abs(s);
  for (auto* mix : {&f.sup, &f.inf}) {
    for (auto& ph : mix->phases) ph.rate /= scale;
  }
  for (auto* poles : {&f.up_poles, &f.down_poles}) {
    for (auto& p : *poles) p /= scale;
  }
  if (s < 0.0) {
    std::swap(f.sup, f.inf);
    std::swap(f.up_poles, f.down_poles);
  }
  return f;
}

// ---------------------------------------------------------------------------

ResolventSampler::ResolventSampler(const LevyModel& model, double q, ResolventRoute route)
    : model_(model), q_(q), route_(route) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("resolvent sampler: q must be positive");
  const bool factorizable = model_.factors().size() == 1 && model_.capabilities().resolvent_samplable &&
                            [&] {
                              try {
                                rational_exponent(model_.factors()[0]);
                                return true;
                              } catch (const CapabilityError&) {
                                return false;
                              }
                            }();
  if (route_ == ResolventRoute::automatic) {
    route_ = factorizable ? ResolventRoute::wiener_hopf : ResolventRoute::exact_path;
  }
  if (route_ == ResolventRoute::wiener_hopf) {
    if (!factorizable) {
      throw CapabilityError("model '" + model_.name() + "' has no Wiener-Hopf resolvent sampler");
    }
    factors_ = wh_factorize(model_.factors()[0], q_);
  } else if (!model_.capabilities().exact_path_samplable) {
    throw CapabilityError("model '" + model_.name() + "' is not resolvent samplable");
  }
}

ResolventSample ResolventSampler::sample(Rng& rng) const {
  if (factors_) {
    const double s = factors_->sup.sample(rng);
    const double i = factors_->inf.sample(rng);
    return {model_.mixing().col(0) * (s - i), std::nullopt};
  }
  const double e = rng.exponential(q_);
  return {sample_increment(model_, e, rng), e};
}

ResolventSample sample_resolvent(const LevyModel& model, double q, Rng& rng, ResolventRoute route) {
  return ResolventSampler(model, q, route).sample(rng);
}

std::vector<CfCheckRow> validate_resolvent_cf(const LevyModel& model, double q,
                                              std::span<const double> thetas,
                                              std::size_t n_samples, Rng& rng,
                                              ResolventRoute route) {
  if (model.dimension() != 1) throw CapabilityError("validate_resolvent_cf: one-dimensional models only");
  if (n_samples < 10000) throw DomainError("validate_resolvent_cf: need at least 1e4 samples");
  const ResolventSampler sampler(model, q, route);
  std::vector<double> xs(n_samples);
  for (auto& x : xs) x = sampler.sample(rng).value(0);

  std::vector<CfCheckRow> rows;
  std::vector<double> re(n_samples), im(n_samples);
  for (double theta : thetas) {
    for (std::size_t k = 0; k < n_samples; ++k) {
      re[k] = std::cos(theta * xs[k]);
      im[k] = std::sin(theta * xs[k]);
    }
    const Estimate er = mean_and_se(re);
    const Estimate ei = mean_and_se(im);
    CfCheckRow row;
    row.theta = theta;
    row.empirical = {er.mean, ei.mean};
    row.target = q / (q + char_exponent(model, theta));
    row.se_re = er.se;
    row.se_im = ei.se;
    const double se = std::hypot(er.se, ei.se);
    row.z = z_score(std::abs(row.empirical - row.target), 0.0, se);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace levy_ep
