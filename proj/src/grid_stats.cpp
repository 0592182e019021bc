#include "levy_ep/grid_stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levy_ep/errors.hpp"
#include "levy_ep/parallel.hpp"
#include "levy_ep/sde_schemes.hpp"

namespace levy_ep {

namespace {

constexpr std::size_t kChunk = 4096;

}  // namespace

std::vector<double> chunked_samples(std::size_t count, std::uint64_t seed, std::uint64_t tag,
                                    unsigned workers, const std::function<double(Rng&)>& draw) {
  std::vector<double> out(count);
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    Rng rng = Rng::substream(seed, tag, c);
    const std::size_t end = std::min(count, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) out[i] = draw(rng);
  });
  return out;
}

double largest_gap(std::span<const double> arrivals, double T) {
  if (!(T > 0.0)) throw DomainError("largest_gap: T must be positive");
  if (arrivals.empty()) throw DomainError("largest_gap: empty grid");
  double prev = 0.0, gap = 0.0;
  for (double t : arrivals) {
    if (t <= 0.0) continue;
    if (t >= T) return std::max(gap, T - prev);
    gap = std::max(gap, t - prev);
    prev = t;
  }
  return std::max(gap, T - prev);
}

double harmonic_gap_mean(int m) {
  if (m < 1) throw DomainError("harmonic_gap_mean: m must be at least 1");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(m));
  for (int j = m; j >= 1; --j) terms.push_back(1.0 / j);
  return compensated_sum(terms) / m;
}

double sample_largest_spacing(int m, Rng& rng) {
  if (m < 1) throw DomainError("largest spacing: m must be at least 1");
  if (m == 1) return 1.0;
  // Spacings of m - 1 ordered uniforms are normalized i.i.d. exponentials.
  double total = 0.0, largest = 0.0;
  for (int j = 0; j < m; ++j) {
    const double e = rng.exponential(1.0);
    total += e;
    largest = std::max(largest, e);
  }
  return largest / total;
}

double mauldon_target(int m, double s) {
  if (m < 1) throw DomainError("mauldon: m must be at least 1");
  if (!(std::abs(s) < 0.5)) throw DomainError("mauldon: need |s| < 1/2");
  double prod = 1.0;
  for (int j = 1; j <= m; ++j) prod *= j / (j - s);
  return prod;
}

MauldonCheck mauldon_moment_check(int m, double s, std::size_t n_samples, std::uint64_t seed,
                                  unsigned workers) {
  MauldonCheck out;
  out.target = mauldon_target(m, s);
  const auto values = chunked_samples(n_samples, seed, 0x4d41554cULL + static_cast<std::uint64_t>(m),
                                      workers, [m, s](Rng& rng) {
                                        const double lambda = sample_largest_spacing(m, rng);
                                        double base = 1.0;
                                        for (int j = 0; j < m; ++j) base *= 1.0 - lambda * s;
                                        return 1.0 / base;
                                      });
  const Estimate e = mean_and_se(values);
  out.empirical = e.mean;
  out.se = e.se;
  out.z = z_score(e.mean, out.target, e.se);
  return out;
}

HittingMoments gamma_hitting_moments(int n, double T) {
  if (n < 1) throw DomainError("gamma_hitting_moments: n must be at least 1");
  const double dn = n;
  return {T * T / dn, 3.0 * std::pow(T, 4) * (2.0 + dn) / (dn * dn * dn)};
}

double exp_raw_moments(int i, int n, double T) {
  if (i < 1) throw DomainError("exp_raw_moments: order must be at least 1");
  if (n < 1) throw DomainError("exp_raw_moments: n must be at least 1");
  double v = 1.0;
  for (int k = 1; k <= i; ++k) v *= k * (T / n);
  return v;
}

double gamma_mean_abs_deviation(int n, double T) {
  if (n < 1) throw DomainError("gamma_mean_abs_deviation: n must be at least 1");
  if (!(T > 0.0)) throw DomainError("gamma_mean_abs_deviation: T must be positive");
  const boost::math::gamma_distribution<double> law(n, T / n);
  const auto integrand = [&](double x) { return std::abs(x - T) * boost::math::pdf(law, x); };
  const double sd = T / std::sqrt(static_cast<double>(n));
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double below = Quad::integrate(integrand, std::max(0.0, T - 60.0 * sd), T, 20, 1e-13);
  const double above = Quad::integrate(integrand, T, T + 60.0 * sd + 40.0 * T / n, 20, 1e-13);
  return below + above;
}

TauScan tau_moment_scan(std::span<const int> n_values, double T, std::size_t grids_per_n,
                        std::uint64_t seed, unsigned workers) {
  if (grids_per_n < 1000) throw DomainError("tau_moment_scan: need at least 1e3 grids per n");
  if (n_values.size() < 2) throw DomainError("tau_moment_scan: need at least two n values");
  TauScan scan;
  std::vector<double> ns;
  std::vector<Estimate> taus, funcs;
  for (int n : n_values) {
    const auto tau = chunked_samples(grids_per_n, seed, 0x544155ULL + static_cast<std::uint64_t>(n),
                                     workers, [n, T](Rng& rng) {
                                       const RandomGrid g = build_grid_past(n, T, rng);
                                       return largest_gap(g.arrivals, T);
                                     });
    std::vector<double> func(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) func[i] = 2.0 * tau[i] + tau[i] * tau[i];
    TauScanRow row;
    row.n = n;
    row.tau = mean_and_se(tau);
    row.functional = mean_and_se(func);
    row.log_bound = T * std::log(n / T + 1.0) / n;
    row.ratio = row.tau.mean / row.log_bound;
    row.ratio_se = row.tau.se / row.log_bound;
    scan.rows.push_back(row);
    ns.push_back(n);
    taus.push_back(row.tau);
    funcs.push_back(row.functional);
  }
  scan.tau_slope = fit_loglog(ns, taus);
  scan.functional_slope = fit_loglog(ns, funcs);
  scan.kappa = scan.rows.front().ratio;
  scan.bounded = true;
  for (const auto& row : scan.rows) {
    if (row.ratio - 3.0 * row.ratio_se > scan.kappa) scan.bounded = false;
  }
  return scan;
}

MaxDeviationCheck max_grid_deviation_check(int n, double T, int p, std::size_t grids,
                                           std::uint64_t seed, unsigned workers) {
  MaxDeviationCheck out;
  out.n = n;
  out.p = p;
  switch (p) {
    case 1:
      out.rhs = 8.0 * gamma_mean_abs_deviation(n, T);
      break;
    case 2:
      out.rhs = 8.0 * gamma_hitting_moments(n, T).second;
      break;
    case 4:
      out.rhs = 8.0 * gamma_hitting_moments(n, T).fourth;
      break;
    default:
      throw DomainError("max_grid_deviation_check: p must be 1, 2 or 4");
  }
  const auto values = chunked_samples(
      grids, seed, 0x4d4158ULL + static_cast<std::uint64_t>(n) * 8 + static_cast<std::uint64_t>(p),
      workers, [n, T, p](Rng& rng) {
        const RandomGrid g = build_grid(n, T, rng);
        double worst = 0.0;
        for (int i = 1; i <= n; ++i) {
          worst = std::max(worst, std::abs(g.arrivals[static_cast<std::size_t>(i)] - T * i / n));
        }
        return std::pow(worst, p);
      });
  out.lhs = mean_and_se(values);
  out.pass = out.lhs.mean - 3.0 * out.lhs.se <= out.rhs;
  return out;
}

GammaMomentEstimate gamma_hitting_moments_mc(int n, double T, std::size_t grids,
                                             std::uint64_t seed, unsigned workers) {
  const auto dev = chunked_samples(grids, seed, 0x47414dULL + static_cast<std::uint64_t>(n), workers,
                                   [n, T](Rng& rng) {
                                     double t = 0.0;
                                     for (int i = 0; i < n; ++i) t += rng.exponential(n / T);
                                     return t - T;
                                   });
  std::vector<double> d2(dev.size()), d4(dev.size());
  for (std::size_t i = 0; i < dev.size(); ++i) {
    d2[i] = dev[i] * dev[i];
    d4[i] = d2[i] * d2[i];
  }
  return {mean_and_se(d2), mean_and_se(d4)};
}

}  // namespace levy_ep
