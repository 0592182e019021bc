#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levy_ep/rng.hpp"
#include "levy_ep/stats.hpp"

namespace levy_ep {

/// Largest gap sup_{s in [0,T]} (s - iota(s)) of a grid. `arrivals` may or
/// may not include the leading 0; the last interval is truncated at T.
double largest_gap(std::span<const double> arrivals, double T);

/// (sum_{j=1}^m 1/j) / m: the mean largest spacing of m intervals cut by
/// m - 1 uniforms.
double harmonic_gap_mean(int m);

/// Largest of m spacings of [0,1] cut by m - 1 independent uniforms.
double sample_largest_spacing(int m, Rng& rng);

struct MauldonCheck {
  double empirical = 0.0;
  double se = 0.0;
  double target = 0.0;  // m! / ((1 - s) prod_{j=2}^m (j - s))
  double z = 0.0;
};

/// Monte Carlo E[(1 - lambda_m s)^{-m}] against its closed form, |s| < 1/2.
MauldonCheck mauldon_moment_check(int m, double s, std::size_t n_samples, std::uint64_t seed,
                                  unsigned workers = 1);

double mauldon_target(int m, double s);

struct HittingMoments {
  double second = 0.0;  // E|T - t_n|^2 = T^2 / n
  double fourth = 0.0;  // E|T - t_n|^4 = 3 T^4 (2 + n) / n^3
};

HittingMoments gamma_hitting_moments(int n, double T);

/// E[e(n/T)^i] = i! (T/n)^i.
double exp_raw_moments(int i, int n, double T);

/// E|T - Gamma(n, n/T)| by adaptive quadrature of the Gamma density.
double gamma_mean_abs_deviation(int n, double T);

struct TauScanRow {
  int n = 0;
  Estimate tau;           // E[tau]
  Estimate functional;    // E[2 tau + tau^2]
  double log_bound = 0.0; // T log(n/T + 1) / n
  double ratio = 0.0;     // E[tau] / log_bound
  double ratio_se = 0.0;
};

struct TauScan {
  std::vector<TauScanRow> rows;
  SlopeFit tau_slope;         // log E[tau] vs log n
  SlopeFit functional_slope;  // log E[2 tau + tau^2] vs log n
  double kappa = 0.0;         // ratio at the smallest n
  bool bounded = false;       // every ratio - 3 se <= kappa
};

/// tau over Poisson grids on [0, T] at each n.
TauScan tau_moment_scan(std::span<const int> n_values, double T, std::size_t grids_per_n,
                        std::uint64_t seed, unsigned workers = 1);

struct MaxDeviationCheck {
  int n = 0;
  int p = 0;
  Estimate lhs;      // E[max_i |t_i - iT/n|^p]
  double rhs = 0.0;  // 8 E|t_n - T|^p
  bool pass = false; // lhs.mean - 3 se <= rhs
};

MaxDeviationCheck max_grid_deviation_check(int n, double T, int p, std::size_t grids,
                                           std::uint64_t seed, unsigned workers = 1);

/// Monte Carlo moments of t_n - T over fixed-n grids.
struct GammaMomentEstimate {
  Estimate second;
  Estimate fourth;
};

GammaMomentEstimate gamma_hitting_moments_mc(int n, double T, std::size_t grids,
                                             std::uint64_t seed, unsigned workers = 1);

/// Runs draw(rng) for `count` samples split into fixed chunks, each chunk
/// with its own substream, and returns the values in index order.
std::vector<double> chunked_samples(std::size_t count, std::uint64_t seed, std::uint64_t tag,
                                    unsigned workers,
                                    const std::function<double(Rng&)>& draw);

}  // namespace levy_ep
