#include "levy_ep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "levy_ep/convergence_lab.hpp"
#include "levy_ep/csv.hpp"
#include "levy_ep/errors.hpp"
#include "levy_ep/grid_stats.hpp"
#include "levy_ep/parallel.hpp"
#include "levy_ep/pide_rothe.hpp"
#include "levy_ep/resolvent_sampler.hpp"
#include "levy_ep/sde_schemes.hpp"

namespace levy_ep {

namespace {

// Short rendering for check details and labels; CSV cells use format_number.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string join(const std::vector<std::string>& items, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::size_t count_of(const Config& cfg, const std::string& key) {
  const long long v = cfg.integer(key);
  if (v < 1) throw UsageError("config field '" + key + "': must be positive");
  return static_cast<std::size_t>(v);
}

std::pair<double, double> band(const Config& cfg, const std::string& key) {
  const auto v = cfg.numbers(key);
  if (v.size() != 2 || !(v[0] <= v[1])) {
    throw UsageError("config field '" + key + "': expected 'lo, hi' with lo <= hi");
  }
  return {v[0], v[1]};
}

std::vector<ExpPhase> phases(const Config& cfg, const std::string& rates_key,
                             const std::string& weights_key) {
  std::vector<ExpPhase> out;
  if (!cfg.has(rates_key)) return out;
  const auto rates = cfg.numbers(rates_key);
  std::vector<double> weights(rates.size(), 1.0 / static_cast<double>(rates.size()));
  if (cfg.has(weights_key)) weights = cfg.numbers(weights_key);
  if (weights.size() != rates.size()) {
    throw UsageError("config field '" + weights_key + "': needs one weight per rate");
  }
  for (std::size_t i = 0; i < rates.size(); ++i) out.push_back({weights[i], rates[i]});
  return out;
}

ExpMixtureJump exp_mixture(const Config& cfg) {
  ExpMixtureJump j;
  j.p_up = cfg.number("model.jump.p_up", 0.5);
  j.up = phases(cfg, "model.jump.up_rates", "model.jump.up_weights");
  j.down = phases(cfg, "model.jump.down_rates", "model.jump.down_weights");
  return j;
}

JumpSize jump_from_config(const Config& cfg) {
  const std::string kind = cfg.str("model.jump");
  if (kind == "two_point") {
    return TwoPointJump{cfg.number("model.jump.low", -1.0), cfg.number("model.jump.high", 1.0),
                        cfg.number("model.jump.p_low", 0.5)};
  }
  if (kind == "uniform") {
    return UniformJump{cfg.number("model.jump.lo", -1.0), cfg.number("model.jump.hi", 1.0)};
  }
  if (kind == "normal") {
    return NormalJump{cfg.number("model.jump.mean", 0.0), cfg.number("model.jump.stddev", 1.0)};
  }
  if (kind == "exp_mixture") return exp_mixture(cfg);
  throw UsageError("config field 'model.jump': unknown jump law '" + kind + "' (expected one of " +
                   join(jump_names(), ", ") + ")");
}

// Domain errors raised while building from config are usage errors.
template <class Fn>
auto as_usage(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw UsageError("config field '" + field + "': " + e.what());
  }
}

ResolventRoute route_from_string(const std::string& s) {
  if (s == "automatic") return ResolventRoute::automatic;
  if (s == "wiener_hopf") return ResolventRoute::wiener_hopf;
  if (s == "exact_path") return ResolventRoute::exact_path;
  throw UsageError("config field 'sampler.route': unknown route '" + s + "'");
}

Scheme scheme_field(const std::string& name, const std::string& field) {
  try {
    return scheme_from_string(name);
  } catch (const Error&) {
    throw UsageError("config field '" + field + "': unknown scheme '" + name + "' (expected one of " +
                     join(scheme_names(), ", ") + ")");
  }
}

bool within_z(double z, double limit) { return std::isfinite(z) && std::abs(z) < limit; }

// ---------------------------------------------------------------------------

void run_converge(const Config& cfg, const RunOptions& opt, ExperimentResult& out) {
  const LevyModel model = model_from_config(cfg);
  const SdeProblem problem = problem_from_config(cfg);
  const auto n_values = cfg.integers("converge.n_values");
  const std::size_t paths = count_of(cfg, "converge.paths");
  std::vector<Scheme> schemes;
  for (const auto& s : cfg.words("converge.schemes")) schemes.push_back(scheme_field(s, "converge.schemes"));

  CsvTable table({"scheme", "n", "mse", "se", "slope", "slope_ci_lo", "slope_ci_hi"});
  std::map<Scheme, ConvergenceReport> reports;
  for (Scheme s : schemes) {
    ConvergenceReport rep;
    try {
      rep = rate_ladder(problem, model, s, n_values, paths, opt);
    } catch (const CapabilityError& e) {
      throw CapabilityError("scheme '" + to_string(s) + "' with model '" + model.name() +
                            "': " + e.what());
    }
    for (std::size_t i = 0; i < rep.n_values.size(); ++i) {
      table.row()
          .add(to_string(s))
          .add(rep.n_values[i])
          .add(rep.mse[i].mean)
          .add(rep.mse[i].se)
          .add(rep.slope.slope)
          .add(rep.slope.ci_lo)
          .add(rep.slope.ci_hi);
    }
    const std::string key = "check.slope." + to_string(s);
    if (cfg.has(key)) {
      const auto [lo, hi] = band(cfg, key);
      out.checks.push_back({"slope[" + to_string(s) + "]",
                            rep.slope.slope >= lo && rep.slope.slope <= hi,
                            "slope " + fmt(rep.slope.slope) + " band [" + fmt(lo) + ", " + fmt(hi) + "]"});
    }
    reports.emplace(s, std::move(rep));
  }
  out.outputs.push_back({"converge.csv", table.str()});

  if (cfg.has("check.slope_gap")) {
    const double gap = cfg.number("check.slope_gap");
    const auto ep = reports.find(Scheme::euler_poisson);
    const auto en = reports.find(Scheme::enhanced);
    if (ep == reports.end() || en == reports.end()) {
      throw UsageError("config field 'check.slope_gap': needs schemes euler_poisson and enhanced");
    }
    const double a = en->second.slope.slope, b = ep->second.slope.slope;
    out.checks.push_back({"slope_gap", a < b - gap,
                          "enhanced " + fmt(a) + " < euler_poisson " + fmt(b) + " - " + fmt(gap)});
  }

  if (cfg.flag("check.hitting_closed_form", false)) {
    const auto ep = reports.find(Scheme::euler_poisson);
    if (ep == reports.end()) {
      throw UsageError("config field 'check.hitting_closed_form': needs scheme euler_poisson");
    }
    const double limit = cfg.number("check.hitting_z", 4.0);
    CsvTable hit({"n", "mse", "se", "closed_form", "z"});
    bool pass = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < ep->second.n_values.size(); ++i) {
      const int n = ep->second.n_values[i];
      const Estimate& e = ep->second.mse[i];
      const double target = hitting_error_closed_form(problem, model, n);
      const double z = z_score(e.mean, target, e.se);
      pass = pass && within_z(z, limit);
      worst = std::max(worst, std::abs(z));
      hit.row().add(n).add(e.mean).add(e.se).add(target).add(z);
    }
    out.outputs.push_back({"hitting.csv", hit.str()});
    out.checks.push_back({"hitting_closed_form", pass, "max |z| " + fmt(worst) + " < " + fmt(limit)});
  }

  if (cfg.flag("converge.marginal", false)) {
    const auto ns = cfg.has("converge.marginal.n_values") ? cfg.integers("converge.marginal.n_values")
                                                          : n_values;
    const MarginalLadder ladder = marginal_error_ladder(problem, model, ns, paths, opt);
    CsvTable m({"n", "argmax_i", "max_mse", "se", "terminal_mse", "terminal_se", "slope",
                "slope_ci_lo", "slope_ci_hi"});
    for (const auto& s : ladder.scans) {
      m.row()
          .add(s.n)
          .add(s.argmax)
          .add(s.max.mean)
          .add(s.max.se)
          .add(s.per_index.back().mean)
          .add(s.per_index.back().se)
          .add(ladder.slope.slope)
          .add(ladder.slope.ci_lo)
          .add(ladder.slope.ci_hi);
    }
    out.outputs.push_back({"marginal.csv", m.str()});
    if (cfg.has("check.marginal_slope")) {
      const auto [lo, hi] = band(cfg, "check.marginal_slope");
      out.checks.push_back({"marginal_slope", ladder.slope.slope >= lo && ladder.slope.slope <= hi,
                            "slope " + fmt(ladder.slope.slope) + " band [" + fmt(lo) + ", " +
                                fmt(hi) + "]"});
    }
  }

  if (cfg.flag("converge.discretization", false)) {
    const DiscretizationScan scan = discretization_bound_scan(problem, model, n_values, paths, opt);
    CsvTable d({"n", "sup_error", "se", "functional", "functional_se", "ratio", "K", "pass"});
    for (const auto& r : scan.rows) {
      d.row()
          .add(r.n)
          .add(r.sup_error.mean)
          .add(r.sup_error.se)
          .add(r.functional.mean)
          .add(r.functional.se)
          .add(r.ratio)
          .add(scan.K)
          .add(r.sup_error.mean - 3.0 * r.sup_error.se <= scan.K * r.functional.mean);
    }
    out.outputs.push_back({"discretization.csv", d.str()});
    out.checks.push_back({"discretization_bound", scan.bounded, "K " + fmt(scan.K)});
  }
}

void run_gridstats(const Config& cfg, const RunOptions& opt, ExperimentResult& out) {
  const double T = cfg.number("gridstats.T", 1.0);
  bool any = false;

  if (cfg.has("gridstats.tau.n_values")) {
    any = true;
    const auto ns = cfg.integers("gridstats.tau.n_values");
    const std::size_t grids = count_of(cfg, "gridstats.tau.grids");
    const TauScan scan = as_usage("gridstats.tau", [&] {
      return tau_moment_scan(ns, T, grids, opt.seed, opt.workers);
    });
    CsvTable t({"n", "estimate", "se", "bound", "pass"});
    for (const auto& r : scan.rows) {
      const double bound = scan.kappa * r.log_bound;
      t.row().add(r.n).add(r.tau.mean).add(r.tau.se).add(bound).add(r.tau.mean - 3.0 * r.tau.se <= bound);
    }
    out.outputs.push_back({"tau.csv", t.str()});
    CsvTable f({"n", "functional", "se", "slope", "slope_ci_lo", "slope_ci_hi"});
    for (const auto& r : scan.rows) {
      f.row()
          .add(r.n)
          .add(r.functional.mean)
          .add(r.functional.se)
          .add(scan.functional_slope.slope)
          .add(scan.functional_slope.ci_lo)
          .add(scan.functional_slope.ci_hi);
    }
    out.outputs.push_back({"tau_functional.csv", f.str()});
    if (cfg.has("check.tau_slope")) {
      const auto [lo, hi] = band(cfg, "check.tau_slope");
      out.checks.push_back({"tau_slope", scan.tau_slope.slope >= lo && scan.tau_slope.slope <= hi,
                            "slope " + fmt(scan.tau_slope.slope) + " band [" + fmt(lo) + ", " +
                                fmt(hi) + "]"});
    }
    out.checks.push_back({"tau_ratio_bounded", scan.bounded, "kappa " + fmt(scan.kappa)});
  }

  if (cfg.has("gridstats.maxdev.n_values")) {
    any = true;
    const auto ns = cfg.integers("gridstats.maxdev.n_values");
    const auto ps = cfg.integers("gridstats.maxdev.p");
    const std::size_t grids = count_of(cfg, "gridstats.maxdev.grids");
    CsvTable t({"n", "p", "estimate", "se", "bound", "pass"});
    for (int p : ps) {
      for (int n : ns) {
        const auto r = as_usage("gridstats.maxdev", [&] {
          return max_grid_deviation_check(n, T, p, grids, opt.seed, opt.workers);
        });
        t.row().add(n).add(p).add(r.lhs.mean).add(r.lhs.se).add(r.rhs).add(r.pass);
        out.checks.push_back({"max_deviation[n=" + std::to_string(n) + ",p=" + std::to_string(p) + "]",
                              r.pass, fmt(r.lhs.mean) + " +- " + fmt(r.lhs.se) + " vs " + fmt(r.rhs)});
      }
    }
    out.outputs.push_back({"maxdev.csv", t.str()});
  }

  if (cfg.has("gridstats.gamma.n_values")) {
    any = true;
    const auto ns = cfg.integers("gridstats.gamma.n_values");
    const auto Ts = cfg.has("gridstats.gamma.T_values") ? cfg.numbers("gridstats.gamma.T_values")
                                                        : std::vector<double>(ns.size(), T);
    if (Ts.size() != ns.size()) {
      throw UsageError("config field 'gridstats.gamma.T_values': needs one T per n");
    }
    const std::size_t grids = count_of(cfg, "gridstats.gamma.grids");
    CsvTable t({"n", "T", "moment", "estimate", "se", "closed_form", "z"});
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const auto closed = as_usage("gridstats.gamma", [&] { return gamma_hitting_moments(ns[i], Ts[i]); });
      const auto mc = gamma_hitting_moments_mc(ns[i], Ts[i], grids, opt.seed, opt.workers);
      const std::pair<int, std::pair<Estimate, double>> rows[] = {{2, {mc.second, closed.second}},
                                                                  {4, {mc.fourth, closed.fourth}}};
      for (const auto& [order, v] : rows) {
        const double z = z_score(v.first.mean, v.second, v.first.se);
        t.row().add(ns[i]).add(Ts[i]).add(order).add(v.first.mean).add(v.first.se).add(v.second).add(z);
        out.checks.push_back({"gamma_moment[n=" + std::to_string(ns[i]) + ",T=" + fmt(Ts[i]) +
                                  ",order=" + std::to_string(order) + "]",
                              within_z(z, 4.0), "z " + fmt(z)});
      }
    }
    out.outputs.push_back({"gamma.csv", t.str()});
  }

  if (cfg.has("gridstats.spacing.m_values")) {
    any = true;
    const auto ms = cfg.integers("gridstats.spacing.m_values");
    const std::size_t samples = count_of(cfg, "gridstats.spacing.samples");
    CsvTable t({"m", "estimate", "se", "closed_form", "z"});
    for (int m : ms) {
      const double target = as_usage("gridstats.spacing", [&] { return harmonic_gap_mean(m); });
      const auto v = chunked_samples(samples, opt.seed, 0x535041ULL + static_cast<std::uint64_t>(m),
                                     opt.workers, [m](Rng& rng) { return sample_largest_spacing(m, rng); });
      const Estimate e = mean_and_se(v);
      const double z = z_score(e.mean, target, e.se);
      t.row().add(m).add(e.mean).add(e.se).add(target).add(z);
      out.checks.push_back({"spacing_mean[m=" + std::to_string(m) + "]", within_z(z, 4.0), "z " + fmt(z)});
    }
    out.outputs.push_back({"spacing.csv", t.str()});
  }

  if (cfg.has("gridstats.mauldon.m_values")) {
    any = true;
    const auto ms = cfg.integers("gridstats.mauldon.m_values");
    const auto ss = cfg.numbers("gridstats.mauldon.s_values");
    if (ss.size() != ms.size()) {
      throw UsageError("config field 'gridstats.mauldon.s_values': needs one s per m");
    }
    const std::size_t samples = count_of(cfg, "gridstats.mauldon.samples");
    CsvTable t({"m", "s", "estimate", "se", "target", "z"});
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const auto r = as_usage("gridstats.mauldon", [&] {
        return mauldon_moment_check(ms[i], ss[i], samples, opt.seed, opt.workers);
      });
      t.row().add(ms[i]).add(ss[i]).add(r.empirical).add(r.se).add(r.target).add(r.z);
      out.checks.push_back({"mauldon[m=" + std::to_string(ms[i]) + ",s=" + fmt(ss[i]) + "]",
                            within_z(r.z, 5.0), "z " + fmt(r.z)});
    }
    out.outputs.push_back({"mauldon.csv", t.str()});
  }

  if (!any) {
    throw UsageError("gridstats: no section configured (gridstats.tau, gridstats.maxdev, "
                     "gridstats.gamma, gridstats.spacing or gridstats.mauldon)");
  }
}

void run_validate_sampler(const Config& cfg, const RunOptions& opt, ExperimentResult& out) {
  const LevyModel model = model_from_config(cfg);
  const auto qs = cfg.numbers("sampler.q");
  const auto thetas = cfg.numbers("sampler.thetas");
  const std::size_t samples = count_of(cfg, "sampler.samples");
  const ResolventRoute route = route_from_string(cfg.str("sampler.route", "automatic"));
  const double limit = cfg.number("check.cf_z", 5.0);

  CsvTable cf({"q", "theta", "re_emp", "im_emp", "re_target", "im_target", "z"});
  for (std::size_t k = 0; k < qs.size(); ++k) {
    Rng rng = Rng::substream(opt.seed, 0x4346ULL, k);
    const auto rows = as_usage("sampler", [&] {
      return validate_resolvent_cf(model, qs[k], thetas, samples, rng, route);
    });
    double worst = 0.0;
    bool pass = true;
    for (const auto& r : rows) {
      cf.row()
          .add(qs[k])
          .add(r.theta)
          .add(r.empirical.real())
          .add(r.empirical.imag())
          .add(r.target.real())
          .add(r.target.imag())
          .add(r.z);
      pass = pass && within_z(r.z, limit);
      worst = std::max(worst, std::abs(r.z));
    }
    out.checks.push_back({"resolvent_cf[q=" + fmt(qs[k]) + "]", pass,
                          "max |z| " + fmt(worst) + " < " + fmt(limit)});
  }
  out.outputs.push_back({"cf.csv", cf.str()});

  const bool rational = model.is_scalar() && model.capabilities().resolvent_samplable &&
                        route != ResolventRoute::exact_path;
  if (rational) {
    const int points = static_cast<int>(cfg.integer("sampler.identity_points", 50));
    if (points < 2) throw UsageError("config field 'sampler.identity_points': at least 2");
    CsvTable id({"q", "theta", "abs_error"});
    bool any = false;
    for (double q : qs) {
      WienerHopfFactors f;
      try {
        f = wh_factorize(model, q);
      } catch (const CapabilityError&) {
        continue;
      }
      any = true;
      double worst = 0.0;
      for (int j = 0; j < points; ++j) {
        const double theta = -20.0 + 40.0 * j / (points - 1);
        const std::complex<double> target = q / (q + char_exponent(model, theta));
        const double err = std::abs(f.resolvent_cf(theta) - target);
        worst = std::max(worst, err);
        id.row().add(q).add(theta).add(err);
      }
      out.checks.push_back({"wiener_hopf_identity[q=" + fmt(q) + "]", worst < 1e-8,
                            "max error " + fmt(worst)});
    }
    if (any) out.outputs.push_back({"identity.csv", id.str()});
  }
}

void run_pide(const Config& cfg, const RunOptions& opt, ExperimentResult& out) {
  const LevyModel model = model_from_config(cfg);
  const SdeProblem problem = problem_from_config(cfg);
  std::map<std::string, double> fparams;
  for (const auto& [k, v] : cfg.section("pide.f")) fparams[k] = parse_number(v, "pide.f." + k);
  const TestFunction f = as_usage("pide.f", [&] { return make_test_function(cfg.str("pide.f"), fparams); });
  const int n = static_cast<int>(cfg.integer("pide.n"));
  const double x0 = cfg.number("pide.x0", problem.y0(0));
  const SpatialGrid grid = as_usage("pide.grid", [&] {
    return SpatialGrid(cfg.number("pide.x_lo"), cfg.number("pide.x_hi"),
                       static_cast<int>(cfg.integer("pide.nodes")));
  });
  const std::size_t paths = count_of(cfg, "pide.paths");
  const double limit = cfg.number("check.pide_z", 5.0);

  const auto rows = as_usage("pide", [&] {
    return rothe_vs_monte_carlo(problem, model, f, n, x0, grid, paths, opt);
  });
  CsvTable t({"i", "x0", "u_i", "mc_mean", "mc_se", "z"});
  bool pass = true;
  double worst = 0.0;
  for (const auto& r : rows) {
    t.row().add(r.i).add(r.x0).add(r.u).add(r.mc.mean).add(r.mc.se).add(r.z);
    pass = pass && within_z(r.z, limit);
    worst = std::max(worst, std::abs(r.z));
  }
  out.outputs.push_back({"pide.csv", t.str()});
  out.checks.push_back({"rothe_vs_mc", pass, "max |z| " + fmt(worst) + " < " + fmt(limit)});

  if (cfg.flag("pide.laplace_carlson", false)) {
    const auto lc = laplace_carlson_check(problem, model, f, n, x0, grid, paths, opt);
    CsvTable l({"x0", "u_1", "mc_mean", "mc_se", "z"});
    l.row().add(x0).add(lc.lhs).add(lc.rhs.mean).add(lc.rhs.se).add(lc.z);
    out.outputs.push_back({"laplace_carlson.csv", l.str()});
    out.checks.push_back({"laplace_carlson", within_z(lc.z, limit), "z " + fmt(lc.z)});
  }
}

void run_simulate(const Config& cfg, const RunOptions& opt, ExperimentResult& out) {
  const LevyModel model = model_from_config(cfg);
  const SdeProblem problem = problem_from_config(cfg);
  const Scheme scheme = scheme_field(cfg.str("simulate.scheme"), "simulate.scheme");
  const int n = static_cast<int>(cfg.integer("simulate.n"));
  if (n < 1) throw UsageError("config field 'simulate.n': must be positive");
  const std::size_t paths = count_of(cfg, "simulate.paths");

  std::vector<SchemeTrajectory> trajectories(paths);
  parallel_for(paths, opt.workers, [&](std::size_t p) {
    Rng rng = Rng::substream(opt.seed, static_cast<std::uint64_t>(n), p);
    switch (scheme) {
      case Scheme::euler_poisson:
        trajectories[p] = run_euler_poisson(problem, model, n, rng);
        break;
      case Scheme::enhanced:
        trajectories[p] = run_enhanced(problem, model, n, rng);
        break;
      case Scheme::euler_maruyama: {
        const double dt = problem.T / n;
        Eigen::MatrixXd inc(model.dimension(), n);
        for (int i = 0; i < n; ++i) inc.col(i) = sample_increment(model, dt, rng);
        SchemeTrajectory tr;
        tr.grid = RandomGrid{uniform_grid(n, problem.T), 0.0, n};
        tr.states = euler_chain(problem, inc);
        tr.increments = inc;
        tr.terminal = tr.states.col(n);
        trajectories[p] = std::move(tr);
        break;
      }
    }
  });

  const auto dy = problem.y0.size();
  const auto dx = model.dimension();
  std::vector<std::string> header{"path_id", "step", "t_i"};
  for (Eigen::Index k = 0; k < dy; ++k) header.push_back("y" + std::to_string(k));
  for (Eigen::Index k = 0; k < dx; ++k) header.push_back("dx" + std::to_string(k));
  CsvTable t(header);
  for (std::size_t p = 0; p < paths; ++p) {
    const auto& tr = trajectories[p];
    for (Eigen::Index i = 0; i < tr.states.cols(); ++i) {
      t.row().add(p).add(static_cast<long long>(i));
      t.add(tr.grid ? format_number(tr.grid->arrivals[static_cast<std::size_t>(i)]) : std::string("nan"));
      for (Eigen::Index k = 0; k < dy; ++k) t.add(tr.states(k, i));
      for (Eigen::Index k = 0; k < dx; ++k) t.add(i == 0 ? 0.0 : tr.increments(k, i - 1));
    }
  }
  out.outputs.push_back({"trajectories.csv", t.str()});
}

}  // namespace

bool ExperimentResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const OutputFile& ExperimentResult::output(const std::string& name) const {
  for (const auto& o : outputs) {
    if (o.name == name) return o;
  }
  throw Error("experiment produced no output named '" + name + "'");
}

std::vector<std::string> experiment_names() {
  return {"converge", "gridstats", "validate-sampler", "pide", "simulate"};
}

std::vector<std::string> model_names() { return {"brownian", "compound_poisson", "hyperexponential"}; }

std::vector<std::string> jump_names() { return {"two_point", "uniform", "normal", "exp_mixture"}; }

std::string list_registries() {
  std::string out;
  out += "models: " + join(model_names()) + "\n";
  out += "jumps: " + join(jump_names()) + "\n";
  out += "coefficients: " + join(coefficient_names()) + "\n";
  out += "schemes: " + join(scheme_names()) + "\n";
  out += "test_functions: " + join(test_function_names()) + "\n";
  out += "experiments: " + join(experiment_names()) + "\n";
  return out;
}

LevyModel model_from_config(const Config& cfg) {
  const std::string kind = cfg.str("model.kind");
  return as_usage("model", [&]() -> LevyModel {
    const double drift = cfg.number("model.drift", 0.0);
    if (kind == "brownian") return LevyModel::brownian(drift, cfg.number("model.sigma", 1.0));
    if (kind == "compound_poisson") {
      return LevyModel::compound_poisson(drift, cfg.number("model.rate"), jump_from_config(cfg),
                                         cfg.number("model.sigma", 0.0));
    }
    if (kind == "hyperexponential") {
      return LevyModel::hyperexponential(drift, cfg.number("model.sigma", 0.0),
                                         cfg.number("model.intensity"), exp_mixture(cfg));
    }
    throw UsageError("config field 'model.kind': unknown model '" + kind + "' (expected one of " +
                     join(model_names(), ", ") + ")");
  });
}

SdeProblem problem_from_config(const Config& cfg) {
  const std::string name = cfg.str("problem.coefficient");
  std::map<std::string, double> params;
  for (const char* key : {"value", "scale", "base", "amplitude"}) {
    const std::string field = std::string("problem.") + key;
    if (cfg.has(field)) params[key] = cfg.number(field);
  }
  return as_usage("problem", [&] {
    return make_problem(make_coefficient(name, params), cfg.number("problem.y0"),
                        cfg.number("problem.T", 1.0));
  });
}

ExperimentResult run_experiment(const Config& cfg, unsigned workers) {
  ExperimentResult out;
  out.kind = cfg.str("experiment");
  RunOptions opt;
  if (!cfg.has("master_seed")) throw UsageError("config field 'master_seed': missing (mandatory)");
  opt.seed = cfg.u64("master_seed");
  opt.workers = std::max(1u, workers);
  if (out.kind == "converge") {
    run_converge(cfg, opt, out);
  } else if (out.kind == "gridstats") {
    run_gridstats(cfg, opt, out);
  } else if (out.kind == "validate-sampler") {
    run_validate_sampler(cfg, opt, out);
  } else if (out.kind == "pide") {
    run_pide(cfg, opt, out);
  } else if (out.kind == "simulate") {
    run_simulate(cfg, opt, out);
  } else {
    throw UsageError("config field 'experiment': unknown experiment '" + out.kind +
                     "' (expected one of " + join(experiment_names(), ", ") + ")");
  }
  return out;
}

std::string git_blob_sha1(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("sha1: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("sha1: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string render_manifest(const Config& cfg, const ExperimentResult& result) {
  std::string out = "# levy_ep manifest\n";
  for (const auto& o : result.outputs) out += "# output " + o.name + " " + git_blob_sha1(o.content) + "\n";
  for (const auto& c : result.checks) {
    out += std::string("# ") + (c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
  }
  out += cfg.to_text();
  return out;
}

std::string render_summary_json(const Config& cfg, const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["experiment"] = result.kind;
  j["master_seed"] = cfg.str("master_seed");
  j["all_pass"] = result.all_pass();
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : result.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  auto& outputs = j["outputs"] = nlohmann::ordered_json::object();
  for (const auto& o : result.outputs) outputs[o.name] = git_blob_sha1(o.content);
  return j.dump(2) + "\n";
}

void write_artifacts(const Config& cfg, const ExperimentResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir + "': " + ec.message());
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) throw Error("cannot write '" + (fs::path(dir) / name).string() + "'");
  };
  for (const auto& o : result.outputs) write(o.name, o.content);
  write("manifest.cfg", render_manifest(cfg, result));
  write("summary.json", render_summary_json(cfg, result));
}

}  // namespace levy_ep
