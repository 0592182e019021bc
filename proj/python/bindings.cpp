#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levy_ep/config.hpp"
#include "levy_ep/convergence_lab.hpp"
#include "levy_ep/errors.hpp"
#include "levy_ep/experiments.hpp"
#include "levy_ep/grid_stats.hpp"
#include "levy_ep/levy_core.hpp"
#include "levy_ep/pide_rothe.hpp"
#include "levy_ep/resolvent_sampler.hpp"
#include "levy_ep/sde_problem.hpp"
#include "levy_ep/sde_schemes.hpp"

namespace py = pybind11;
using namespace levy_ep;

namespace {

ResolventRoute route_from(const std::string& s) {
  if (s == "automatic") return ResolventRoute::automatic;
  if (s == "wiener_hopf") return ResolventRoute::wiener_hopf;
  if (s == "exact_path") return ResolventRoute::exact_path;
  throw DomainError("unknown resolvent route '" + s + "'");
}

py::dict trajectory_dict(const SchemeTrajectory& t) {
  py::dict d;
  d["states"] = t.states;
  d["increments"] = t.increments;
  d["terminal"] = t.terminal;
  if (t.grid) {
    d["arrivals"] = t.grid->arrivals;
  } else {
    d["arrivals"] = py::none();
  }
  return d;
}

py::dict checks_dict(const ExperimentResult& r) {
  py::dict d;
  d["kind"] = r.kind;
  d["all_pass"] = r.all_pass();
  py::list checks;
  for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.pass, c.detail));
  d["checks"] = checks;
  py::dict outputs;
  for (const auto& o : r.outputs) outputs[py::str(o.name)] = o.content;
  d["outputs"] = outputs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Euler-Poisson simulation of Levy-driven SDEs";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<FactorizationError>(m, "FactorizationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<NumericalBlowup>(m, "NumericalBlowup", base.ptr());

  py::class_<TwoPointJump>(m, "TwoPointJump")
      .def(py::init([](double low, double high, double p_low) { return TwoPointJump{low, high, p_low}; }),
           py::arg("low") = -1.0, py::arg("high") = 1.0, py::arg("p_low") = 0.5);
  py::class_<UniformJump>(m, "UniformJump")
      .def(py::init([](double lo, double hi) { return UniformJump{lo, hi}; }), py::arg("lo") = -1.0,
           py::arg("hi") = 1.0);
  py::class_<NormalJump>(m, "NormalJump")
      .def(py::init([](double mean, double stddev) { return NormalJump{mean, stddev}; }),
           py::arg("mean") = 0.0, py::arg("stddev") = 1.0);
  py::class_<ExpPhase>(m, "ExpPhase")
      .def(py::init([](double weight, double rate) { return ExpPhase{weight, rate}; }), py::arg("weight"),
           py::arg("rate"))
      .def_readonly("weight", &ExpPhase::weight)
      .def_readonly("rate", &ExpPhase::rate);
  py::class_<ExpMixtureJump>(m, "ExpMixtureJump")
      .def(py::init([](double p_up, std::vector<ExpPhase> up, std::vector<ExpPhase> down) {
             return ExpMixtureJump{p_up, std::move(up), std::move(down)};
           }),
           py::arg("p_up"), py::arg("up"), py::arg("down"));

  py::class_<LevyModel>(m, "LevyModel")
      .def_static("brownian", py::overload_cast<double, double>(&LevyModel::brownian), py::arg("drift"),
                  py::arg("sigma"))
      .def_static("compound_poisson", &LevyModel::compound_poisson, py::arg("drift"), py::arg("rate"),
                  py::arg("jump"), py::arg("sigma") = 0.0)
      .def_static("hyperexponential", &LevyModel::hyperexponential, py::arg("drift"), py::arg("sigma"),
                  py::arg("intensity"), py::arg("jumps"))
      .def_static("compose", &LevyModel::compose, py::arg("mixing"), py::arg("parts"))
      .def_property_readonly("name", &LevyModel::name)
      .def_property_readonly("dimension", &LevyModel::dimension)
      .def("char_exponent", [](const LevyModel& model, double theta) { return char_exponent(model, theta); });

  py::class_<Coefficient>(m, "Coefficient")
      .def_static("zero", &Coefficient::zero, py::arg("dim_y") = 1, py::arg("dim_x") = 1)
      .def_static("constant", py::overload_cast<double>(&Coefficient::constant), py::arg("value"))
      .def_static("linear", &Coefficient::linear, py::arg("scale") = 1.0, py::arg("dim_y") = 1)
      .def_static("sine", &Coefficient::sine, py::arg("base"), py::arg("amplitude"))
      .def_property_readonly("name", &Coefficient::name)
      .def("__call__", [](const Coefficient& a, const Eigen::VectorXd& y) { return a(y); });

  py::class_<SdeProblem>(m, "SdeProblem")
      .def_readonly("T", &SdeProblem::T)
      .def_readonly("y0", &SdeProblem::y0)
      .def_readonly("lipschitz_k", &SdeProblem::lipschitz_k);
  m.def("make_problem", py::overload_cast<Coefficient, double, double>(&make_problem), py::arg("a"),
        py::arg("y0"), py::arg("T"));

  py::class_<ExponentialMixture>(m, "ExponentialMixture")
      .def_readonly("atom", &ExponentialMixture::atom)
      .def_readonly("phases", &ExponentialMixture::phases)
      .def("cf", &ExponentialMixture::cf)
      .def("mean", &ExponentialMixture::mean);
  py::class_<WienerHopfFactors>(m, "WienerHopfFactors")
      .def_readonly("q", &WienerHopfFactors::q)
      .def_readonly("sup", &WienerHopfFactors::sup)
      .def_readonly("inf", &WienerHopfFactors::inf)
      .def_readonly("up_poles", &WienerHopfFactors::up_poles)
      .def_readonly("down_poles", &WienerHopfFactors::down_poles)
      .def("resolvent_cf", &WienerHopfFactors::resolvent_cf);
  m.def("wh_factorize", py::overload_cast<const LevyModel&, double>(&wh_factorize), py::arg("model"),
        py::arg("q"));

  m.def(
      "sample_resolvent",
      [](const LevyModel& model, double q, std::size_t count, std::uint64_t seed, const std::string& route) {
        const ResolventSampler sampler(model, q, route_from(route));
        Rng rng(seed);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(count), model.dimension());
        {
          py::gil_scoped_release release;
          for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = sampler.sample(rng).value.transpose();
        }
        return out;
      },
      py::arg("model"), py::arg("q"), py::arg("count"), py::arg("seed"), py::arg("route") = "automatic",
      "X at independent Exp(q) times, one row per draw.");

  m.def(
      "euler_poisson",
      [](const SdeProblem& p, const LevyModel& model, int n, std::uint64_t seed) {
        Rng rng(seed);
        return trajectory_dict(run_euler_poisson(p, model, n, rng));
      },
      py::arg("problem"), py::arg("model"), py::arg("n"), py::arg("seed"));
  m.def(
      "enhanced",
      [](const SdeProblem& p, const LevyModel& model, int n, std::uint64_t seed) {
        Rng rng(seed);
        return trajectory_dict(run_enhanced(p, model, n, rng));
      },
      py::arg("problem"), py::arg("model"), py::arg("n"), py::arg("seed"));

  m.def(
      "estimate_mse",
      [](const SdeProblem& p, const LevyModel& model, const std::string& scheme, int n, std::size_t paths,
         std::uint64_t seed, unsigned workers) {
        py::gil_scoped_release release;
        const Estimate e = estimate_mse(p, model, scheme_from_string(scheme), n, paths, {seed, workers});
        return std::make_pair(e.mean, e.se);
      },
      py::arg("problem"), py::arg("model"), py::arg("scheme"), py::arg("n"), py::arg("paths"), py::arg("seed"),
      py::arg("workers") = 1, "(mean, standard error) of the terminal squared error.");
  m.def(
      "rate_ladder",
      [](const SdeProblem& p, const LevyModel& model, const std::string& scheme, std::vector<int> n_values,
         std::size_t paths, std::uint64_t seed, unsigned workers) {
        ConvergenceReport r;
        {
          py::gil_scoped_release release;
          r = rate_ladder(p, model, scheme_from_string(scheme), n_values, paths, {seed, workers});
        }
        py::dict d;
        d["n"] = r.n_values;
        std::vector<double> mse, se;
        for (const auto& e : r.mse) {
          mse.push_back(e.mean);
          se.push_back(e.se);
        }
        d["mse"] = mse;
        d["se"] = se;
        d["slope"] = r.slope.slope;
        d["slope_ci"] = std::make_pair(r.slope.ci_lo, r.slope.ci_hi);
        return d;
      },
      py::arg("problem"), py::arg("model"), py::arg("scheme"), py::arg("n_values"), py::arg("paths"),
      py::arg("seed"), py::arg("workers") = 1);
  m.def("hitting_error_closed_form", &hitting_error_closed_form, py::arg("problem"), py::arg("model"),
        py::arg("n"));

  m.def("harmonic_gap_mean", &harmonic_gap_mean, py::arg("m"));
  m.def("mauldon_target", &mauldon_target, py::arg("m"), py::arg("s"));
  m.def("gamma_mean_abs_deviation", &gamma_mean_abs_deviation, py::arg("n"), py::arg("T"));
  m.def(
      "gamma_hitting_moments",
      [](int n, double T) {
        const auto h = gamma_hitting_moments(n, T);
        return std::make_pair(h.second, h.fourth);
      },
      py::arg("n"), py::arg("T"), "(E|T - t_n|^2, E|T - t_n|^4).");
  m.def(
      "largest_gap",
      [](const std::vector<double>& arrivals, double T) { return largest_gap(arrivals, T); },
      py::arg("arrivals"), py::arg("T"));

  m.def(
      "rothe_solve",
      [](const SdeProblem& p, const LevyModel& model, const std::string& f,
         const std::map<std::string, double>& params, double x_lo, double x_hi, int nodes, int n) {
        const RotheSolver solver(p, model, SpatialGrid(x_lo, x_hi, nodes), n);
        const auto states = solver.solve(make_test_function(f, params));
        std::vector<Eigen::VectorXd> u;
        for (const auto& s : states) u.push_back(s.u);
        return std::make_pair(solver.grid().points(), u);
      },
      py::arg("problem"), py::arg("model"), py::arg("f"), py::arg("params"), py::arg("x_lo"), py::arg("x_hi"),
      py::arg("nodes"), py::arg("n"), "(nodes, [u_0, ..., u_n]).");

  m.def(
      "run_experiment",
      [](const std::string& config_text, unsigned workers) {
        const Config cfg = Config::parse(config_text);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg, workers);
        }
        return checks_dict(r);
      },
      py::arg("config"), py::arg("workers") = 1, "Runs a config given as text; returns checks and outputs.");
  m.def("list_registries", &list_registries);
  m.def("scheme_names", &scheme_names);
}
