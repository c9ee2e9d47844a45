#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "whf/cli/experiments.hpp"
#include "whf/cli/run.hpp"
#include "whf/closed_form.hpp"
#include "whf/errors.hpp"
#include "whf/factorize.hpp"
#include "whf/gamma.hpp"
#include "whf/montecarlo.hpp"
#include "whf/operators.hpp"
#include "whf/resolvent.hpp"
#include "whf/version.hpp"

namespace py = pybind11;
using namespace whf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wiener-Hopf factorization for time-inhomogeneous arithmetic Brownian motion";
  m.attr("__version__") = kVersion;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UnsupportedModel>(m, "UnsupportedModel", PyExc_NotImplementedError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::enum_<Sign>(m, "Sign").value("Plus", Sign::Plus).value("Minus", Sign::Minus);

  py::class_<ConstCoeff>(m, "ConstCoeff")
      .def(py::init<double, double>(), py::arg("v"), py::arg("sigma"))
      .def_readonly("v", &ConstCoeff::v)
      .def_readonly("sigma", &ConstCoeff::sigma)
      .def("mirrored", &ConstCoeff::mirrored);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("abs_tol", &QuadratureSpec::abs_tol)
      .def_readwrite("rel_tol", &QuadratureSpec::rel_tol)
      .def_readwrite("max_depth", &QuadratureSpec::max_depth)
      .def_readwrite("max_intervals", &QuadratureSpec::max_intervals)
      .def_readwrite("tail_cutoff", &QuadratureSpec::tail_cutoff);

  py::class_<CoefficientModel>(m, "CoefficientModel")
      .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>>(), py::arg("breakpoints"),
           py::arg("v"), py::arg("sigma"))
      .def_static("constant", &CoefficientModel::constant, py::arg("v"), py::arg("sigma"))
      .def_static("one_jump", &CoefficientModel::one_jump, py::arg("v0"), py::arg("v1"), py::arg("sigma0"),
                  py::arg("sigma1"), py::arg("t0"))
      .def_static("parse", &CoefficientModel::parse)
      .def_property_readonly("breakpoints", &CoefficientModel::breakpoints)
      .def_property_readonly("v", &CoefficientModel::v_values)
      .def_property_readonly("sigma", &CoefficientModel::sigma_values)
      .def("drift_at", &CoefficientModel::drift_at)
      .def("sigma_at", &CoefficientModel::sigma_at)
      .def("integrated_drift", &CoefficientModel::integrated_drift)
      .def("integrated_variance", &CoefficientModel::integrated_variance)
      .def("mirrored", &CoefficientModel::mirrored)
      .def("__eq__", [](const CoefficientModel& a, const CoefficientModel& b) { return a == b; })
      .def("__repr__", [](const CoefficientModel& c) { return "CoefficientModel(" + c.to_string() + ")"; })
      .def("__str__", &CoefficientModel::to_string);

  py::class_<TestFunction>(m, "TestFunction")
      .def_static("exponential", &TestFunction::exponential, py::arg("rate"), py::arg("amplitude") = 1.0)
      .def_static("indicator", &TestFunction::indicator, py::arg("T"))
      .def("__call__", [](const TestFunction& f, double t) { return f(t); });

  py::class_<Payoff>(m, "Payoff")
      .def_static("gaussian_bump", &Payoff::gaussian_bump, py::arg("centre"), py::arg("width"))
      .def_static("triangle", &Payoff::triangle, py::arg("centre"), py::arg("half_width"))
      .def_static("truncated_cos", &Payoff::truncated_cos, py::arg("xi"), py::arg("half_periods"))
      .def_static("cosine", &Payoff::cosine, py::arg("xi"))
      .def_static("one", &Payoff::one)
      .def_static("identity", &Payoff::identity)
      .def_readonly("name", &Payoff::name)
      .def("__call__", [](const Payoff& u, double x) { return u(x); });

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("identity", &VerificationReport::identity)
      .def_readonly("lhs", &VerificationReport::lhs)
      .def_readonly("rhs", &VerificationReport::rhs)
      .def_readonly("abs_error", &VerificationReport::abs_error)
      .def_readonly("tolerance", &VerificationReport::tolerance)
      .def_readonly("method", &VerificationReport::method)
      .def_readonly("passed", &VerificationReport::pass)
      .def_readonly("informational", &VerificationReport::informational)
      .def("__repr__", [](const VerificationReport& r) {
        std::ostringstream s;
        s << "VerificationReport(" << r.identity << ", error=" << r.abs_error << ", tol=" << r.tolerance
          << (r.pass ? ", pass)" : ", FAIL)");
        return s.str();
      });

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n_paths", &SimConfig::n_paths)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("bridge_correction", &SimConfig::bridge_correction)
      .def_readwrite("kill_rate", &SimConfig::kill_rate)
      .def_readwrite("threads", &SimConfig::threads);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("std_error", &Estimate::std_error)
      .def_readonly("n", &Estimate::n);

  // Closed forms for constant coefficients.
  m.def("tail_prob_up", &tail_prob_up, py::arg("c"), py::arg("ell"), py::arg("dt"));
  m.def("tail_prob_down", &tail_prob_down, py::arg("c"), py::arg("ell"), py::arg("dt"));
  m.def("passage_density_up", &passage_density_up, py::arg("c"), py::arg("ell"), py::arg("r"));
  m.def("gamma_const", &gamma_const, py::arg("c"), py::arg("dt"), py::arg("sign"));
  m.def("gamma_total_const", &gamma_total_const, py::arg("c"), py::arg("dt"));
  m.def("laplace_exponent", &laplace_exponent, py::arg("c"), py::arg("rate"), py::arg("sign"));

  py::class_<GammaKernel>(m, "GammaKernel")
      .def(py::init<CoefficientModel, QuadratureSpec, int>(), py::arg("model"), py::arg("quad") = QuadratureSpec{},
           py::arg("max_breakpoints") = 3)
      .def("gamma_pm", &GammaKernel::gamma_pm, py::arg("s"), py::arg("t"), py::arg("sign"))
      .def("gamma_total", &GammaKernel::gamma_total, py::arg("s"), py::arg("t"))
      .def("volterra_residual", &GammaKernel::volterra_residual, py::arg("r"), py::arg("q"));

  m.def(
      "apply_passage_semigroup",
      [](const CoefficientModel& model, double ell, const TestFunction& f, double s, Sign sign,
         const QuadratureSpec& q) { return apply_passage_semigroup(model, ell, f, s, sign, q); },
      py::arg("model"), py::arg("ell"), py::arg("f"), py::arg("s"), py::arg("sign"), py::arg("quad") = QuadratureSpec{});
  m.def(
      "resolvent",
      [](const CoefficientModel& model, const TestFunction& h, double s) {
        return Resolvent(GammaKernel(model), h)(s);
      },
      py::arg("model"), py::arg("h"), py::arg("s"));

  m.def("wh_lhs", &wh_lhs, py::arg("model"), py::arg("u"), py::arg("h"), py::arg("s"), py::arg("a"),
        py::arg("quad") = QuadratureSpec{});
  m.def(
      "wh_rhs",
      [](const CoefficientModel& model, const Payoff& u, const TestFunction& h, double s, double a,
         const QuadratureSpec& q) { return wh_rhs(model, u, h, s, a, q); },
      py::arg("model"), py::arg("u"), py::arg("h"), py::arg("s"), py::arg("a"), py::arg("quad") = QuadratureSpec{});
  m.def("classical_direct", &classical_direct, py::arg("c"), py::arg("rate"), py::arg("u"), py::arg("a"),
        py::arg("quad") = QuadratureSpec{});
  m.def("classical_factorized", &classical_factorized, py::arg("c"), py::arg("rate"), py::arg("u"), py::arg("a"),
        py::arg("outer_x") = true, py::arg("quad") = QuadratureSpec{});
  m.def("characteristic_value", &characteristic_value, py::arg("c"), py::arg("rate"), py::arg("xi"));
  m.def(
      "noisy_wh_residual",
      [](const CoefficientModel& model, double rate, double s, Sign sign) {
        return noisy_wh_residual(model, rate, s, sign).residual;
      },
      py::arg("model"), py::arg("rate"), py::arg("s"), py::arg("sign"));

  m.def("table1_model", &table1_model, py::arg("column"), py::arg("cos_width") = 1e-2, py::arg("cos_horizon") = 14.0);
  m.def("table1_statistic", &table1_statistic, py::arg("model"), py::arg("cfg"), py::arg("kill_rate") = 1.0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "first_passage",
      [](const CoefficientModel& model, double ell, Sign sign, const SimConfig& cfg, bool strict) {
        return first_passage(simulate(model, 0.0, 0.0, cfg), ell, sign, strict);
      },
      py::arg("model"), py::arg("ell"), py::arg("sign"), py::arg("cfg"), py::arg("strict") = false,
      py::call_guard<py::gil_scoped_release>());

  m.def("experiment_names", &cli::experiment_names);
  m.def(
      "run_experiment",
      [](const std::string& name) {
        cli::RunConfig cfg;
        cfg.finalize();
        return cli::run_experiment(name, cfg).reports;
      },
      py::arg("name"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the whfact command line with the given arguments; returns (exit code, stdout, stderr).");
}
