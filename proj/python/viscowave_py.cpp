#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "viscowave/commands.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/incomplete_gamma.hpp"
#include "viscowave/run_config.hpp"
#include "viscowave/spectral_kernel.hpp"

namespace py = pybind11;
using namespace viscowave;

namespace {

RunConfig config_from(const py::dict& overrides) {
  RunConfig cfg;
  const py::object dumps = py::module_::import("json").attr("dumps");
  for (const auto& [key, value] : overrides) {
    cfg.set_value(py::str(key), nlohmann::json::parse(py::str(dumps(value)).cast<std::string>()));
  }
  return cfg;
}

py::tuple solution_arrays(const SolutionField& u) {
  const Grid& g = u.grid();
  py::array_t<double> x(g.nx), t(g.nt), vals({g.nt, g.nx});
  for (int i = 0; i < g.nx; ++i) x.mutable_at(i) = g.x(i);
  for (int k = 0; k < g.nt; ++k) {
    t.mutable_at(k) = g.t(k);
    for (int i = 0; i < g.nx; ++i) vals.mutable_at(k, i) = u.at(i, k);
  }
  return py::make_tuple(x, t, vals);
}

}  // namespace

PYBIND11_MODULE(_viscowave, m) {
  m.doc() = "Spectral solver and asymptotic checks for the viscous damped wave equation";

  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  static py::exception<IoError> io_error(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      validation(e.what());
    } catch (const NumericalError& e) {
      numerical(e.what());
    } catch (const IoError& e) {
      io_error(e.what());
    }
  });

  m.def(
      "run_command",
      [](const std::string& name, const py::dict& overrides) {
        const CommandResult r = run_command(name, config_from(overrides));
        return r.summary.dump();
      },
      py::arg("name"), py::arg("overrides") = py::dict(),
      "Run a CLI command with config overrides; returns the summary as JSON text.");

  m.def(
      "solve",
      [](const py::dict& overrides) {
        const RunConfig cfg = config_from(overrides);
        cfg.validate();
        SolveOptions opts{cfg.kind(), cfg.truncation(), cfg.integer("threads")};
        const PipelineResult r = solve_pipeline(cfg.problem(), cfg.kind(), cfg.source_mode(), opts);
        return solution_arrays(r.field);
      },
      py::arg("overrides") = py::dict(), "Solve the configured problem; returns (x, t, u[t, x]).");

  m.def(
      "green",
      [](double a, double eps, const std::string& kind, double x, double xi, double t, int max_modes,
         double tail_tol) {
        const Truncation trunc{max_modes, tail_tol};
        const SeriesValue v = green_function(MediumParams(a, eps), parse_green_kind(kind), x, xi, t, trunc);
        return py::make_tuple(v.value, v.tail_bound, v.modes);
      },
      py::arg("a"), py::arg("eps"), py::arg("kind"), py::arg("x"), py::arg("xi"), py::arg("t"),
      py::arg("max_modes") = 2048, py::arg("tail_tol") = 1e-10,
      "Green function value with its tail bound and mode count.");

  m.def(
      "modal_kernel",
      [](double a, double eps, int n, double t, int order, bool limit) {
        const MediumParams p(a, eps);
        return limit ? eval_kernel_zero(p, n, t, order) : eval_kernel_eps(p, n, t, order);
      },
      py::arg("a"), py::arg("eps"), py::arg("n"), py::arg("t"), py::arg("order") = 0, py::arg("limit") = false);

  m.def("incomplete_gamma", &incomplete_gamma, py::arg("s"), py::arg("z"));
}
