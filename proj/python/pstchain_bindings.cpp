#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pstchain/chain_model.hpp"
#include "pstchain/config.hpp"
#include "pstchain/errors.hpp"
#include "pstchain/metrics.hpp"
#include "pstchain/output.hpp"
#include "pstchain/runs.hpp"
#include "pstchain/selftest.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace pstchain;

namespace {

using Overrides = std::map<std::string, std::string>;

RunConfig load(const std::string& subcommand, const std::string& text, Overrides overrides) {
  overrides["subcommand"] = subcommand;
  return parse_config(text, overrides);
}

py::dict series_dict(const TimeSeries& s) {
  py::dict columns;
  for (const auto& name : s.columns) columns[py::str(name)] = s.column(name);
  return py::dict("tau"_a = s.tau, "columns"_a = columns);
}

py::dict scan_dict(const ScanResult& scan) {
  py::list points;
  for (const auto& p : scan.points)
    points.append(py::dict("coords"_a = p.coords, "mean"_a = p.summary.mean,
                           "stderr"_a = p.summary.standard_error, "n_realizations"_a = p.summary.n_realizations));
  return py::dict("axes"_a = scan.axes, "points"_a = points);
}

}  // namespace

PYBIND11_MODULE(_pstchain, m) {
  m.doc() = "Perturbed perfect-state-transfer spin chains";
  m.attr("__version__") = PSTCHAIN_VERSION;

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<NumericError> numeric_error(m, "NumericError", PyExc_ArithmeticError);
  static py::exception<IoError> io_error(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const NumericError& e) {
      py::set_error(numeric_error, e.what());
    } catch (const IoError& e) {
      py::set_error(io_error, e.what());
    } catch (const DomainError& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "canonical_config",
      [](const std::string& text, const Overrides& overrides) { return emit_config(parse_config(text, overrides)); },
      "text"_a, "overrides"_a = Overrides{}, "Validate a key=value config and return it in canonical form.");

  m.def(
      "evolve",
      [](const std::string& text, const Overrides& overrides) {
        return series_dict(run_evolve(load("evolve", text, overrides)));
      },
      "text"_a, "overrides"_a = Overrides{});

  m.def(
      "inject",
      [](const std::string& text, const Overrides& overrides) {
        const ProtocolRun run = run_inject(load("inject", text, overrides));
        py::dict out = series_dict(run.series);
        out["error_weight"] = run.error_weight;
        out["kept_probability"] = run.kept_probability;
        return out;
      },
      "text"_a, "overrides"_a = Overrides{});

  m.def(
      "scan",
      [](const std::string& text, const Overrides& overrides) {
        const RunConfig config = load("scan", text, overrides);
        ScanResult result;
        {
          py::gil_scoped_release release;
          result = run_scan(config);
        }
        return scan_dict(result);
      },
      "text"_a, "overrides"_a = Overrides{});

  m.def(
      "fit",
      [](const std::vector<std::tuple<int, double, double>>& points, double floor) {
        std::vector<DecayPoint> pts;
        for (const auto& [n, p, v] : points) pts.push_back({n, p, v});
        const FitResult f = fit_decay(pts, floor);
        return py::dict("p0"_a = f.p0, "residual_rms"_a = f.residual_rms, "points_used"_a = f.points_used,
                        "points_excluded"_a = f.points_excluded);
      },
      "points"_a, "floor"_a = 0.05, "Fit value = exp(-n p^2 / p0^2) to (n, p, value) triples.");

  m.def("selftest", [] {
    py::list out;
    for (const auto& r : run_selftest())
      out.append(py::dict("name"_a = r.name, "cases"_a = r.cases, "worst"_a = r.worst, "tolerance"_a = r.tolerance,
                          "passed"_a = r.passed()));
    return out;
  });

  m.def(
      "concurrence",
      [](const Eigen::Matrix4cd& rho) {
        TwoQubitDensity d;
        d.rho = rho;
        return concurrence(d);
      },
      "rho"_a, "Wootters concurrence of a 4x4 density matrix in |00>,|01>,|10>,|11> order.");
  m.def("eof_from_concurrence", &eof_from_concurrence, "c"_a);
  m.def("j0", &j0_from_jmax, "n"_a, "j_max"_a = 1.0);
  m.def("pst_couplings", [](int n) { return pst_couplings(n).nearest; }, "n"_a);
}
