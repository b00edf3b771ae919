#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seactrl/io.hpp"

namespace py = pybind11;

namespace {

using namespace seactrl;

py::list metrics_list(const RunResult& r) {
  py::list out;
  for (std::size_t i = 0; i < r.metrics.size(); ++i) {
    const JointMetrics& m = r.metrics[i];
    py::dict d;
    d["joint"] = i + 1;
    d["mode"] = m.mode;
    d["rms_error"] = m.rms_error;
    d["max_abs_error"] = m.max_abs_error;
    d["steady_state_error"] = m.steady_state_error;
    d["settling_time"] = m.settling_time;
    out.append(d);
  }
  return out;
}

py::list certificate_list(const RunResult& r) {
  py::list out;
  for (std::size_t i = 0; i < r.certificates.size(); ++i) {
    const LyapunovCertificate& c = r.certificates[i];
    py::dict d;
    d["joint"] = i + 1;
    d["spectral_abscissa"] = c.spectral_abscissa;
    d["residual"] = c.residual;
    d["p_min"] = c.p_min;
    d["p_max"] = c.p_max;
    d["q_min"] = c.q_min;
    d["P"] = c.P;
    d["Q"] = c.Q;
    out.append(d);
  }
  return out;
}

/// Parse, simulate, and package the result for numpy.  The GIL is released
/// while the integrator runs.
py::dict run_json(const std::string& scenario_json, int decimate) {
  if (decimate < 1) throw ValidationError("decimate must be >= 1");
  const Scenario sc = parse_scenario(scenario_json);
  RunResult r;
  {
    py::gil_scoped_release release;
    r = run(sc);
  }

  const std::size_t ncol = r.telemetry.columns.size();
  const std::size_t stride = static_cast<std::size_t>(decimate);
  const std::size_t kept = r.telemetry.rows == 0 ? 0 : (r.telemetry.rows - 1) / stride + 1;
  py::array_t<double> data({kept, ncol});
  auto view = data.mutable_unchecked<2>();
  for (std::size_t i = 0; i < kept; ++i) {
    const double* src = r.telemetry.data.data() + i * stride * ncol;
    for (std::size_t j = 0; j < ncol; ++j) view(i, j) = src[j];
  }

  py::dict out;
  out["name"] = sc.name;
  out["columns"] = r.telemetry.columns;
  out["telemetry"] = std::move(data);
  out["metrics"] = metrics_list(r);
  out["certificates"] = certificate_list(r);
  out["warnings"] = r.warnings;
  return out;
}

}  // namespace

PYBIND11_MODULE(_seactrl, m) {
  m.doc() = "Series elastic actuator motion control: simulation and synthesis core";

  m.def("run_json", &run_json, py::arg("scenario_json"), py::arg("decimate") = 1,
        "Simulate a scenario given as a JSON string.  Returns a dict with the\n"
        "scenario name, telemetry column labels, the telemetry table as a 2-D\n"
        "float array (every Nth row when decimate > 1), per-joint tracking\n"
        "metrics, per-joint stability certificates, and runtime warnings.");

  m.def(
      "default_scenario_json", [] { return scenario_to_json(parse_scenario("{}")); },
      "The fully explicit JSON form of the default scenario (three matched\n"
      "joints holding zero position for one second).");

  m.def(
      "campaign_json",
      [](const std::string& name) { return scenario_to_json(builtin_campaign(name)); },
      py::arg("name"), "A built-in campaign scenario as a JSON string.");

  m.def("campaign_names", &campaign_names, "Names of the built-in verification campaigns.");

  m.def("campaign_summary", &campaign_summary, py::arg("name"),
        "One-line description of a built-in campaign.");
}
