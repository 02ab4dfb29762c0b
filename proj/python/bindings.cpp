#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>

#include "mpqkd/config_io.hpp"
#include "mpqkd/entanglement.hpp"
#include "mpqkd/report.hpp"

namespace py = pybind11;
using namespace mpqkd;

namespace {

// Overrides arrive as `section.key` -> text, already formatted by the Python layer.
ScenarioConfig scenario(const std::string& config_text, const std::map<std::string, std::string>& overrides) {
  ScenarioConfig sc = parse_config(config_text, "<python>");
  for (const auto& [k, v] : overrides) set_config_value(sc, k, v);
  sc.validate();
  return sc;
}

std::string evaluate(const std::string& text, const std::map<std::string, std::string>& ov) {
  return to_json(evaluate_point_full(scenario(text, ov))).dump();
}

std::string optimize(const std::string& text, const std::map<std::string, std::string>& ov, std::size_t resolution) {
  return to_json(optimize_p_save(scenario(text, ov), resolution)).dump();
}

std::string sweep_csv(const std::string& text, const std::map<std::string, std::string>& ov,
                      const std::vector<double>& distances, bool optimize, std::size_t resolution) {
  SweepSpec spec;
  spec.base = scenario(text, ov);
  spec.values = distances;
  spec.optimize_p_save = optimize;
  spec.p_save_resolution = resolution;
  std::ostringstream os;
  write_sweep_csv(run_sweep(spec), os);
  return os.str();
}

std::string mc_validate(const std::string& text, const std::map<std::string, std::string>& ov, std::uint64_t seed,
                        std::uint64_t rounds) {
  return to_json(validate_monte_carlo(scenario(text, ov), seed, rounds)).dump();
}

std::string chernoff(double n, double eps_l, double eps_u) { return to_json(chernoff_bounds(n, eps_l, eps_u)).dump(); }

std::vector<std::tuple<std::string, double, double>> verify() {
  std::vector<std::tuple<std::string, double, double>> out;
  for (const auto& c : run_algebra_suite()) out.emplace_back(c.name, c.deviation, c.tolerance);
  return out;
}

}  // namespace

PYBIND11_MODULE(_mpqkd, m) {
  m.doc() = "Native core of the mpqkd package; use the wrappers in mpqkd instead.";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  m.def("evaluate", &evaluate, py::call_guard<py::gil_scoped_release>());
  m.def("optimize", &optimize, py::call_guard<py::gil_scoped_release>());
  m.def("sweep_csv", &sweep_csv, py::call_guard<py::gil_scoped_release>());
  m.def("mc_validate", &mc_validate, py::call_guard<py::gil_scoped_release>());
  m.def("chernoff", &chernoff);
  m.def("verify", &verify);
  m.def("binary_entropy", &binary_entropy);
  m.def("plob_bound", &plob_bound);
  m.def("default_config", [] { return serialize_config(ScenarioConfig{}); });
  m.def("version", &tool_version);
}
