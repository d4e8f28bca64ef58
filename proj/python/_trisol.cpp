#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "trisol/commands.hpp"
#include "trisol/config.hpp"
#include "trisol/constants.hpp"
#include "trisol/errors.hpp"
#include "trisol/testfn.hpp"

namespace py = pybind11;

namespace {

trisol::RunConfig config_from(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw trisol::ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return trisol::parse_config(j);
}

py::tuple result_tuple(const trisol::cli::CommandResult& r) {
  return py::make_tuple(r.exit_code, r.report.dump(), r.summary);
}

}  // namespace

PYBIND11_MODULE(_trisol, m) {
  m.doc() = "Compiled core of trisol";

  static py::exception<trisol::ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<trisol::PreconditionError> precondition_error(m, "PreconditionError", PyExc_ValueError);
  static py::exception<trisol::Error> numerical_error(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const trisol::ConfigError& e) {
      config_error(e.what());
    } catch (const trisol::PreconditionError& e) {
      precondition_error(e.what());
    } catch (const trisol::Error& e) {
      numerical_error(e.what());
    }
  });

  m.def("critical_exponent", &trisol::critical_exponent, py::arg("n"));
  m.def("ball_volume", &trisol::ball_volume, py::arg("n"), py::arg("radius"));
  m.def("embedding_bound", &trisol::embedding_bound, py::arg("q"), py::arg("n"), py::arg("measure"));
  m.def("kappa", &trisol::kappa, py::arg("d"), py::arg("n"));
  m.def("k1_k2", &trisol::k1_k2, py::arg("d"), py::arg("n"), py::arg("q"), py::arg("c1"), py::arg("cq"));
  m.def(
      "compute_constants",
      [](int n, double measure, double d, double q) {
        nlohmann::json j = trisol::compute_constants(n, measure, d, q);
        return j.dump();
      },
      py::arg("n"), py::arg("measure"), py::arg("d"), py::arg("q"));

  m.def("u_beta_profile", &trisol::u_beta_profile, py::arg("r"), py::arg("d"), py::arg("beta"));
  m.def("phi_u_beta_closed", &trisol::phi_u_beta_closed, py::arg("d"), py::arg("n"), py::arg("beta"));
  m.def("chi_upper_bound", &trisol::chi_upper_bound, py::arg("r"), py::arg("m1"), py::arg("m2"), py::arg("q"),
        py::arg("c1"), py::arg("cq"));

  m.def("normalize_config", [](const std::string& text) { return trisol::to_json(config_from(text)).dump(); });
  m.def("config_hash", [](const std::string& text) { return trisol::config_hash(config_from(text)); });
  m.def("ball_example_config", [] { return trisol::to_json(trisol::ball_example_config()).dump(); });

  m.def(
      "run_constants", [](const std::string& text) { return result_tuple(trisol::cli::run_constants(config_from(text))); },
      py::arg("config_json"));
  m.def(
      "run_check", [](const std::string& text) { return result_tuple(trisol::cli::run_check(config_from(text))); },
      py::arg("config_json"));
  m.def(
      "run_solve",
      [](const std::string& text) {
        const auto config = config_from(text);
        trisol::cli::CommandResult r;
        {
          py::gil_scoped_release release;
          r = trisol::cli::run_solve(config);
        }
        return result_tuple(r);
      },
      py::arg("config_json"));
  m.def(
      "run_reproduce",
      [](std::uint64_t seed) {
        trisol::cli::CommandResult r;
        {
          py::gil_scoped_release release;
          r = trisol::cli::run_reproduce(seed);
        }
        return result_tuple(r);
      },
      py::arg("seed") = 42);
}
