#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kirchhoff/cli_report.hpp"
#include "kirchhoff/error.hpp"
#include "kirchhoff/kirchhoff_core.hpp"
#include "kirchhoff/radial_groundstate.hpp"
#include "kirchhoff/spectral_verify.hpp"

namespace py = pybind11;
using namespace kirchhoff;

namespace {

radial::ShootingConfig shooting(double r_max, std::size_t n) {
  radial::ShootingConfig cfg;
  cfg.r_max = r_max;
  cfg.n = n;
  return cfg;
}

py::dict profile_dict(const RadialProfile& prof) {
  py::dict d;
  d["r"] = std::vector<double>(prof.grid.nodes().begin(), prof.grid.nodes().end());
  d["values"] = prof.values;
  d["derivs"] = prof.derivs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_kirchhoff, m) {
  m.doc() = "Kirchhoff ground states and their linearised spectra";

  py::register_exception<Error>(m, "KirchhoffError", PyExc_RuntimeError);

  py::class_<core::Params>(m, "Params")
      .def(py::init([](double a, double b, double p) { return core::Params{a, b, p}; }), py::arg("a") = 1.0,
           py::arg("b") = 1.0, py::arg("p") = 3.0)
      .def_readwrite("a", &core::Params::a)
      .def_readwrite("b", &core::Params::b)
      .def_readwrite("p", &core::Params::p)
      .def("validate", &core::Params::validate, py::arg("allow_zero_b") = false);

  py::class_<radial::ScalarGroundState>(m, "GroundState")
      .def_readonly("p", &radial::ScalarGroundState::p)
      .def_readonly("amplitude", &radial::ScalarGroundState::amplitude)
      .def_readonly("mass_sq", &radial::ScalarGroundState::mass_sq)
      .def_readonly("grad_sq", &radial::ScalarGroundState::grad_sq)
      .def_readonly("lp1", &radial::ScalarGroundState::lp1)
      .def_readonly("decay_rate", &radial::ScalarGroundState::decay_rate)
      .def("nehari_residual", &radial::ScalarGroundState::nehari_residual)
      .def("pohozaev_residual", &radial::ScalarGroundState::pohozaev_residual)
      .def_property_readonly("profile", [](const radial::ScalarGroundState& q) { return profile_dict(q.profile); });

  m.def("shoot", [](double p, double r_max, std::size_t n) { return radial::shoot(p, shooting(r_max, n)); },
        py::arg("p"), py::arg("r_max") = 25.0, py::arg("n") = 4000);

  m.def("coefficient_c", [](const core::Params& prm, double G) { return core::coefficient_c(prm, G).c; },
        py::arg("params"), py::arg("grad_sq_Q"));
  m.def("fixed_point_c", [](const core::Params& prm, double G) { return core::fixed_point_c(prm, G); },
        py::arg("params"), py::arg("grad_sq_Q"));
  m.def("kappa_closed", &spectral::kappa_closed, py::arg("params"), py::arg("grad_sq_Q"));

  py::class_<core::KirchhoffSolution>(m, "Solution")
      .def_property_readonly("params", &core::KirchhoffSolution::params)
      .def_property_readonly("c", &core::KirchhoffSolution::c)
      .def_property_readonly("sqrt_c", &core::KirchhoffSolution::sqrt_c)
      .def_property_readonly("grad_sq_u", &core::KirchhoffSolution::grad_sq_u)
      .def_property_readonly("amplitude", &core::KirchhoffSolution::amplitude)
      .def_property_readonly("profile", [](const core::KirchhoffSolution& s) { return profile_dict(s.profile()); })
      .def("residual", [](const core::KirchhoffSolution& s) { return core::residual(s); })
      .def("energy", [](const core::KirchhoffSolution& s) { return core::energy(s).m; })
      .def("__call__", [](const core::KirchhoffSolution& s, const core::Vec3& x) {
        return core::evaluate(s, x, s.translation());
      });

  m.def("build_solution", &core::build_solution, py::arg("params"), py::arg("ground_state"));
  m.def("solve", [](const core::Params& prm, double r_max, std::size_t n) {
        prm.validate();
        return core::build_solution(prm, radial::shoot(prm.p, shooting(r_max, n)));
      },
      py::arg("params"), py::arg("r_max") = 25.0, py::arg("n") = 4000);

  m.def("sector_eigenvalues", [](const core::KirchhoffSolution& s, int k, std::size_t count) {
        return spectral::eigenvalues_lowest(spectral::assemble_sector(s, k), count);
      },
      py::arg("solution"), py::arg("k"), py::arg("count") = 3);
  m.def("report_json", [](const core::KirchhoffSolution& s, int k_max) {
        return spectral::report_json(spectral::nondegeneracy_report(s, k_max));
      },
      py::arg("solution"), py::arg("k_max") = 6);

  m.def("run", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"kirchhoff"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
