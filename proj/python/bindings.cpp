#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlz/assembly.hpp"
#include "dlz/atomic.hpp"
#include "dlz/error.hpp"
#include "dlz/io.hpp"
#include "dlz/lzcore.hpp"
#include "dlz/specfun.hpp"

namespace py = pybind11;
using namespace dlz;

namespace {

Method method_from(const std::string& s) {
  if (s == "finite") return Method::finite;
  if (s == "asymptotic") return Method::asymptotic;
  if (s == "ode") return Method::ode;
  throw InvalidInput("method must be finite, asymptotic or ode");
}

DegenerateLZSystem make_system(const CMatrix& couplings, double tau_i, double tau_f,
                               double chirp_rate) {
  return {CouplingMatrix(couplings / std::sqrt(chirp_rate)),
          ChirpSchedule(chirp_rate, tau_i, tau_f)};
}

py::list labels_of(const Subsystem& s) {
  py::list out;
  for (const auto& l : s.labels) out.append(to_string(l));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Degenerate Landau-Zener propagators via the Morris-Shore transformation";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  py::class_<DegenerateLZSystem>(m, "System")
      .def(py::init(&make_system), py::arg("couplings"), py::arg("tau_i"), py::arg("tau_f"),
           py::arg("chirp_rate") = 1.0)
      .def_static("from_json", &parse_system)
      .def("to_json", &system_json)
      .def_property_readonly("dimension", &DegenerateLZSystem::dimension)
      .def_property_readonly("swapped", &DegenerateLZSystem::swapped)
      .def_property_readonly("tau_i", [](const DegenerateLZSystem& s) { return s.chirp().tau_i(); })
      .def_property_readonly("tau_f", [](const DegenerateLZSystem& s) { return s.chirp().tau_f(); })
      .def_property_readonly("couplings",
                             [](const DegenerateLZSystem& s) { return s.caller_coupling().entries(); })
      .def("hamiltonian", &hamiltonian_at, py::arg("tau"));

  m.def(
      "propagator",
      [](const DegenerateLZSystem& s, const std::string& method, double tol) {
        return propagate(s, method_from(method), tol).propagator.matrix;
      },
      py::arg("system"), py::arg("method") = "finite", py::arg("tol") = 1e-10);

  m.def(
      "probabilities",
      [](const DegenerateLZSystem& s, const std::string& method, double tol) {
        return transition_probabilities(propagate(s, method_from(method), tol).propagator);
      },
      py::arg("system"), py::arg("method") = "finite", py::arg("tol") = 1e-10,
      "P[f, i] = |U_fi|^2");

  m.def(
      "morris_shore",
      [](const CMatrix& v) {
        const auto d = dlz::morris_shore(CouplingMatrix(v));
        py::dict out;
        out["lambdas"] = d.lambdas;
        out["a_unitary"] = d.a_unitary;
        out["b_unitary"] = d.b_unitary;
        out["n_dark"] = d.n_dark;
        return out;
      },
      py::arg("couplings"), "Requires rows >= columns.");

  m.def(
      "classify",
      [](const DegenerateLZSystem& s) {
        const auto v = dlz::classify(s);
        py::list out;
        for (Eigen::Index i = 0; i < v.n; ++i)
          for (Eigen::Index f = 0; f < v.n; ++f)
            out.append(py::make_tuple(i, f, to_string(v.at(f, i).status), v.at(f, i).reason));
        return out;
      },
      py::arg("system"), "Tuples (i, f, status, reason).");

  m.def("infinite_time_probability", &infinite_time_probability, py::arg("system"),
        py::arg("f"), py::arg("i"));

  m.def(
      "two_state_propagator",
      [](double kappa, double tau_i, double tau_f, const std::string& method) {
        return dlz::two_state_propagator(LZChannel::from_scaled(kappa), tau_i, tau_f,
                                         method_from(method));
      },
      py::arg("kappa"), py::arg("tau_i"), py::arg("tau_f"), py::arg("method") = "finite");

  m.def("lz_probability", &lz_probability, py::arg("big_lambda"));

  m.def(
      "pcf", [](Complex nu, Complex z) { return specfun::pcf(nu, z).value; }, py::arg("nu"),
      py::arg("z"));

  m.def("clebsch_gordan", &clebsch_gordan, py::arg("j1"), py::arg("m1"), py::arg("j2"),
        py::arg("m2"), py::arg("j"), py::arg("m"));

  m.def(
      "atomic_chains",
      [](double j_a, double j_b, double omega_plus, double omega_minus, double theta) {
        const auto split =
            build_subsystems(AtomicTransition(j_a, j_b, omega_plus, omega_minus, theta, 0.0));
        return py::make_tuple(py::make_tuple(split.larger.v, labels_of(split.larger)),
                              py::make_tuple(split.smaller.v, labels_of(split.smaller)));
      },
      py::arg("j_a"), py::arg("j_b"), py::arg("omega_plus"), py::arg("omega_minus"),
      py::arg("theta") = 0.0, "((V, labels) of the larger chain, (V, labels) of the other).");
}
