#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nmrsp/channels.hpp"
#include "nmrsp/decoherence.hpp"
#include "nmrsp/experiments.hpp"
#include "nmrsp/linalg.hpp"
#include "nmrsp/measures.hpp"
#include "nmrsp/rsp.hpp"

namespace py = pybind11;
using namespace nmrsp;

namespace {

py::dict report_dict(const MeasureReport& r) {
  py::dict d;
  d["kind"] = std::string(to_string(r.kind));
  d["value"] = r.value;
  d["grid_size"] = r.grid_size;
  d["infinite"] = r.infinite();
  d["singular_time"] = r.singular_time ? py::cast(*r.singular_time) : py::none();
  py::list backflow;
  for (const auto& iv : r.backflow) backflow.append(py::make_tuple(iv.begin, iv.end));
  d["backflow"] = backflow;
  if (r.witness) d["witness"] = py::make_tuple(r.witness->rho1.matrix(), r.witness->rho2.matrix());
  return d;
}

ChannelFamily family_from(const py::object& spec) {
  if (py::isinstance<DephasingSpec>(spec)) return spec.cast<DephasingSpec>();
  if (py::isinstance<LorentzSpec>(spec)) return spec.cast<LorentzSpec>();
  throw InvalidInput("expected a DephasingSpec or LorentzSpec");
}

Figure figure_from(const std::string& name) {
  const auto f = parse_figure(name);
  if (!f) throw InvalidInput("unknown figure '" + name + "'");
  return *f;
}

}  // namespace

PYBIND11_MODULE(_nmrsp, m) {
  m.doc() = "Non-Markovian channels, non-Markovianity measures and RSP fidelity";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<InvalidInput>(m, "InvalidInput", m.attr("Error"));
  py::register_exception<QuadratureError>(m, "QuadratureError", m.attr("Error"));
  py::register_exception<OutsideValidityWindow>(m, "OutsideValidityWindow", m.attr("Error"));
  py::register_exception<NoTransition>(m, "NoTransition", m.attr("Error"));
  py::register_exception<SingularIntermediateMap>(m, "SingularIntermediateMap", m.attr("Error"));

  py::class_<DephasingSpec>(m, "DephasingSpec")
      .def(py::init([](double theta, double omega1, double omega2, double sigma) {
             DephasingSpec s{theta, omega1, omega2, sigma};
             s.validate();
             return s;
           }),
           py::arg("theta") = 0.0, py::arg("omega1") = 0.0, py::arg("omega2") = 10.0, py::arg("sigma") = 1.0)
      .def_readwrite("theta", &DephasingSpec::theta)
      .def_readwrite("omega1", &DephasingSpec::omega1)
      .def_readwrite("omega2", &DephasingSpec::omega2)
      .def_readwrite("sigma", &DephasingSpec::sigma)
      .def_property_readonly("delta_omega", &DephasingSpec::delta_omega)
      .def("__repr__", [](const DephasingSpec& s) {
        return "DephasingSpec(theta=" + format_number(s.theta) + ", omega1=" + format_number(s.omega1) +
               ", omega2=" + format_number(s.omega2) + ", sigma=" + format_number(s.sigma) + ")";
      });

  py::class_<LorentzSpec>(m, "LorentzSpec")
      .def(py::init([](double gamma0, double Gamma) {
             LorentzSpec s{gamma0, Gamma};
             s.validate();
             return s;
           }),
           py::arg("gamma0") = 1.0, py::arg("Gamma") = 0.1)
      .def_readwrite("gamma0", &LorentzSpec::gamma0)
      .def_readwrite("Gamma", &LorentzSpec::Gamma)
      .def_property_readonly("epsilon", &LorentzSpec::epsilon)
      .def("__repr__", [](const LorentzSpec& s) {
        return "LorentzSpec(gamma0=" + format_number(s.gamma0) + ", Gamma=" + format_number(s.Gamma) + ")";
      });

  m.def("kappa", &kappa_complex, py::arg("spec"), py::arg("tau"));
  m.def("kappa_abs", &kappa_abs, py::arg("spec"), py::arg("tau"));
  m.def("kappa_quadrature", &kappa_quadrature, py::arg("spec"), py::arg("tau"), py::arg("abs_tol") = 1e-10,
        py::arg("max_depth") = 40);
  m.def("chi", &chi, py::arg("spec"), py::arg("t"));
  m.def("lorentz_revival_time", &lorentz_revival_time, py::arg("spec"));
  m.def("blp_offset", &blp_offset, py::arg("spec"));
  m.def("analytic_blp", &analytic_blp_dephasing, py::arg("spec"), py::arg("tau_c"));
  m.def(
      "transition_thetas",
      [](double dw, double sigma, double tau_c) {
        const auto tp = transition_thetas(dw, sigma, tau_c);
        return py::make_tuple(tp.theta1, tp.theta2);
      },
      py::arg("delta_omega"), py::arg("sigma"), py::arg("tau_c"));

  m.def(
      "trace_distance",
      [](const ComplexMatrix& a, const ComplexMatrix& b) { return trace_distance(DensityMatrix(a), DensityMatrix(b)); },
      py::arg("rho1"), py::arg("rho2"));
  m.def(
      "negativity",
      [](const ComplexMatrix& rho, Eigen::Index first, Eigen::Index second) {
        return negativity(DensityMatrix(rho), Bipartition{first, second});
      },
      py::arg("rho"), py::arg("first") = 2, py::arg("second") = 2);
  m.def(
      "von_neumann_entropy", [](const ComplexMatrix& rho) { return von_neumann_entropy(DensityMatrix(rho)); },
      py::arg("rho"));

  m.def(
      "evolve", [](const py::object& spec, const ComplexMatrix& rho, double t) {
        return evolve(family_from(spec), DensityMatrix(rho), t).matrix();
      },
      py::arg("spec"), py::arg("rho"), py::arg("t"));
  m.def(
      "choi_state", [](const py::object& spec, double t, int system_dim) {
        return choi_state(family_from(spec), t, system_dim).state.matrix();
      },
      py::arg("spec"), py::arg("t"), py::arg("system_dim") = 4);

  m.def(
      "bell_diagonal", [](double c1, double c2, double c3) { return bell_diagonal({c1, c2, c3}).matrix(); },
      py::arg("c1"), py::arg("c2"), py::arg("c3"));
  m.def(
      "correlation_matrix", [](const ComplexMatrix& rho) { return correlation_matrix(DensityMatrix(rho)).entries(); },
      py::arg("rho"));
  m.def(
      "rsp_fidelity", [](const Eigen::Matrix3d& c) { return rsp_fidelity(CorrelationMatrix(c)); }, py::arg("c"));
  m.def(
      "fidelity_after_dephasing",
      [](double c1, double c2, double c3, cdouble kappa) {
        return rsp_fidelity(correlation_matrix(apply_dephasing(bell_diagonal({c1, c2, c3}), kappa)));
      },
      py::arg("c1"), py::arg("c2"), py::arg("c3"), py::arg("kappa"));
  m.def(
      "fidelity_after_damping",
      [](double c1, double c2, double c3, double chi_value) {
        return rsp_fidelity(correlation_matrix(apply_amplitude_damping(bell_diagonal({c1, c2, c3}), chi_value)));
      },
      py::arg("c1"), py::arg("c2"), py::arg("c3"), py::arg("chi"));

  m.def(
      "blp",
      [](const py::object& spec, double t0, double t1, std::size_t pairs, std::size_t grid, std::uint64_t seed,
         unsigned threads) {
        SearchOptions o;
        o.n_pairs = pairs;
        o.grid_size = grid;
        o.seed = seed;
        o.threads = threads;
        const ChannelFamily family = family_from(spec);
        MeasureReport r;
        {
          py::gil_scoped_release release;
          r = blp_search(family, {t0, t1}, o);
        }
        return report_dict(r);
      },
      py::arg("spec"), py::arg("t0"), py::arg("t1"), py::arg("pairs") = 0, py::arg("grid") = 4001,
      py::arg("seed") = 42, py::arg("threads") = 0);
  m.def(
      "measure",
      [](const std::string& kind, const py::object& spec, double t0, double t1, std::size_t grid) {
        const ChannelFamily family = family_from(spec);
        const TimeWindow w{t0, t1};
        if (kind == "divisibility") return report_dict(divisibility_measure(family, w, grid));
        if (kind == "entanglement") return report_dict(entanglement_measure(family, w, grid));
        if (kind == "mutual_info") return report_dict(mutual_info_measure(family, w, grid));
        throw InvalidInput("unknown measure '" + kind + "' (divisibility, entanglement, mutual_info)");
      },
      py::arg("kind"), py::arg("spec"), py::arg("t0"), py::arg("t1"), py::arg("grid") = 4001);

  m.def(
      "run_figure",
      [](const std::string& name, const std::string& config_json_text) {
        ExperimentConfig c;
        c.figure = figure_from(name);
        if (!config_json_text.empty()) apply_config_json(c, config_json_text);
        c.figure = figure_from(name);
        CsvTable table;
        {
          py::gil_scoped_release release;
          table = run_figure(resolve(c));
        }
        return py::make_tuple(table.header, table.rows);
      },
      py::arg("figure"), py::arg("config_json") = "",
      "Runs one figure; returns (header, rows). `config_json` uses the CLI config schema.");
  m.def(
      "figure_csv",
      [](const std::string& name, const std::string& config_json_text) {
        ExperimentConfig c;
        c.figure = figure_from(name);
        if (!config_json_text.empty()) apply_config_json(c, config_json_text);
        c.figure = figure_from(name);
        py::gil_scoped_release release;
        return run_figure(resolve(c)).to_csv();
      },
      py::arg("figure"), py::arg("config_json") = "");

  m.attr("__version__") = std::string(library_version());
}
