#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ramsey/control_filters.hpp"
#include "ramsey/dephasing.hpp"
#include "ramsey/dicke.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/estimators.hpp"
#include "ramsey/noise_models.hpp"
#include "ramsey/runner.hpp"

namespace py = pybind11;
using namespace ramsey;

namespace {

py::dict sweep_to_dict(const SweepResult& r) {
  py::dict d;
  d["times"] = py::array_t<double>(static_cast<py::ssize_t>(r.times.size()), r.times.data());
  d["delta_b"] = py::array_t<double>(static_cast<py::ssize_t>(r.delta_b.size()), r.delta_b.data());
  py::list flags;
  for (auto f : r.flags) flags.append(std::string(to_string(f)));
  d["flags"] = flags;
  d["t_opt"] = r.t_opt;
  d["delta_b_opt"] = r.delta_b_opt;
  d["at_boundary"] = r.at_boundary;
  d["t_res"] = r.t_res ? py::cast(*r.t_res) : py::none();
  d["delta_b_offset"] = r.delta_b_offset ? py::cast(*r.delta_b_offset) : py::none();
  d["metadata"] = r.metadata;
  return d;
}

py::dict uncertainty_to_dict(const Uncertainty& u) {
  py::dict d;
  d["value"] = u.value;
  d["phi"] = u.phi;
  d["effectively_infinite"] = u.effectively_infinite;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ramsey frequency estimation under correlated Gaussian quantum dephasing.";

  auto base = py::register_exception<Error>(m, "RamseyError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
  py::register_exception<DegenerateProtocolError>(m, "DegenerateProtocolError", base.ptr());
  py::register_exception<SizeLimitError>(m, "SizeLimitError", base.ptr());
  py::register_exception<NoBracketError>(m, "NoBracketError", base.ptr());

  py::enum_<Backend>(m, "Backend")
      .value("css_closed_form", Backend::css_closed_form)
      .value("oats_cumulant", Backend::oats_cumulant)
      .value("dicke_exact", Backend::dicke_exact);

  py::enum_<PhasePolicy>(m, "PhasePolicy")
      .value("optimal", PhasePolicy::optimal)
      .value("from_b", PhasePolicy::from_b);

  // Noise spectra
  py::class_<NoiseSpectrum>(m, "NoiseSpectrum")
      .def("density", &NoiseSpectrum::density, py::arg("omega"))
      .def("s_plus", &NoiseSpectrum::s_plus, py::arg("omega"))
      .def("s_minus", &NoiseSpectrum::s_minus, py::arg("omega"))
      .def_property_readonly("label", &NoiseSpectrum::label)
      .def_property_readonly("lines", [](const NoiseSpectrum& s) {
        std::vector<std::pair<double, double>> out;
        for (const auto& l : s.lines()) out.emplace_back(l.omega, l.weight);
        return out;
      })
      .def("__repr__", [](const NoiseSpectrum& s) { return "<NoiseSpectrum " + s.label() + ">"; });

  m.def(
      "ohmic_spectrum",
      [](double alpha, double s, double omega_c) { return ohmic_to_spectrum({alpha, s, omega_c}); },
      py::arg("alpha"), py::arg("s"), py::arg("omega_c"));
  m.def(
      "thermal_mode_spectrum",
      [](double g, double omega_mode, double nbar) { return thermal_to_spectrum({g, omega_mode, nbar}); },
      py::arg("g"), py::arg("omega_mode"), py::arg("nbar"));
  m.def(
      "tabulated_spectrum",
      [](std::vector<double> omega, std::vector<double> s) { return tabulated_spectrum(omega, s); },
      py::arg("omega"), py::arg("s"));
  m.def("load_tabulated_spectrum", &load_tabulated_spectrum, py::arg("path"));
  m.def("correlation_function", &correlation_function, py::arg("spectrum"), py::arg("tau"),
        py::arg("rel_tol") = 1e-11);

  // Control protocols
  py::class_<ControlProtocol>(m, "ControlProtocol")
      .def_static("free_evolution", &ControlProtocol::free_evolution)
      .def_static("ion_drive", &ControlProtocol::ion_drive, py::arg("mu"), py::arg("d"))
      .def_readonly("label", &ControlProtocol::label)
      .def("__repr__", [](const ControlProtocol& p) { return "<ControlProtocol " + p.label + ">"; });
  m.def("f_plus", &f_plus, py::arg("protocol"), py::arg("omega"), py::arg("t"));
  m.def("f_minus", &f_minus, py::arg("protocol"), py::arg("omega"), py::arg("t"));
  m.def("y0_integral", &y0_integral, py::arg("protocol"), py::arg("t"));

  // Dephasing parameters
  m.def(
      "chi_psi",
      [](const NoiseSpectrum& s, const ControlProtocol& p, double t, double rel_tol) {
        const ChiPsi c = chi_psi(s, p, t, rel_tol);
        return std::make_pair(c.chi, c.psi);
      },
      py::arg("spectrum"), py::arg("protocol"), py::arg("t"), py::arg("rel_tol") = 1e-9,
      "(chi, Psi) at detection time t.");
  m.def(
      "short_time_anchors",
      [](double alpha, double s, double omega_c) {
        const ShortTimeAnchors a = short_time_anchors({alpha, s, omega_c});
        return std::make_pair(a.chi0, a.psi0);
      },
      py::arg("alpha"), py::arg("s"), py::arg("omega_c"), "(chi0, Psi0) for the ohmic family.");
  m.def(
      "ion_closed_form",
      [](double g, double omega_z, double nbar, double mu, double d, double t) {
        const ChiPsi c = ion_closed_form(g, omega_z, nbar, mu, d, t);
        return std::make_pair(c.chi, c.psi);
      },
      py::arg("g"), py::arg("omega_z"), py::arg("nbar"), py::arg("mu"), py::arg("d"), py::arg("t"));

  // Estimators
  m.def(
      "css_uncertainty",
      [](int n, double chi, double psi, double y0, double nu) {
        return uncertainty_to_dict(css_uncertainty(n, chi, psi, y0, nu));
      },
      py::arg("n_qubits"), py::arg("chi"), py::arg("psi"), py::arg("y0_integral"), py::arg("nu"));
  m.def(
      "oats_uncertainty",
      [](int n, double theta, double beta, double chi, double psi, double y0, double nu) {
        return uncertainty_to_dict(optimize_phase(oats_phase_family(n, theta, beta, chi, psi), y0, nu));
      },
      py::arg("n_qubits"), py::arg("theta"), py::arg("beta"), py::arg("chi"), py::arg("psi"),
      py::arg("y0_integral"), py::arg("nu"), "Cumulant-backend Delta b at the optimal phase.");
  m.def(
      "optimal_squeezing_angles",
      [](int n) {
        const SqueezingAngles a = optimal_squeezing_angles(n);
        return py::make_tuple(a.theta, a.beta, a.variance);
      },
      py::arg("n_qubits"), "(theta, beta, Var Jy) minimizing the initial Var Jy.");

  m.def(
      "q_function",
      [](int n, std::optional<std::pair<double, double>> twist, double phi, double chi, double psi,
         std::vector<double> theta_grid, std::vector<double> gamma_grid) {
        EnsembleSpec spec{n, CoherentSpinState{}};
        if (twist) spec.initial_state = TwistedSpinState{twist->first, twist->second};
        const DickeState rho = dicke_evolve(dicke_prepare(spec), phi, chi, psi);
        py::gil_scoped_release release;
        return Eigen::MatrixXd(q_function(rho, theta_grid, gamma_grid));
      },
      py::arg("n_qubits"), py::arg("twist") = py::none(), py::arg("phi") = 0.0, py::arg("chi") = 0.0,
      py::arg("psi") = 0.0, py::arg("theta_grid"), py::arg("gamma_grid"),
      "Husimi Q on a (theta, gamma) grid; twist = (theta, beta) for a twisted state, None for the CSS.");

  // Scenarios
  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](int n_qubits, NoiseSpectrum spectrum, ControlProtocol protocol, Backend backend,
                       std::optional<std::pair<double, double>> twist, std::optional<double> total_time,
                       std::optional<double> shots, double b, PhasePolicy phase, bool neglect_bath_phase,
                       double quad_rel_tol, int max_qubits) {
             if (total_time && shots) throw DomainError("Scenario: give total_time or shots, not both");
             Scenario s;
             s.ensemble = {n_qubits, CoherentSpinState{}};
             if (twist) s.ensemble.initial_state = TwistedSpinState{twist->first, twist->second};
             s.spectrum = std::move(spectrum);
             s.protocol = std::move(protocol);
             s.backend = backend;
             if (total_time) s.budget = FixedTotalTime{*total_time};
             else s.budget = FixedShots{shots.value_or(1.0)};
             s.b = b;
             s.phase = phase;
             s.neglect_bath_phase = neglect_bath_phase;
             s.quad_rel_tol = quad_rel_tol;
             s.max_qubits = max_qubits;
             s.validate();
             return s;
           }),
           py::arg("n_qubits"), py::arg("spectrum"), py::arg("protocol") = ControlProtocol::free_evolution(),
           py::arg("backend") = Backend::css_closed_form, py::arg("twist") = py::none(),
           py::arg("total_time") = py::none(), py::arg("shots") = py::none(), py::arg("b") = 0.0,
           py::arg("phase") = PhasePolicy::optimal, py::arg("neglect_bath_phase") = false,
           py::arg("quad_rel_tol") = 1e-9, py::arg("max_qubits") = kDefaultMaxQubits)
      .def_property_readonly("n_qubits", [](const Scenario& s) { return s.ensemble.n_qubits; })
      .def_readwrite("b", &Scenario::b)
      .def_readwrite("neglect_bath_phase", &Scenario::neglect_bath_phase)
      .def_readonly("backend", &Scenario::backend);

  m.def(
      "optimally_squeezed_twist",
      [](int n) {
        const SqueezingAngles a = optimal_squeezing_angles(n);
        return std::make_pair(a.theta, a.beta);
      },
      py::arg("n_qubits"), "(theta, beta) for Scenario(twist=...).");

  m.def(
      "evaluate",
      [](const Scenario& s, double t) {
        const PointResult p = ScenarioEvaluator(s)(t);
        py::dict d;
        d["t"] = p.t;
        d["value"] = p.value;
        d["delta_b"] = p.delta_b;
        d["phi"] = p.phi;
        d["chi"] = p.chi;
        d["psi"] = p.psi;
        d["flag"] = std::string(to_string(p.flag));
        return d;
      },
      py::arg("scenario"), py::arg("t"));
  m.def(
      "uncertainty_curve",
      [](const Scenario& s, std::vector<double> times) {
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = uncertainty_curve(s, times);
        }
        return sweep_to_dict(r);
      },
      py::arg("scenario"), py::arg("times"));
  m.def(
      "optimize_detection_time",
      [](const Scenario& s, double lo, double hi, std::optional<double> t_res, int points_per_decade,
         double rel_tol) {
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = optimize_detection_time(s, {lo, hi}, t_res, {points_per_decade, rel_tol});
        }
        return sweep_to_dict(r);
      },
      py::arg("scenario"), py::arg("t_min"), py::arg("t_max"), py::arg("t_res") = py::none(),
      py::arg("points_per_decade") = 400, py::arg("rel_tol") = 1e-6);
  m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("points_per_decade"));
  m.def(
      "scaling_fit",
      [](std::vector<double> n, std::vector<double> v) {
        const ScalingFit f = scaling_fit(n, v);
        py::dict d;
        d["exponent"] = f.exponent;
        d["prefactor"] = f.prefactor;
        d["r_squared"] = f.r_squared;
        return d;
      },
      py::arg("n"), py::arg("values"));

  // Trapped ions
  py::class_<IonParameters>(m, "IonParameters")
      .def(py::init<>())
      .def_readwrite("omega_z", &IonParameters::omega_z)
      .def_readwrite("u_dk", &IonParameters::u_dk)
      .def_readwrite("mass", &IonParameters::mass)
      .def_readwrite("nbar", &IonParameters::nbar)
      .def_readwrite("detuning", &IonParameters::detuning)
      .def_readwrite("n_qubits", &IonParameters::n_qubits)
      .def_readwrite("shots", &IonParameters::shots)
      .def("set_twist", [](IonParameters& p, double theta, double beta) {
        p.initial_state = TwistedSpinState{theta, beta};
      })
      .def("set_coherent", [](IonParameters& p) { p.initial_state = CoherentSpinState{}; });
  m.def("ion_coupling", &ion_coupling, py::arg("params"));
  m.def("ion_scenario", &ion_scenario, py::arg("params"), py::arg("backend") = Backend::css_closed_form);
  m.def(
      "ion_first_lobe",
      [](const IonParameters& p) {
        const TimeBracket b = ion_first_lobe(p);
        return std::make_pair(b.lo, b.hi);
      },
      py::arg("params"));
  m.def("ion_dzc_from_delta_b", &ion_dzc_from_delta_b, py::arg("params"), py::arg("delta_b"));
  m.def("ion_analytic_dzc", &ion_analytic_dzc, py::arg("params"));
}
