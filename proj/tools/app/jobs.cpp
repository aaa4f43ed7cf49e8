#include "jobs.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "ramsey/dephasing.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/runner.hpp"

#ifndef RAMSEY_VERSION
#define RAMSEY_VERSION "unknown"
#endif

namespace ramsey::app {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Metadata = std::map<std::string, std::string>;

// Library failures that are about the numerics rather than the input become NumericalFailure.
template <typename F>
auto guarded(const std::string& operation, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const QuadratureError& e) {
    throw NumericalFailure(operation, e.what());
  } catch (const DegenerateProtocolError& e) {
    throw NumericalFailure(operation, e.what());
  } catch (const NoBracketError& e) {
    throw NumericalFailure(operation, e.what());
  }
}

class AngleCache {
 public:
  const SqueezingAngles& at(int n) {
    auto it = cache_.find(n);
    if (it == cache_.end()) it = cache_.emplace(n, optimal_squeezing_angles(n)).first;
    return it->second;
  }

 private:
  std::map<int, SqueezingAngles> cache_;
};

InitialState initial_state(const SeriesConfig& s, int n, AngleCache& angles) {
  switch (s.state) {
    case StateKind::css: return CoherentSpinState{};
    case StateKind::oats_optimal: {
      const SqueezingAngles& a = angles.at(n);
      return TwistedSpinState{a.theta, a.beta};
    }
    case StateKind::oats: return TwistedSpinState{s.theta, s.beta};
  }
  return CoherentSpinState{};
}

NoiseSpectrum build_spectrum(const SpectrumConfig& c) {
  if (c.kind == "ohmic") return ohmic_to_spectrum({c.alpha, c.s, c.omega_c});
  if (c.kind == "thermal_mode") return thermal_to_spectrum({c.g, c.omega_mode, c.nbar});
  if (c.kind == "tabulated") return load_tabulated_spectrum(c.path);
  return NoiseSpectrum{};
}

ControlProtocol build_protocol(const ProtocolConfig& c) {
  if (c.kind == "ion_drive") return ControlProtocol::ion_drive(c.mu, c.d);
  return ControlProtocol::free_evolution();
}

IonParameters ion_parameters(const RunConfig& c, int n, double detuning) {
  IonParameters p;
  p.omega_z = c.ion.omega_z;
  p.u_dk = c.ion.u_dk;
  p.mass = c.ion.mass;
  p.nbar = c.ion.nbar;
  p.detuning = detuning;
  p.n_qubits = n;
  p.shots = c.shots;
  p.validate();
  return p;
}

struct Point {
  int n = 0;
  double detuning = 0.0;  // ion model only
};

Scenario build_scenario(const RunConfig& c, const SeriesConfig& series, Point at, AngleCache& angles) {
  Scenario s;
  if (c.model == Model::ion) {
    IonParameters p = ion_parameters(c, at.n, at.detuning);
    p.initial_state = initial_state(series, at.n, angles);
    s = ion_scenario(p, series.backend);
  } else {
    s.ensemble = {at.n, initial_state(series, at.n, angles)};
    s.spectrum = build_spectrum(c.spectrum);
    s.protocol = build_protocol(c.protocol);
    // phi of order one in the middle of the time window.
    s.b = 1.0 / std::sqrt(c.t_min * c.t_max);
  }
  if (c.b) s.b = *c.b;
  s.backend = series.backend;
  if (c.fixed_total_time) {
    s.budget = FixedTotalTime{c.total_time};
  } else {
    s.budget = FixedShots{c.shots};
  }
  s.phase = c.phase;
  s.neglect_bath_phase = series.psi_zero;
  s.quad_rel_tol = c.quad_rel_tol;
  s.max_qubits = c.max_qubits;
  s.validate();
  return s;
}

TimeBracket search_window(const RunConfig& c, Point at) {
  if (c.model == Model::ion && c.ion.first_lobe_window) return ion_first_lobe(ion_parameters(c, at.n, at.detuning));
  return {c.t_min, c.t_max};
}

struct Optimum {
  double t = kNaN;
  double value = kNaN;
  std::string flag = "ok";
  std::optional<double> offset_value;
  Metadata metadata;
};

Optimum find_optimum(const RunConfig& c, const Scenario& s, TimeBracket window, const std::string& label) {
  const OptimizeOptions opts{c.opt_points_per_decade, c.opt_rel_tol};
  Optimum o;
  const SweepResult r = guarded("detection-time search for " + label, [&] {
    try {
      return optimize_detection_time(s, window, c.t_res, opts);
    } catch (const NoBracketError&) {
      // No interior dip inside the window: report the best grid point and say so.
      SweepResult grid_only = uncertainty_curve(s, log_grid(window.lo, window.hi, opts.points_per_decade));
      grid_only.at_boundary = true;
      return grid_only;
    }
  });
  o.t = r.t_opt;
  o.value = r.delta_b_opt;
  o.offset_value = r.delta_b_offset;
  o.metadata = r.metadata;
  if (r.at_boundary) {
    o.flag = "boundary";
    if (c.t_res) {
      const ScenarioEvaluator eval(s);
      o.offset_value =
          guarded("uncertainty at t_opt + t_res for " + label, [&] { return eval(o.t + *c.t_res).value; });
    }
  }
  if (std::isinf(o.value)) o.flag = "effectively_infinite";
  return o;
}

std::string value_unit(const RunConfig& c) {
  return c.fixed_total_time ? "Delta b * sqrt(T) [rad s^-1/2]" : "Delta b [rad/s]";
}

void add_series_metadata(Metadata& meta, const std::string& prefix, const Metadata& m) {
  for (const auto& [k, v] : m) meta[prefix + k] = v;
}

void flatten(const YAML::Node& node, const std::string& prefix, Metadata& out) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      flatten(kv.second, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.IsSequence()) {
    bool scalars = true;
    for (const auto& item : node) scalars = scalars && item.IsScalar();
    if (scalars) {
      std::string joined = "[";
      for (std::size_t i = 0; i < node.size(); ++i) joined += (i ? ", " : "") + node[i].Scalar();
      out[prefix] = joined + "]";
    } else {
      for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], prefix + "." + std::to_string(i), out);
    }
  } else if (node.IsScalar()) {
    out[prefix] = node.Scalar();
  } else {
    out[prefix] = "";
  }
}

void derived_constants(const RunConfig& c, Metadata& meta) {
  if (c.model == Model::spin_boson && c.spectrum.kind == "ohmic") {
    const ShortTimeAnchors a = short_time_anchors({c.spectrum.alpha, c.spectrum.s, c.spectrum.omega_c});
    meta["derived.chi0_rad_per_s"] = format_number(a.chi0);
    meta["derived.psi0_rad_per_s"] = format_number(a.psi0);
  }
  if (c.model == Model::ion) {
    const IonParameters p = ion_parameters(c, c.n_qubits, c.ion.detuning);
    meta["derived.g_rad_per_s"] = format_number(ion_coupling(p));
    meta["derived.mu_rad_per_s"] = format_number(p.omega_z - p.detuning);
    meta["derived.analytic_dzc_m"] = format_number(ion_analytic_dzc(p));
  }
}

std::string render_metadata(const Metadata& meta) {
  std::ostringstream os;
  os << "# key = value; config.* repeats resolved_config.yaml\n";
  for (const auto& [k, v] : meta) os << k << " = " << v << "\n";
  return os.str();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

void q_function_files(const RunConfig& c, AngleCache& angles, StagedOutput& out, Metadata& meta) {
  const SeriesConfig* chosen = nullptr;
  for (const auto& s : c.series) {
    if (!s.analytic && s.backend == Backend::dicke_exact && !chosen) chosen = &s;
  }
  for (const auto& s : c.series) {
    if (!s.analytic && !chosen) chosen = &s;
  }
  if (!chosen) throw ConfigError("q_function needs at least one non-analytic series");
  const Point at{c.n_qubits, c.ion.detuning};
  const Scenario scenario = build_scenario(c, *chosen, at, angles);
  const ScenarioEvaluator eval(scenario);
  const DickeState state0 = dicke_prepare(scenario.ensemble, scenario.max_qubits);
  const std::vector<double> theta = linspace(0.0, std::numbers::pi, c.q_theta_points);
  const std::vector<double> gamma =
      c.q_gamma_points == 1 ? std::vector<double>{0.0} : linspace(-std::numbers::pi, std::numbers::pi, c.q_gamma_points);
  meta["q_function.series"] = chosen->name;

  for (std::size_t k = 0; k < c.q_times.size(); ++k) {
    const double t = c.q_times[k];
    PointResult p;
    if (t > 0.0) p = guarded("dephasing parameters for the Q-function", [&] { return eval(t); });
    const DickeState rho = dicke_evolve(state0, p.phi, p.chi, p.psi);
    const Eigen::MatrixXd q = q_function(rho, theta, gamma);

    std::ostringstream os;
    os << "# Husimi Q(theta, gamma) of series " << chosen->name << " at t_s = " << format_number(t) << "\n";
    os << "# phi_rad = " << format_number(p.phi) << ", chi = " << format_number(p.chi)
       << ", psi_rad = " << format_number(p.psi) << "\n";
    os << "# first column: polar angle theta [rad]; header row: azimuth gamma [rad]; body: Q [dimensionless]\n";
    os << "theta_rad\\gamma_rad";
    for (double g : gamma) os << "," << format_number(g);
    os << "\n";
    for (std::size_t i = 0; i < theta.size(); ++i) {
      os << format_number(theta[i]);
      for (std::size_t j = 0; j < gamma.size(); ++j) {
        os << "," << format_number(q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
      os << "\n";
    }
    const std::string name = "q_function_" + std::to_string(k) + ".csv";
    out.add(name, os.str());
    meta["q_function." + std::to_string(k) + ".t_s"] = format_number(t);
  }
}

void curve_job(const RunConfig& c, AngleCache& angles, StagedOutput& out, Metadata& meta) {
  const std::vector<double> times = log_grid(c.t_min, c.t_max, c.points_per_decade);
  const Point at{c.n_qubits, c.ion.detuning};

  std::vector<SweepResult> sweeps;
  std::vector<Optimum> optima;
  std::optional<Scenario> first;
  for (const auto& s : c.series) {
    if (s.analytic) continue;
    const Scenario scenario = build_scenario(c, s, at, angles);
    if (!first) first = scenario;
    sweeps.push_back(guarded("uncertainty curve for series " + s.name, [&] { return uncertainty_curve(scenario, times); }));
    add_series_metadata(meta, "series." + s.name + ".", sweeps.back().metadata);
    if (c.optimize) {
      optima.push_back(find_optimum(c, scenario, search_window(c, at), "series " + s.name));
      add_series_metadata(meta, "series." + s.name + ".", optima.back().metadata);
    }
  }

  std::ostringstream csv;
  csv << "# t_s: detection time [s]\n";
  csv << "# <series>_delta_b: " << value_unit(c) << "\n";
  csv << "# <series>_flag: ok | effectively_infinite | below_resolution\n";
  csv << "t_s";
  for (const auto& s : c.series) {
    if (!s.analytic) csv << "," << s.name << "_delta_b," << s.name << "_flag";
  }
  csv << "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    csv << format_number(times[i]);
    for (const auto& r : sweeps) csv << "," << format_number(r.delta_b[i]) << "," << to_string(r.flags[i]);
    csv << "\n";
  }
  out.add("curve.csv", csv.str());

  if (c.optimize) {
    std::ostringstream os;
    os << "# t_opt_s: optimal detection time [s]; delta_b_opt: " << value_unit(c) << "\n";
    os << "# flag: ok (interior minimum, refined) | boundary (grid minimum at a window edge) | effectively_infinite\n";
    os << "# delta_b_at_t_opt_plus_t_res: same unit, nan unless optimize.t_res_s is set\n";
    os << "series,t_opt_s,delta_b_opt,flag,delta_b_at_t_opt_plus_t_res\n";
    std::size_t k = 0;
    for (const auto& s : c.series) {
      if (s.analytic) continue;
      const Optimum& o = optima[k++];
      os << s.name << "," << format_number(o.t) << "," << format_number(o.value) << "," << o.flag << ","
         << format_number(o.offset_value.value_or(kNaN)) << "\n";
    }
    out.add("optima.csv", os.str());
  }

  if (first) {
    const DephasingTrajectory tr = guarded("dephasing trajectory", [&] {
      return make_trajectory(
          times, first->protocol, first->b,
          [&](double t) { return chi_psi(first->spectrum, first->protocol, t, first->quad_rel_tol); },
          "frequency_domain_quadrature");
    });
    std::ostringstream os;
    os << "# t_s: detection time [s]; phi_rad: b * int y0 [rad] with b = " << format_number(first->b)
       << " rad/s; chi: collective decay [dimensionless]; psi_rad: bath phase [rad]\n";
    os << "t_s,phi_rad,chi,psi_rad\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      os << format_number(tr.times[i]) << "," << format_number(tr.phi[i]) << "," << format_number(tr.chi[i]) << ","
         << format_number(tr.psi[i]) << "\n";
    }
    out.add("trajectory.csv", os.str());
  }

  if (!c.q_times.empty()) q_function_files(c, angles, out, meta);
}

void scan_job(const RunConfig& c, AngleCache& angles, StagedOutput& out, Metadata& meta) {
  const bool ion = c.model == Model::ion;
  const bool over_n = c.scan_parameter == ScanParameter::n_qubits;
  std::map<std::string, std::vector<double>> best;  // series -> delta_b_opt per scan value

  std::ostringstream csv;
  csv << "# " << (over_n ? "n_qubits: ensemble size N" : "detuning_rad_per_s: D = omega_z - mu [rad/s]") << "\n";
  if (ion) csv << "# g_rad_per_s: spin-phonon coupling [rad/s]\n";
  csv << "# <series>_t_opt_s: optimal detection time [s] (nan for analytic)\n";
  csv << "# <series>_delta_b_opt: " << value_unit(c) << "\n";
  if (ion) {
    csv << "# <series>_dzc_m: amplitude uncertainty Delta Z_c [m]; <series>_dzc_sqrt_nu_m: Delta Z_c * sqrt(nu) [m]\n";
  }
  csv << "# <series>_flag: ok | boundary | effectively_infinite | analytic\n";
  csv << (over_n ? "n_qubits" : "detuning_rad_per_s");
  if (ion) csv << ",g_rad_per_s";
  for (const auto& s : c.series) {
    csv << "," << s.name << "_t_opt_s," << s.name << "_delta_b_opt";
    if (ion) csv << "," << s.name << "_dzc_m," << s.name << "_dzc_sqrt_nu_m";
    csv << "," << s.name << "_flag";
  }
  csv << "\n";

  for (std::size_t v = 0; v < c.scan_values.size(); ++v) {
    const double value = c.scan_values[v];
    const Point at{over_n ? static_cast<int>(value) : c.n_qubits, over_n ? c.ion.detuning : value};
    csv << format_number(value);
    std::optional<IonParameters> p;
    if (ion) {
      p = ion_parameters(c, at.n, at.detuning);
      csv << "," << format_number(ion_coupling(*p));
    }
    for (const auto& s : c.series) {
      Optimum o;
      if (s.analytic) {
        const double dzc = ion_analytic_dzc(*p);
        o.value = dzc * p->u_dk / kHbar;
        o.flag = "analytic";
      } else {
        const Scenario scenario = build_scenario(c, s, at, angles);
        o = find_optimum(c, scenario, search_window(c, at),
                         "series " + s.name + " at " + std::string(to_string(c.scan_parameter)) + " = " +
                             format_number(value));
        add_series_metadata(meta, "series." + s.name + ".scan." + std::to_string(v) + ".", o.metadata);
      }
      best[s.name].push_back(o.value);
      csv << "," << format_number(o.t) << "," << format_number(o.value);
      if (ion) {
        // Delta b here is per nu shots; the sqrt(nu) column removes that factor.
        const double dzc = ion_dzc_from_delta_b(*p, o.value);
        csv << "," << format_number(dzc) << "," << format_number(dzc * std::sqrt(c.shots));
      }
      csv << "," << o.flag;
    }
    csv << "\n";
  }
  out.add("scan.csv", csv.str());

  if (over_n && c.scan_values.size() >= 3) {
    for (const auto& s : c.series) {
      const auto& ys = best[s.name];
      bool usable = true;
      for (double y : ys) usable = usable && std::isfinite(y) && y > 0.0;
      if (!usable) continue;
      const ScalingFit f = scaling_fit(c.scan_values, ys);
      meta["fit." + s.name + ".exponent"] = format_number(f.exponent);
      meta["fit." + s.name + ".prefactor"] = format_number(f.prefactor);
      meta["fit." + s.name + ".r_squared"] = format_number(f.r_squared);
    }
  }
}

}  // namespace

StagedOutput run_job(const RunConfig& c, const std::string& resolved_yaml) {
  StagedOutput out(c.output_dir);
  Metadata meta;
  AngleCache angles;
  meta["code_version"] = RAMSEY_VERSION;
  meta["rerun"] = "ramsey run resolved_config.yaml";
  derived_constants(c, meta);
  for (const auto& s : c.series) {
    if (s.analytic || s.state != StateKind::oats_optimal) continue;
    if (c.job == JobKind::curve || c.scan_parameter != ScanParameter::n_qubits) {
      const SqueezingAngles& a = angles.at(c.n_qubits);
      meta["derived.optimal_theta_rad"] = format_number(a.theta);
      meta["derived.optimal_beta_rad"] = format_number(a.beta);
    }
  }

  if (c.job == JobKind::curve) {
    curve_job(c, angles, out, meta);
  } else {
    scan_job(c, angles, out, meta);
  }

  Metadata config_keys;
  flatten(YAML::Load(resolved_yaml), "", config_keys);
  add_series_metadata(meta, "config.", config_keys);
  std::string files;
  for (const auto& [name, content] : out.files()) files += (files.empty() ? "" : ", ") + name;
  meta["files"] = files + ", metadata.txt, resolved_config.yaml";

  out.add("resolved_config.yaml", resolved_yaml);
  out.add("metadata.txt", render_metadata(meta));
  return out;
}

}  // namespace ramsey::app
