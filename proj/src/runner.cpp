#include "ramsey/runner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "ramsey/errors.hpp"
#include "ramsey/optimize.hpp"

namespace ramsey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResolution = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double shots_at(const Budget& budget, double t) {
  if (const auto* total = std::get_if<FixedTotalTime>(&budget)) return total->total_time / t;
  return std::get<FixedShots>(budget).shots;
}

// Per-point results are independent, so a static split over threads is reproducible bit for bit.
std::vector<PointResult> evaluate_all(const ScenarioEvaluator& eval, std::span<const double> times) {
  std::vector<PointResult> out(times.size());
  const std::size_t n = times.size();
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n / 16, 1));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) out[i] = eval(times[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SweepResult collect(const ScenarioEvaluator& eval, std::span<const double> times,
                    const std::vector<PointResult>& points) {
  SweepResult r;
  r.times.assign(times.begin(), times.end());
  r.delta_b.reserve(points.size());
  r.flags.reserve(points.size());
  for (const auto& p : points) {
    r.delta_b.push_back(p.value);
    r.flags.push_back(p.flag);
  }
  const auto best = std::min_element(r.delta_b.begin(), r.delta_b.end());
  const auto i = static_cast<std::size_t>(best - r.delta_b.begin());
  r.t_opt = r.times[i];
  r.delta_b_opt = *best;
  r.at_boundary = i == 0 || i + 1 == r.times.size();
  r.metadata = eval.metadata();
  return r;
}

// Golden-section refinement in log t around the smallest scanned value.
TimeMinimum refine(const std::function<double(double)>& f, std::span<const double> grid,
                   std::span<const double> values, double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("detection-time search: rel_tol must be > 0");
  const Bracket br = bracket_from_scan(grid, values);
  const Minimum m = golden_section([&](double u) { return f(std::exp(u)); }, std::log(br.lo),
                                   std::log(br.hi), 0.0, rel_tol);
  if (m.f <= values[br.index]) return {std::exp(m.x), m.f};
  return {br.mid, values[br.index]};
}

}  // namespace

std::string_view to_string(PointFlag flag) {
  switch (flag) {
    case PointFlag::none: return "ok";
    case PointFlag::effectively_infinite: return "effectively_infinite";
    case PointFlag::below_resolution: return "below_resolution";
  }
  return "unknown";
}

std::string_view to_string(PhasePolicy policy) {
  return policy == PhasePolicy::optimal ? "optimal" : "from_b";
}

void Scenario::validate() const {
  ensemble.validate();
  if (!std::isfinite(b)) throw DomainError("scenario: b must be finite");
  std::visit(
      [](const auto& budget) {
        using B = std::decay_t<decltype(budget)>;
        if constexpr (std::is_same_v<B, FixedTotalTime>) {
          if (!(budget.total_time > 0.0) || !std::isfinite(budget.total_time)) {
            throw DomainError("scenario: total time T must be > 0");
          }
        } else {
          if (!(budget.shots > 0.0) || !std::isfinite(budget.shots)) {
            throw DomainError("scenario: number of shots nu must be > 0");
          }
        }
      },
      budget);
  if (backend == Backend::css_closed_form && !ensemble.is_coherent()) {
    throw DomainError("scenario: css_closed_form requires a coherent initial state");
  }
  if (backend == Backend::oats_cumulant && ensemble.n_qubits < 3) {
    throw DomainError("scenario: oats_cumulant requires N >= 3");
  }
  if (!(quad_rel_tol > 0.0)) throw DomainError("scenario: quadrature tolerance must be > 0");
}

EnsembleSpec optimally_squeezed(int n_qubits) {
  const SqueezingAngles a = optimal_squeezing_angles(n_qubits);
  return {n_qubits, TwistedSpinState{a.theta, a.beta}};
}

ScenarioEvaluator::ScenarioEvaluator(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  if (const auto* tw = std::get_if<TwistedSpinState>(&scenario_.ensemble.initial_state)) {
    theta_ = tw->theta;
    beta_ = tw->beta;
  }
  if (scenario_.backend == Backend::dicke_exact) {
    bands_ = DickeBands::from_amplitudes(prepare_amplitudes(scenario_.ensemble, scenario_.max_qubits));
  }
}

PointResult ScenarioEvaluator::operator()(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("detection time must be > 0");
  const Scenario& s = scenario_;
  const ChiPsi cp = chi_psi(s.spectrum, s.protocol, t, s.quad_rel_tol);
  PointResult p;
  p.t = t;
  p.chi = cp.chi;
  p.psi = s.neglect_bath_phase ? 0.0 : cp.psi;
  const double y0 = y0_integral(s.protocol, t);
  const double nu = shots_at(s.budget, t);
  const int n = s.ensemble.n_qubits;

  Uncertainty u;
  bool resolved = true;
  if (s.backend == Backend::css_closed_form && s.phase == PhasePolicy::optimal) {
    u = css_uncertainty(n, p.chi, p.psi, y0, nu);
  } else if (s.backend == Backend::css_closed_form) {
    u = uncertainty_from_moments(css_moments(n, s.b * y0, p.chi, p.psi, y0), nu);
  } else {
    const PhaseFamily family = s.backend == Backend::dicke_exact
                                   ? dicke_phase_family(*bands_, p.chi, p.psi)
                                   : oats_phase_family(n, theta_, beta_, p.chi, p.psi);
    resolved = s.backend != Backend::dicke_exact ||
               std::hypot(family.jx, family.jy) >= kResolution * 0.5 * n;
    u = s.phase == PhasePolicy::optimal ? optimize_phase(family, y0, nu)
                                        : uncertainty_from_moments(family.at(s.b * y0, y0), nu);
  }
  p.phi = s.phase == PhasePolicy::optimal ? u.phi : s.b * y0;
  p.delta_b = u.value;
  if (u.effectively_infinite || !std::isfinite(u.value)) {
    p.flag = PointFlag::effectively_infinite;
    p.delta_b = kInf;
  } else if (!resolved) {
    p.flag = PointFlag::below_resolution;
  }
  p.value = p.delta_b;
  if (const auto* total = std::get_if<FixedTotalTime>(&s.budget)) {
    p.value = p.delta_b * std::sqrt(total->total_time);
  }
  return p;
}

std::map<std::string, std::string> ScenarioEvaluator::metadata() const {
  const Scenario& s = scenario_;
  std::map<std::string, std::string> m;
  m["backend"] = to_string(s.backend);
  m["phase_policy"] = to_string(s.phase);
  m["n_qubits"] = std::to_string(s.ensemble.n_qubits);
  m["initial_state"] = s.ensemble.is_coherent() ? "css" : "oats";
  if (!s.ensemble.is_coherent()) {
    m["theta_rad"] = fmt(theta_);
    m["beta_rad"] = fmt(beta_);
  }
  m["b_rad_per_s"] = fmt(s.b);
  m["spectrum"] = s.spectrum.label();
  m["protocol"] = s.protocol.label;
  m["bath_phase"] = s.neglect_bath_phase ? "forced_zero" : "included";
  m["chi_psi_route"] = "frequency_domain_quadrature(rel_tol=" + fmt(s.quad_rel_tol) + ")";
  if (const auto* total = std::get_if<FixedTotalTime>(&s.budget)) {
    m["budget"] = "fixed_total_time";
    m["total_time_s"] = fmt(total->total_time);
    m["reported_value"] = "delta_b*sqrt(T)";
  } else {
    m["budget"] = "fixed_shots";
    m["shots"] = fmt(std::get<FixedShots>(s.budget).shots);
    m["reported_value"] = "delta_b";
  }
  return m;
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw DomainError("log_grid: need 0 < lo < hi");
  }
  if (points_per_decade < 1) throw DomainError("log_grid: points_per_decade must be >= 1");
  const double decades = std::log10(hi / lo);
  const auto intervals = std::max<long>(2, std::lround(std::ceil(decades * points_per_decade)));
  std::vector<double> g(static_cast<std::size_t>(intervals) + 1);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(intervals);
  for (long i = 0; i <= intervals; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + step * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

SweepResult uncertainty_curve(const Scenario& scenario, std::span<const double> times) {
  if (times.empty()) throw DomainError("uncertainty_curve: empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw DomainError("uncertainty_curve: times must be positive and strictly increasing");
    }
  }
  const ScenarioEvaluator eval(scenario);
  return collect(eval, times, evaluate_all(eval, times));
}

TimeMinimum minimize_over_time(const std::function<double(double)>& objective, TimeBracket bracket,
                               const OptimizeOptions& options) {
  const std::vector<double> grid = log_grid(bracket.lo, bracket.hi, options.points_per_decade);
  std::vector<double> values(grid.size());
  std::transform(grid.begin(), grid.end(), values.begin(), objective);
  return refine(objective, grid, values, options.rel_tol);
}

SweepResult optimize_detection_time(const Scenario& scenario, TimeBracket bracket,
                                    std::optional<double> t_res, const OptimizeOptions& options) {
  if (t_res && !(*t_res >= 0.0)) throw DomainError("optimize_detection_time: t_res must be >= 0");
  const ScenarioEvaluator eval(scenario);
  const std::vector<double> grid = log_grid(bracket.lo, bracket.hi, options.points_per_decade);
  SweepResult r = collect(eval, grid, evaluate_all(eval, grid));

  const TimeMinimum m =
      refine([&](double t) { return eval(t).value; }, r.times, r.delta_b, options.rel_tol);
  r.t_opt = m.t;
  r.delta_b_opt = m.value;
  r.at_boundary = false;
  r.metadata["t_opt_refinement"] = "golden_section_log_t(rel_tol=" + fmt(options.rel_tol) + ")";
  r.metadata["coarse_points_per_decade"] = std::to_string(options.points_per_decade);
  if (t_res) {
    r.t_res = *t_res;
    r.delta_b_offset = eval(r.t_opt + *t_res).value;
  }
  return r;
}

ScalingFit scaling_fit(std::span<const double> n, std::span<const double> values) {
  if (n.size() != values.size()) throw DomainError("scaling_fit: length mismatch");
  if (n.size() < 3) throw DomainError("scaling_fit: need at least 3 points");
  std::vector<double> x(n.size()), y(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(n[i]) || !std::isfinite(values[i])) {
      throw DomainError("scaling_fit: all points must be positive and finite");
    }
    x[i] = std::log(n[i]);
    y[i] = std::log(values[i]);
  }
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("scaling_fit: N values must not all coincide");
  ScalingFit f;
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + f.exponent * (x[i] - mx));
    ss_res += e * e;
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

void IonParameters::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("ion: ") + what + " must be > 0");
  };
  positive(omega_z, "omega_z");
  positive(u_dk, "U dk");
  positive(mass, "ion mass");
  positive(shots, "nu");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("ion: nbar must be >= 0");
  if (detuning == 0.0 || !std::isfinite(detuning)) throw DomainError("ion: detuning D must be nonzero");
  if (!(std::abs(detuning) < 0.1 * omega_z)) throw DomainError("ion: need |D| << omega_z");
  if (n_qubits < 1) throw DomainError("ion: N must be >= 1");
}

double ion_coupling(const IonParameters& p) {
  p.validate();
  return p.u_dk / std::sqrt(2.0 * kHbar * p.mass * p.n_qubits * p.omega_z);
}

Scenario ion_scenario(const IonParameters& p, Backend backend) {
  const double g = ion_coupling(p);
  Scenario s;
  s.ensemble = {p.n_qubits, p.initial_state};
  s.spectrum = thermal_to_spectrum({g, p.omega_z, p.nbar});
  s.protocol = ControlProtocol::ion_drive(p.omega_z - p.detuning, p.detuning);
  s.budget = FixedShots{p.shots};
  s.backend = backend;
  // phi of order one near the bath-phase time scale |D| / (sqrt(N) g^2).
  s.b = std::sqrt(static_cast<double>(p.n_qubits)) * g * g / std::abs(p.detuning);
  s.validate();
  return s;
}

TimeBracket ion_first_lobe(const IonParameters& p) {
  const double g = ion_coupling(p);
  const double mu = p.omega_z - p.detuning;
  const double t_half =
      0.25 * std::numbers::pi * std::abs(mu * mu - p.omega_z * p.omega_z) / (g * g * p.omega_z);
  return {1e-4 * t_half, 0.999 * t_half};
}

double ion_dzc_from_delta_b(const IonParameters& p, double delta_b) {
  p.validate();
  return kHbar * delta_b / p.u_dk;
}

double ion_analytic_dzc(const IonParameters& p) {
  p.validate();
  return p.u_dk / (2.0 * std::sqrt(p.shots) * p.mass * p.omega_z * std::abs(p.detuning) *
                   std::sqrt(static_cast<double>(p.n_qubits)));
}

}  // namespace ramsey
