#include "ramsey/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ramsey/errors.hpp"
#include "ramsey/quadrature.hpp"

namespace ramsey {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("dephasing: t must be >= 0");
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Largest angular frequency present in y, used to size oracle panels.
double modulation_bandwidth(const Modulation& y) {
  double f = 0.0;
  for (const auto& term : y.terms()) f = std::max(f, std::abs(term.freq));
  return f;
}

}  // namespace

ChiPsi chi_psi(const NoiseSpectrum& spectrum, const ControlProtocol& protocol, double t,
               double rel_tol) {
  check_time(t);
  ChiPsi out;
  if (t == 0.0) return out;

  for (const auto& line : spectrum.lines()) {
    if (line.weight == 0.0) continue;
    const double w = std::abs(line.omega);
    out.chi += line.weight * f_plus(protocol, w, t);
    out.psi += sign(line.omega) * line.weight * f_minus(protocol, w, t).imag();
  }

  if (const auto& cont = spectrum.continuous()) {
    quad::PanelOptions opts;
    opts.panel_width = std::min(cont->scale, std::numbers::pi / t);
    opts.tail_start = cont->tail_start;
    opts.rel_tol = rel_tol;
    const double extent = spectrum.positive_extent();

    auto chi_integrand = [&](double w) {
      const double sp = spectrum.s_plus(w);
      return sp == 0.0 ? 0.0 : f_plus(protocol, w, t) * sp;
    };
    auto psi_integrand = [&](double w) {
      const double sm = spectrum.s_minus(w);
      return sm == 0.0 ? 0.0 : f_minus(protocol, w, t).imag() * sm;
    };
    const quad::Result rc = quad::integrate_panels(chi_integrand, 0.0, extent, opts);
    const quad::Result rp = quad::integrate_panels(psi_integrand, 0.0, extent, opts);
    out.chi += rc.value / kTwoPi;
    out.psi += rp.value / kTwoPi;
    out.chi_error = rc.error / kTwoPi;
    out.psi_error = rp.error / kTwoPi;
  }
  return out;
}

ChiPsi chi_psi_time_domain_oracle(const NoiseSpectrum& spectrum, const ControlProtocol& protocol,
                                  double t, double rel_tol) {
  check_time(t);
  ChiPsi out;
  if (t == 0.0 || spectrum.is_zero()) return out;

  // Panel width resolving the fastest oscillation among modulation and lines.
  double fastest = 2.0 * modulation_bandwidth(protocol.y);
  for (const auto& line : spectrum.lines()) fastest = std::max(fastest, std::abs(line.omega));
  if (const auto& cont = spectrum.continuous()) {
    fastest = std::max(fastest, std::min(cont->tail_start + 8.0 * cont->scale, spectrum.positive_extent()));
  }
  double width = fastest > 0.0 ? std::numbers::pi / fastest : t;
  width = std::min(width, t / 8.0);

  const Modulation& y = protocol.y;
  // Autocorrelation K(v) = int_0^{t-v} y(u+v) y(u) du.
  auto autocorrelation = [&](double v) {
    const double len = t - v;
    if (len <= 0.0) return 0.0;
    quad::PanelOptions o;
    o.panel_width = width;
    o.rel_tol = 1e-12;
    o.abs_tol = 1e-300;
    auto f = [&](double u) { return y(u + v) * y(u); };
    return quad::integrate_panels(f, 0.0, len, o).value;
  };
  auto integrand_chi = [&](double v) {
    return 2.0 * correlation_function(spectrum, v, 1e-12).real() * autocorrelation(v);
  };
  auto integrand_psi = [&](double v) {
    return correlation_function(spectrum, v, 1e-12).imag() * autocorrelation(v);
  };

  quad::PanelOptions o;
  o.panel_width = width;
  o.rel_tol = rel_tol;
  o.abs_tol = 1e-300;
  const auto rc = quad::integrate_panels(integrand_chi, 0.0, t, o);
  const auto rp = quad::integrate_panels(integrand_psi, 0.0, t, o);
  out.chi = rc.value;
  out.psi = rp.value;
  out.chi_error = rc.error;
  out.psi_error = rp.error;
  return out;
}

ChiPsi ion_closed_form(double g, double omega_z, double nbar, double mu, double d, double t) {
  check_time(t);
  if (d == 0.0) throw DomainError("ion_closed_form: detuning D must be nonzero");
  if (std::abs(d - (omega_z - mu)) > 1e-9 * std::abs(omega_z)) {
    throw DomainError("ion_closed_form: D must equal omega_z - mu");
  }
  const double half = std::sin(0.5 * d * t);
  const double dt = d * t;
  const double sinc = std::abs(dt) < 1e-4 ? 1.0 - dt * dt / 6.0 : std::sin(dt) / dt;
  ChiPsi out;
  out.chi = 8.0 * (g / d) * (g / d) * (nbar + 0.5) * half * half;
  out.psi = 2.0 * g * g * omega_z * t * (1.0 - sinc) / (mu * mu - omega_z * omega_z);
  return out;
}

ShortTimeAnchors short_time_anchors(const OhmicFamilySpectrum& spec) {
  spec.validate();
  if (spec.alpha == 0.0) return {};
  const double la = std::log(spec.alpha);
  ShortTimeAnchors a;
  a.chi0 = spec.omega_c * std::exp(0.5 * (la + std::lgamma(spec.s + 1.0)));
  a.psi0 = -spec.omega_c * std::exp((la + std::lgamma(spec.s + 2.0) - std::log(6.0)) / 3.0);
  return a;
}

DephasingTrajectory make_trajectory(std::span<const double> times, const ControlProtocol& protocol,
                                    double b, const ChiPsiEvaluator& eval, std::string provenance) {
  DephasingTrajectory tr;
  tr.provenance = std::move(provenance);
  tr.times.assign(times.begin(), times.end());
  tr.phi.reserve(times.size());
  tr.chi.reserve(times.size());
  tr.psi.reserve(times.size());
  for (double t : times) {
    const ChiPsi cp = eval(t);
    tr.phi.push_back(b * y0_integral(protocol, t));
    tr.chi.push_back(cp.chi);
    tr.psi.push_back(cp.psi);
  }
  return tr;
}

}  // namespace ramsey
