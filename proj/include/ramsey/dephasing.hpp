#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ramsey/control_filters.hpp"
#include "ramsey/noise_models.hpp"

namespace ramsey {

/// Collective decay parameter chi(t) and bath-induced phase parameter Psi(t).
struct ChiPsi {
  double chi = 0.0;
  double psi = 0.0;
  double chi_error = 0.0;  // quadrature error estimates, zero for closed forms
  double psi_error = 0.0;
};

/// chi = (1/2pi) int_0^inf F+ S+ dw, Psi = (1/2pi) int_0^inf Im(F-) S- dw.
/// Lines are integrated analytically, the continuous part by panel-adaptive quadrature
/// with panel edges at multiples of pi/t. Throws QuadratureError on non-convergence.
ChiPsi chi_psi(const NoiseSpectrum& spectrum, const ControlProtocol& protocol, double t,
               double rel_tol = 1e-9);

/// Independent time-domain route through the correlation function:
///   chi = int_0^t int_0^t y(s1) y(s2) Re C(s1 - s2),
///   Psi = int_0^t ds int_0^s du y(s) y(u) Im C(s - u).
/// Both are reduced to one lag integral weighted by the modulation autocorrelation.
ChiPsi chi_psi_time_domain_oracle(const NoiseSpectrum& spectrum, const ControlProtocol& protocol,
                                  double t, double rel_tol = 1e-9);

/// Rotating-wave closed forms for a thermal COM mode under the ion drive:
///   chi = 8 (g/D)^2 (nbar + 1/2) sin^2(Dt/2),  Psi = 2 g^2 wz t (1 - sinc Dt) / (mu^2 - wz^2).
ChiPsi ion_closed_form(double g, double omega_z, double nbar, double mu, double d, double t);

struct ShortTimeAnchors {
  double chi0 = 0.0;  // chi(t) ~ (chi0 t)^2
  double psi0 = 0.0;  // Psi(t) ~ (psi0 t)^3
};

/// chi0 = wc sqrt(alpha Gamma(s+1)), psi0 = -wc (alpha Gamma(s+2) / 6)^(1/3).
ShortTimeAnchors short_time_anchors(const OhmicFamilySpectrum& spec);

/// Sampled phi(t) = b int_0^t y0, chi(t), Psi(t) on caller-supplied times.
struct DephasingTrajectory {
  std::vector<double> times;
  std::vector<double> phi;
  std::vector<double> chi;
  std::vector<double> psi;
  std::string provenance;  // evaluation path used for chi and Psi
};

using ChiPsiEvaluator = std::function<ChiPsi(double)>;

DephasingTrajectory make_trajectory(std::span<const double> times, const ControlProtocol& protocol,
                                    double b, const ChiPsiEvaluator& eval, std::string provenance);

}  // namespace ramsey
