#include "ramsey/estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ramsey/errors.hpp"
#include "ramsey/optimize.hpp"

namespace ramsey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogFloor = std::log(1e-300);

void check_n(int n, int min_n, const char* where) {
  if (n < min_n) throw DomainError(std::string(where) + ": N too small");
}

// x^p for integer p >= 0 via logs, so that large N neither overflows nor loses the sign.
double signed_power(double x, int p) {
  if (p == 0) return 1.0;
  if (x == 0.0) return 0.0;
  const double mag = std::exp(p * std::log(std::abs(x)));
  return (x < 0.0 && p % 2 == 1) ? -mag : mag;
}

void check_nu(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("uncertainty: nu must be > 0");
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::css_closed_form: return "css_closed_form";
    case Backend::oats_cumulant: return "oats_cumulant";
    case Backend::dicke_exact: return "dicke_exact";
  }
  return "unknown";
}

MomentSet PhaseFamily::at(double phi, double dphi_db) const {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  MomentSet m;
  m.backend = backend;
  m.jy = c * jy + s * jx;
  m.jy2 = c * c * jyy + s * s * jxx + s * c * jxy;
  m.djy_db = (c * jx - s * jy) * dphi_db;
  return m;
}

PhaseFamily css_phase_family(int n_qubits, double chi, double psi) {
  check_n(n_qubits, 1, "css");
  const double n = n_qubits;
  PhaseFamily f;
  f.backend = Backend::css_closed_form;
  f.jx = 0.5 * n * std::exp(-0.5 * chi) * signed_power(std::cos(psi), n_qubits - 1);
  const double a = n * (n + 1.0) / 8.0;
  const double b = n_qubits == 1 ? 0.0
                                 : n * (n - 1.0) / 8.0 * std::exp(-2.0 * chi) *
                                       signed_power(std::cos(2.0 * psi), n_qubits - 2);
  // <Jy^2>(phi) = A - B cos(2 phi)
  f.jyy = a - b;
  f.jxx = a + b;
  return f;
}

MomentSet css_moments(int n_qubits, double phi, double chi, double psi, double dphi_db) {
  return css_phase_family(n_qubits, chi, psi).at(phi, dphi_db);
}

PhaseFamily oats_phase_family(int n_qubits, double theta, double beta, double chi, double psi) {
  check_n(n_qubits, 3, "oats_cumulant");
  const double n = n_qubits;
  const double ch = std::cos(0.5 * theta), sh = std::sin(0.5 * theta);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double cb2 = std::cos(0.5 * beta), sb2 = std::sin(0.5 * beta);
  const double s2b = std::sin(2.0 * beta);
  auto cpow = [](double x, int p) { return std::pow(x, p); };

  // Single-qubit-removed auxiliaries (<psi~^2>, Re<Jz psi~>).
  const double p1 = (n - 1.0) * psi * psi *
                    (1.0 + (n - 2.0) * (0.5 * sb * sb * (1.0 - cpow(std::cos(theta), n_qubits - 3)) +
                                        s2b * sh * cpow(ch, n_qubits - 3)));
  const double r1 = (n - 1.0) * 0.5 * psi * (cb + (n - 2.0) * sb * sh * cpow(ch, n_qubits - 3));
  const double k =
      0.5 * n * std::exp(-0.5 * chi) * std::exp(-0.5 * p1) *
      (std::exp(-theta * theta * (n - 1.0) / 8.0) *
           (cb2 * cb2 * std::exp(-theta * r1) + sb2 * sb2 * std::exp(theta * r1)) +
       sb * std::sin((n - 1.0) * 0.5 * theta * sb * cpow(ch, n_qubits - 2) * psi));

  // Pair-removed auxiliaries.
  const double z1 = 0.5 * (n - 2.0) * psi * (cb + (n - 3.0) * sb * sh * cpow(ch, n_qubits - 4));
  const double z2 = -0.5 * (n - 2.0) * psi * sb * cpow(ch, n_qubits - 3);
  const double p2 = (n - 2.0) * psi * psi *
                    (1.0 + (n - 3.0) * (0.5 * sb * sb * (1.0 - cpow(std::cos(theta), n_qubits - 4)) +
                                        s2b * sh * cpow(ch, n_qubits - 4)));
  const double g8 = std::exp(-(n - 2.0) * theta * theta / 8.0);
  const double g2 = std::exp(-(n - 2.0) * theta * theta / 2.0);
  const double ups1 = (1.0 + cb * cb) / 8.0 - 0.25 * g8 * s2b * sh + g2 * sb * sb / 8.0;
  const double cb4 = std::pow(cb2, 4), sb4 = std::pow(sb2, 4);
  const double ups2 =
      (0.25 * sb * sb + 0.25 * (cb4 * std::exp(-4.0 * theta * z1) + sb4 * std::exp(4.0 * theta * z1)) * g2 -
       0.5 * cb2 * cb2 * sb2 * sb2 * std::cos(4.0 * theta * z2) +
       0.5 * sb *
           (cb2 * cb2 * std::sin(0.5 * theta * (1.0 - 4.0 * z2)) * std::exp(-2.0 * theta * z1) -
            sb2 * sb2 * std::sin(0.5 * theta * (1.0 + 4.0 * z2)) * std::exp(2.0 * theta * z1)) *
           g8) *
      std::exp(-2.0 * p2);

  PhaseFamily f;
  f.backend = Backend::oats_cumulant;
  f.jx = k;
  const double a = 0.25 * n + 0.5 * n * (n - 1.0) * ups1;
  const double b = 0.5 * n * (n - 1.0) * std::exp(-2.0 * chi) * ups2;
  f.jyy = a - b;
  f.jxx = a + b;
  return f;
}

MomentSet oats_moments_cumulant(int n_qubits, double theta, double beta, double phi, double chi,
                                double psi, double dphi_db) {
  return oats_phase_family(n_qubits, theta, beta, chi, psi).at(phi, dphi_db);
}

PhaseFamily dicke_phase_family(const DickeBands& bands, double chi, double psi) {
  const SpinMoments s = evolved_moments(bands, 0.0, chi, psi);
  PhaseFamily f;
  f.backend = Backend::dicke_exact;
  f.jx = s.jx;
  f.jy = s.jy;
  f.jyy = s.jy2;
  f.jxx = s.jx2;
  f.jxy = s.jxy;
  return f;
}

Uncertainty css_uncertainty(int n_qubits, double chi, double psi, double y0_integral, double nu) {
  check_n(n_qubits, 1, "css_uncertainty");
  check_nu(nu);
  if (y0_integral == 0.0 || !std::isfinite(y0_integral)) {
    throw DegenerateProtocolError("css_uncertainty: int y0 vanishes, phase carries no signal");
  }
  const double n = n_qubits;
  const double c = std::cos(psi);
  const double log_signal = (2.0 * n - 2.0) * std::log(std::abs(c));  // log cos^{2N-2} Psi
  if (c == 0.0 || log_signal < kLogFloor) return {kInf, true, 0.0};
  const double c2 = n_qubits == 1 ? 0.0 : signed_power(std::cos(2.0 * psi), n_qubits - 2);
  const double numerator = (n + 1.0) * std::exp(chi) - (n - 1.0) * std::exp(-chi) * c2;
  const double log_var = std::log(numerator) - std::log(2.0 * n * nu * y0_integral * y0_integral) - log_signal;
  return {std::exp(0.5 * log_var), false, 0.0};
}

Uncertainty uncertainty_from_moments(const MomentSet& m, double nu) {
  check_nu(nu);
  const double var = std::max(m.variance(), 0.0);
  const double slope2 = m.djy_db * m.djy_db;
  if (!(slope2 > 0.0) || slope2 < 1e-300 * std::max(var, 1e-300)) return {kInf, true, 0.0};
  return {std::sqrt(var / (nu * slope2)), false, 0.0};
}

Uncertainty optimize_phase(const PhaseFamily& family, double y0_integral, double nu) {
  check_nu(nu);
  if (y0_integral == 0.0 || !std::isfinite(y0_integral)) {
    throw DegenerateProtocolError("optimize_phase: int y0 vanishes, phase carries no signal");
  }
  // Delta b^2 up to constant factors; pi-periodic in phi.
  auto objective = [&](double phi) {
    const MomentSet m = family.at(phi, 1.0);
    const double slope2 = m.djy_db * m.djy_db;
    if (!(slope2 > 0.0)) return kInf;
    return std::max(m.variance(), 0.0) / slope2;
  };
  constexpr int kSweep = 181;
  const double pi = std::numbers::pi;
  int best = 0;
  double best_f = kInf;
  for (int i = 0; i < kSweep; ++i) {
    const double phi = -0.5 * pi + pi * i / (kSweep - 1);
    const double f = objective(phi);
    if (f < best_f) {
      best_f = f;
      best = i;
    }
  }
  if (!std::isfinite(best_f)) return {kInf, true, 0.0};
  const double step = pi / (kSweep - 1);
  const double centre = -0.5 * pi + step * best;
  const Minimum m = golden_section(objective, centre - step, centre + step, 0.0, 1e-12);
  double phi = m.x;
  if (best_f < m.f) phi = centre;
  const Uncertainty u = uncertainty_from_moments(family.at(phi, y0_integral), nu);
  return {u.value, u.effectively_infinite, phi};
}

}  // namespace ramsey
