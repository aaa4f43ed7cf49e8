#include "ramsey/dicke.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ramsey/errors.hpp"
#include "ramsey/optimize.hpp"
#include "ramsey/wigner.hpp"

namespace ramsey {

namespace {

using cd = std::complex<double>;

double ladder(double j, double m) {
  const double v = j * (j + 1.0) - m * (m + 1.0);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

void check_size(int n, int max_qubits) {
  if (n > max_qubits) {
    throw SizeLimitError("dicke: N = " + std::to_string(n) + " exceeds the limit of " +
                         std::to_string(max_qubits) + " qubits");
  }
}

}  // namespace

void EnsembleSpec::validate() const {
  if (n_qubits < 1) throw DomainError("ensemble: N must be >= 1");
  if (const auto* t = std::get_if<TwistedSpinState>(&initial_state)) {
    if (n_qubits < 2) throw DomainError("ensemble: a twisted state needs N >= 2");
    if (!std::isfinite(t->theta) || !std::isfinite(t->beta)) {
      throw DomainError("ensemble: twisting angles must be finite");
    }
  }
}

DickeState::DickeState(int n_qubits, Eigen::MatrixXcd rho) : n_(n_qubits), rho_(std::move(rho)) {
  if (n_ < 1) throw DomainError("DickeState: N must be >= 1");
  if (rho_.rows() != n_ + 1 || rho_.cols() != n_ + 1) {
    throw DomainError("DickeState: rho must be (N+1)x(N+1)");
  }
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12 * std::max(1.0, rho_.cwiseAbs().maxCoeff())) {
    throw DomainError("DickeState: rho is not Hermitian");
  }
  const cd tr = rho_.trace();
  if (std::abs(tr - 1.0) > 1e-10) throw DomainError("DickeState: trace must be 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10 * tr.real()) {
    throw DomainError("DickeState: rho is not positive semidefinite");
  }
}

DickeState DickeState::pure(const Eigen::VectorXcd& amplitudes) {
  const auto n = static_cast<int>(amplitudes.size()) - 1;
  if (n < 1) throw DomainError("DickeState: need at least two amplitudes");
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("DickeState: zero state vector");
  const Eigen::VectorXcd a = amplitudes / norm;
  return DickeState(Trusted{}, n, a * a.adjoint());
}

Eigen::VectorXcd prepare_amplitudes(const EnsembleSpec& spec, int max_qubits) {
  spec.validate();
  check_size(spec.n_qubits, max_qubits);
  Eigen::VectorXcd a = css_amplitudes(spec.n_qubits);
  if (const auto* t = std::get_if<TwistedSpinState>(&spec.initial_state)) {
    const double j = 0.5 * spec.n_qubits;
    for (int k = 0; k <= spec.n_qubits; ++k) {
      const double m = k - j;
      a(k) *= std::polar(1.0, -0.5 * t->theta * m * m);
    }
    if (t->beta != 0.0) a = rotate_about_x(a, t->beta);
  }
  return a / a.norm();
}

DickeState dicke_prepare(const EnsembleSpec& spec, int max_qubits) {
  return DickeState::pure(prepare_amplitudes(spec, max_qubits));
}

DickeState dicke_evolve(const DickeState& state, double phi, double chi, double psi) {
  const int n = state.n_qubits();
  const double j = state.j();
  Eigen::MatrixXcd out = state.rho();
  for (int c = 0; c <= n; ++c) {
    const double m2 = c - j;
    for (int r = 0; r <= n; ++r) {
      if (r == c) continue;
      const double m1 = r - j;
      const double dm = m1 - m2;
      const double arg = -phi * dm - psi * (m1 * m1 - m2 * m2);
      out(r, c) *= std::polar(std::exp(-0.5 * chi * dm * dm), arg);
    }
  }
  return DickeState(DickeState::Trusted{}, n, std::move(out));
}

DickeBands DickeBands::from_state(const DickeState& state) {
  const int n = state.n_qubits();
  const auto& rho = state.rho();
  DickeBands b;
  b.n_qubits = n;
  b.populations = rho.diagonal().real();
  b.first = rho.diagonal(1);
  b.second = n >= 2 ? Eigen::VectorXcd(rho.diagonal(2)) : Eigen::VectorXcd();
  return b;
}

DickeBands DickeBands::from_amplitudes(const Eigen::VectorXcd& amplitudes) {
  const int n = static_cast<int>(amplitudes.size()) - 1;
  if (n < 1) throw DomainError("DickeBands: need at least two amplitudes");
  const Eigen::VectorXcd a = amplitudes / amplitudes.norm();
  DickeBands b;
  b.n_qubits = n;
  b.populations = a.cwiseAbs2();
  b.first.resize(n);
  for (int k = 0; k < n; ++k) b.first(k) = a(k) * std::conj(a(k + 1));
  b.second.resize(std::max(n - 1, 0));
  for (int k = 0; k + 1 < n; ++k) b.second(k) = a(k) * std::conj(a(k + 2));
  return b;
}

SpinMoments evolved_moments(const DickeBands& bands, double phi, double chi, double psi) {
  const int n = bands.n_qubits;
  const double j = 0.5 * n;
  SpinMoments s;
  double jz2 = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double m = k - j;
    s.jz += m * bands.populations(k);
    jz2 += m * m * bands.populations(k);
  }
  s.jz2 = jz2;

  // Band 1: M1 - M2 = -1, M1^2 - M2^2 = -(2M + 1).
  cd jp = 0.0;
  cd anti_pz = 0.0;  // <{J+, Jz}>
  const double decay1 = std::exp(-0.5 * chi);
  for (int k = 0; k < n; ++k) {
    const double m = k - j;
    const cd rho = bands.first(k) * std::polar(decay1, phi + psi * (2.0 * m + 1.0));
    const double cp = ladder(j, m);
    jp += cp * rho;
    anti_pz += cp * (2.0 * m + 1.0) * rho;
  }
  // Band 2: M1 - M2 = -2, M1^2 - M2^2 = -4(M + 1).
  cd jp2 = 0.0;
  const double decay2 = std::exp(-2.0 * chi);
  for (int k = 0; k + 1 < n; ++k) {
    const double m = k - j;
    const cd rho = bands.second(k) * std::polar(decay2, 2.0 * phi + 4.0 * psi * (m + 1.0));
    jp2 += ladder(j, m) * ladder(j, m + 1.0) * rho;
  }

  const double transverse = 0.5 * (j * (j + 1.0) - jz2);  // <J+J- + J-J+> / 4
  s.jx = jp.real();
  s.jy = jp.imag();
  s.jx2 = 0.5 * jp2.real() + transverse;
  s.jy2 = -0.5 * jp2.real() + transverse;
  s.jxy = jp2.imag();
  s.jyz = anti_pz.imag();
  return s;
}

SpinMoments spin_moments(const DickeState& state) {
  return evolved_moments(DickeBands::from_state(state), 0.0, 0.0, 0.0);
}

JyMoments dicke_moments(const DickeState& state) {
  const SpinMoments s = spin_moments(state);
  return {s.jy, s.jy2};
}

double dicke_djy_db(const DickeState& state0, double phi, double chi, double psi, double y0_integral) {
  // d rho_{M1M2}/d phi = -i (M1 - M2) rho_{M1M2}(t); only the first band enters Tr[Jy .].
  const int n = state0.n_qubits();
  const double j = state0.j();
  const auto& rho0 = state0.rho();
  cd acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double m1 = k - j;
    const double m2 = m1 + 1.0;
    const double dm = m1 - m2;
    const cd rho_t = rho0(k, k + 1) *
                     std::polar(std::exp(-0.5 * chi * dm * dm), -phi * dm - psi * (m1 * m1 - m2 * m2));
    acc += ladder(j, m1) * cd(0.0, -dm) * rho_t;
  }
  return y0_integral * acc.imag();
}

Eigen::MatrixXd q_function(const DickeState& state, std::span<const double> theta_grid,
                           std::span<const double> gamma_grid) {
  const int n = state.n_qubits();
  const auto& rho = state.rho();
  Eigen::MatrixXd q(theta_grid.size(), gamma_grid.size());
  for (std::size_t a = 0; a < theta_grid.size(); ++a) {
    const double vt = theta_grid[a];
    if (!(vt >= 0.0 && vt <= std::numbers::pi)) throw DomainError("q_function: vartheta outside [0, pi]");
    // Real magnitudes r_M; the gamma dependence e^{-iM gamma} is summed per diagonal.
    const Eigen::VectorXd r = spin_coherent_amplitudes(n, vt, 0.0).real();
    const double rmax = r.cwiseAbs().maxCoeff();
    int lo = 0, hi = n;
    while (lo < n && std::abs(r(lo)) < 1e-17 * rmax) ++lo;
    while (hi > 0 && std::abs(r(hi)) < 1e-17 * rmax) --hi;
    // c_k = sum_M r_{M+k} r_M rho_{M+k,M}
    std::vector<cd> ck(hi - lo + 1, 0.0);
    for (int k = 0; k <= hi - lo; ++k) {
      cd acc = 0.0;
      for (int mi = lo; mi + k <= hi; ++mi) acc += r(mi + k) * r(mi) * rho(mi + k, mi);
      ck[k] = acc;
    }
    for (std::size_t b = 0; b < gamma_grid.size(); ++b) {
      const double g = gamma_grid[b];
      double v = ck[0].real();
      for (std::size_t k = 1; k < ck.size(); ++k) v += 2.0 * (std::polar(1.0, k * g) * ck[k]).real();
      q(a, b) = v;
    }
  }
  return q;
}

namespace {

struct TwistedMinimum {
  double variance;
  double beta;
};

// Minimum over beta of Var(Jy) for exp(-i beta Jx) applied to the twisted state.
TwistedMinimum minimize_over_beta(int n, double theta) {
  EnsembleSpec spec{n, TwistedSpinState{theta, 0.0}};
  const SpinMoments s = evolved_moments(DickeBands::from_amplitudes(prepare_amplitudes(spec)), 0, 0, 0);
  const double vyy = s.jy2 - s.jy * s.jy;
  const double vzz = s.jz2 - s.jz * s.jz;
  const double cyz = 0.5 * s.jyz - s.jy * s.jz;
  // Jy -> Jy cos(beta) - Jz sin(beta) under the rotation.
  const double half_diff = 0.5 * (vyy - vzz);
  const double radius = std::hypot(half_diff, cyz);
  double beta = 0.5 * std::atan2(cyz, -half_diff);
  if (beta < 0.0) beta += std::numbers::pi;
  return {0.5 * (vyy + vzz) - radius, beta};
}

}  // namespace

double twisted_state_variance(int n_qubits, double theta, double beta) {
  const EnsembleSpec spec{n_qubits, TwistedSpinState{theta, beta}};
  const SpinMoments s = evolved_moments(DickeBands::from_amplitudes(prepare_amplitudes(spec)), 0, 0, 0);
  return s.jy2 - s.jy * s.jy;
}

SqueezingAngles optimal_squeezing_angles(int n_qubits) {
  if (n_qubits < 2) throw DomainError("optimal_squeezing_angles: N must be >= 2");
  check_size(n_qubits, kDefaultMaxQubits);
  // Log-spaced scan of theta on (0, pi]: the optimum sits near N^{-2/3}.
  constexpr int kScan = 2000;
  const double lo = std::log(1e-5), hi = std::log(std::numbers::pi);
  std::vector<double> u(kScan), f(kScan);
  for (int i = 0; i < kScan; ++i) {
    u[i] = lo + (hi - lo) * i / (kScan - 1);
    f[i] = minimize_over_beta(n_qubits, std::exp(u[i])).variance;
  }
  const auto best = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  const double a = u[std::max(best - 1, 0)];
  const double b = u[std::min(best + 1, kScan - 1)];
  const Minimum m = golden_section(
      [&](double x) { return minimize_over_beta(n_qubits, std::exp(x)).variance; }, a, b, 0.0, 1e-10);
  double theta = std::exp(m.x);
  TwistedMinimum tm = minimize_over_beta(n_qubits, theta);
  if (f[best] < tm.variance) {
    theta = std::exp(u[best]);
    tm = minimize_over_beta(n_qubits, theta);
  }
  return {theta, tm.beta, tm.variance};
}

}  // namespace ramsey
