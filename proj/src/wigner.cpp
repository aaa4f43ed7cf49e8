#include "ramsey/wigner.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "ramsey/errors.hpp"

namespace ramsey {

namespace {

using cd = std::complex<double>;

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

// i^k for integer k
cd i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double ladder(double j, double m) {
  // sqrt(J(J+1) - m(m+1)), the J+ matrix element out of |m>
  const double v = j * (j + 1.0) - m * (m + 1.0);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

void check_two_j(int two_j) {
  if (two_j < 0) throw DomainError("wigner: 2J must be >= 0");
}

}  // namespace

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Eigen::MatrixXd wigner_small_d(int two_j, double beta) {
  check_two_j(two_j);
  if (!std::isfinite(beta)) throw DomainError("wigner: beta must be finite");
  const int n = two_j;
  const double j = 0.5 * n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);

  // d is 4pi-periodic for half-integer J; reduce to (-2pi, 2pi] keeping the sign structure.
  double b = std::remainder(beta, 4.0 * std::numbers::pi);
  const double ch = std::cos(0.5 * b);
  const double sh = std::sin(0.5 * b);
  if (sh == 0.0) {
    const double sign = ch > 0.0 ? 1.0 : ((n % 2 == 0) ? 1.0 : -1.0);
    d.setIdentity();
    return sign * d;
  }
  if (ch == 0.0) {
    // beta = +-pi: d_{M'M} = sign(sh)^{2J} (-1)^{J-M} delta_{M',-M}
    for (int c = 0; c <= n; ++c) {
      double v = ((n - c) % 2 == 0) ? 1.0 : -1.0;
      if (sh < 0.0 && n % 2 == 1) v = -v;
      d(n - c, c) = v;
    }
    return d;
  }

  const double s = std::sin(b);
  const double co = std::cos(b);
  const double lch = std::log(std::abs(ch));
  const double lsh = std::log(std::abs(sh));

  for (int c = 0; c <= n; ++c) {
    const double m = c - j;
    const double lbin = 0.5 * log_binomial(n, c);
    int mid = static_cast<int>(std::lround(m * co + j));
    mid = std::clamp(mid, 0, n);

    // From the top edge M' = J downward.
    {
      const int p = n - c;  // power of (-sin(b/2))
      double sign = (p % 2 == 0) ? 1.0 : -1.0;
      if (sh < 0.0 && p % 2 == 1) sign = -sign;
      if (ch < 0.0 && c % 2 == 1) sign = -sign;
      double log_scale = lbin + c * lch + p * lsh;
      double u_next = 0.0;  // row r + 1
      double u = sign;      // row r
      d(n, c) = u * std::exp(log_scale);
      for (int r = n; r > mid; --r) {
        const double mp = r - j;
        const double u_prev = (2.0 * (m - mp * co) / s * u - ladder(j, mp) * u_next) / ladder(j, mp - 1.0);
        u_next = u;
        u = u_prev;
        if (std::abs(u) > kRescale) {
          u /= kRescale;
          u_next /= kRescale;
          log_scale += kLogRescale;
        }
        d(r - 1, c) = u * std::exp(log_scale);
      }
    }
    // From the bottom edge M' = -J upward.
    if (mid > 0) {
      double sign = 1.0;
      if (sh < 0.0 && c % 2 == 1) sign = -sign;
      if (ch < 0.0 && (n - c) % 2 == 1) sign = -sign;
      double log_scale = lbin + (n - c) * lch + c * lsh;
      double u_prev = 0.0;  // row r - 1
      double u = sign;      // row r
      d(0, c) = u * std::exp(log_scale);
      for (int r = 0; r + 1 < mid; ++r) {
        const double mp = r - j;
        const double u_next = (2.0 * (m - mp * co) / s * u - ladder(j, mp - 1.0) * u_prev) / ladder(j, mp);
        u_prev = u;
        u = u_next;
        if (std::abs(u) > kRescale) {
          u /= kRescale;
          u_prev /= kRescale;
          log_scale += kLogRescale;
        }
        d(r + 1, c) = u * std::exp(log_scale);
      }
    }
  }
  return d;
}

Eigen::VectorXcd rotate_about_x(const Eigen::VectorXcd& amplitudes, double beta) {
  const int n = static_cast<int>(amplitudes.size()) - 1;
  check_two_j(n);
  // <M'| exp(-i beta Jx) |M> = i^{M'-M} d_{M'M}(beta)
  Eigen::VectorXcd twisted(n + 1);
  for (int r = 0; r <= n; ++r) twisted(r) = i_pow(-r) * amplitudes(r);
  const Eigen::MatrixXd d = wigner_small_d(n, beta);
  Eigen::VectorXcd out = d.cast<cd>() * twisted;
  for (int r = 0; r <= n; ++r) out(r) *= i_pow(r);
  return out;
}

Eigen::VectorXcd css_amplitudes(int n_qubits) {
  if (n_qubits < 1) throw DomainError("css_amplitudes: N must be >= 1");
  Eigen::VectorXcd a(n_qubits + 1);
  const double half_log2 = 0.5 * n_qubits * std::log(2.0);
  for (int k = 0; k <= n_qubits; ++k) a(k) = std::exp(0.5 * log_binomial(n_qubits, k) - half_log2);
  return a;
}

Eigen::VectorXcd spin_coherent_amplitudes(int n_qubits, double vartheta, double gamma) {
  if (n_qubits < 1) throw DomainError("spin_coherent_amplitudes: N must be >= 1");
  const int n = n_qubits;
  const double j = 0.5 * n;
  const double c = std::cos(0.5 * vartheta);
  const double s = std::sin(0.5 * vartheta);
  Eigen::VectorXcd a(n + 1);
  for (int k = 0; k <= n; ++k) {
    // sqrt(C(2J, J+M)) sin^{J+M}(vartheta/2) cos^{J-M}(vartheta/2) e^{-i M gamma}
    double mag;
    if ((s == 0.0 && k > 0) || (c == 0.0 && k < n)) {
      mag = 0.0;
    } else {
      const double lc = (n - k) > 0 ? (n - k) * std::log(std::abs(c)) : 0.0;
      const double ls = k > 0 ? k * std::log(std::abs(s)) : 0.0;
      mag = std::exp(0.5 * log_binomial(n, k) + lc + ls);
      if (c < 0.0 && (n - k) % 2 == 1) mag = -mag;
      if (s < 0.0 && k % 2 == 1) mag = -mag;
    }
    a(k) = std::polar(mag, -(k - j) * gamma);
  }
  return a;
}

}  // namespace ramsey
