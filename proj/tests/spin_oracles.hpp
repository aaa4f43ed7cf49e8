#pragma once

// Dense-matrix spin operators for test oracles (small N only).

#include <Eigen/Dense>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cd = std::complex<double>;

struct SpinOps {
  Eigen::MatrixXcd jx, jy, jz;
};

inline SpinOps spin_ops(int n) {
  const double j = 0.5 * n;
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k < n; ++k) {
    const double m = k - j;
    jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  SpinOps ops;
  ops.jx = 0.5 * (jp + jp.adjoint());
  ops.jy = (jp - jp.adjoint()) / cd(0.0, 2.0);
  ops.jz = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) ops.jz(k, k) = k - j;
  return ops;
}

inline Eigen::MatrixXcd expm_i(const Eigen::MatrixXcd& generator, double angle) {
  const Eigen::MatrixXcd a = cd(0.0, -angle) * generator;
  return a.exp();
}

}  // namespace oracle
