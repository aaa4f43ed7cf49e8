#pragma once

#include <Eigen/Dense>

namespace ramsey {

/// Wigner small-d matrix d_{M'M}(beta) = <J,M'| exp(-i beta Jy) |J,M> for J = two_j / 2.
/// Rows and columns are indexed by M + J = 0..two_j. Built column by column with the
/// three-term recurrence in M', started from closed-form edge values held in log-magnitude
/// form so that nothing overflows for large J.
Eigen::MatrixXd wigner_small_d(int two_j, double beta);

/// Applies exp(-i beta Jx) to Dicke-basis amplitudes (index M + J).
Eigen::VectorXcd rotate_about_x(const Eigen::VectorXcd& amplitudes, double beta);

/// <J,M|+>^N = 2^{-N/2} sqrt(C(N, M + N/2)), the coherent state along +x.
Eigen::VectorXcd css_amplitudes(int n_qubits);

/// Amplitudes <J,M|vartheta,gamma> of the spin coherent state
/// exp[-i vartheta (Jx sin gamma - Jy cos gamma)] |J,-J>.
Eigen::VectorXcd spin_coherent_amplitudes(int n_qubits, double vartheta, double gamma);

/// log of the binomial coefficient C(n, k).
double log_binomial(int n, int k);

}  // namespace ramsey
