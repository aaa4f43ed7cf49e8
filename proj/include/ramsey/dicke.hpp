#pragma once

#include <Eigen/Dense>
#include <span>
#include <variant>

namespace ramsey {

struct CoherentSpinState {};

/// exp(-i beta Jx) exp(-i theta Jz^2 / 2) applied to the coherent state along +x.
struct TwistedSpinState {
  double theta = 0.0;  // twisting angle (rad)
  double beta = 0.0;   // rotation angle about x (rad)
};

using InitialState = std::variant<CoherentSpinState, TwistedSpinState>;

struct EnsembleSpec {
  int n_qubits = 1;
  InitialState initial_state = CoherentSpinState{};

  void validate() const;
  bool is_coherent() const { return std::holds_alternative<CoherentSpinState>(initial_state); }
};

/// Density matrix of N qubits in the symmetric J = N/2 sector. Index k = M + J.
class DickeState {
 public:
  /// Validates Hermiticity, unit trace and positivity (eigenvalue floor -1e-10 * trace).
  DickeState(int n_qubits, Eigen::MatrixXcd rho);
  /// Pure state from Dicke amplitudes; normalized, no eigen-decomposition needed.
  static DickeState pure(const Eigen::VectorXcd& amplitudes);

  int n_qubits() const { return n_; }
  double j() const { return 0.5 * n_; }
  double m(int k) const { return k - 0.5 * n_; }
  const Eigen::MatrixXcd& rho() const { return rho_; }

 private:
  struct Trusted {};
  DickeState(Trusted, int n_qubits, Eigen::MatrixXcd rho) : n_(n_qubits), rho_(std::move(rho)) {}
  friend DickeState dicke_evolve(const DickeState&, double, double, double);

  int n_ = 1;
  Eigen::MatrixXcd rho_;
};

inline constexpr int kDefaultMaxQubits = 2000;

/// Initial state amplitudes in the Dicke basis.
Eigen::VectorXcd prepare_amplitudes(const EnsembleSpec& spec, int max_qubits = kDefaultMaxQubits);
DickeState dicke_prepare(const EnsembleSpec& spec, int max_qubits = kDefaultMaxQubits);

/// rho_{M1 M2} -> rho_{M1 M2} exp[-i phi (M1-M2) - i Psi (M1^2-M2^2) - (chi/2)(M1-M2)^2].
DickeState dicke_evolve(const DickeState& state, double phi, double chi, double psi);

/// Low-order collective moments read off the first three diagonals of rho.
struct SpinMoments {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
  double jx2 = 0.0;
  double jy2 = 0.0;
  double jz2 = 0.0;
  double jxy = 0.0;  // <{Jx, Jy}>
  double jyz = 0.0;  // <{Jy, Jz}>
};

SpinMoments spin_moments(const DickeState& state);

/// Diagonals 0, 1 and 2 of an initial density matrix: all that the collective moments up to
/// second order need, so evolving and measuring costs O(N) per time.
struct DickeBands {
  int n_qubits = 1;
  Eigen::VectorXd populations;  // rho_{M,M}
  Eigen::VectorXcd first;       // rho_{M,M+1}
  Eigen::VectorXcd second;      // rho_{M,M+2}

  static DickeBands from_state(const DickeState& state);
  static DickeBands from_amplitudes(const Eigen::VectorXcd& amplitudes);
};

/// Moments of the evolved state dicke_evolve(rho, phi, chi, psi), computed from the bands.
SpinMoments evolved_moments(const DickeBands& bands, double phi, double chi, double psi);

/// <Jy> and <Jy^2>.
struct JyMoments {
  double jy = 0.0;
  double jy2 = 0.0;
};
JyMoments dicke_moments(const DickeState& state);

/// d<Jy>/db = [int y0] Tr[Jy d rho/d phi] for the state evolved from state0.
double dicke_djy_db(const DickeState& state0, double phi, double chi, double psi, double y0_integral);

/// Husimi Q(vartheta, gamma) = <vartheta,gamma| rho |vartheta,gamma> on a grid; rows follow
/// theta_grid, columns gamma_grid.
Eigen::MatrixXd q_function(const DickeState& state, std::span<const double> theta_grid,
                           std::span<const double> gamma_grid);

struct SqueezingAngles {
  double theta = 0.0;
  double beta = 0.0;
  double variance = 0.0;  // initial Var(Jy) at these angles
};

/// Twisting and rotation angles minimizing the initial Var(Jy) of the twisted state.
/// theta is scanned on (0, pi] and refined; beta is optimal in closed form for each theta.
SqueezingAngles optimal_squeezing_angles(int n_qubits);

/// Initial Var(Jy) of the twisted state at the given angles, from exact Dicke amplitudes.
double twisted_state_variance(int n_qubits, double theta, double beta);

}  // namespace ramsey
