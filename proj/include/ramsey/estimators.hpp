#pragma once

#include <string_view>

#include "ramsey/dicke.hpp"

namespace ramsey {

enum class Backend { css_closed_form, oats_cumulant, dicke_exact };

std::string_view to_string(Backend backend);

struct MomentSet {
  double jy = 0.0;
  double jy2 = 0.0;
  double djy_db = 0.0;
  Backend backend = Backend::css_closed_form;

  double variance() const { return jy2 - jy * jy; }
};

/// Coherent-state moments. djy_db is the phi-derivative of <Jy> times dphi_db = int y0.
MomentSet css_moments(int n_qubits, double phi, double chi, double psi, double dphi_db = 1.0);

/// Twisted-state moments from the second-order cumulant expansion (N >= 3).
MomentSet oats_moments_cumulant(int n_qubits, double theta, double beta, double phi, double chi,
                                double psi, double dphi_db = 1.0);

/// The phase phi enters every backend as a rotation exp(-i phi Jz), so the five moments
///   <Jx>, <Jy>, <Jy^2>, <Jx^2>, <{Jx, Jy}>
/// at phi = 0 give <Jy>, <Jy^2> and d<Jy>/dphi for any phi.
struct PhaseFamily {
  double jx = 0.0;
  double jy = 0.0;
  double jyy = 0.0;
  double jxx = 0.0;
  double jxy = 0.0;
  Backend backend = Backend::css_closed_form;

  MomentSet at(double phi, double dphi_db) const;
};

PhaseFamily css_phase_family(int n_qubits, double chi, double psi);
PhaseFamily oats_phase_family(int n_qubits, double theta, double beta, double chi, double psi);
PhaseFamily dicke_phase_family(const DickeBands& bands, double chi, double psi);

struct Uncertainty {
  double value = 0.0;                 // Delta b; +inf when effectively infinite
  bool effectively_infinite = false;  // signal lost below the 1e-300 floor
  double phi = 0.0;                   // phase at which the value was evaluated
};

/// Closed-form coherent-state uncertainty at its optimal phase phi = k pi:
///   Delta b^2 = [(N+1) e^chi - (N-1) e^-chi cos^{N-2}(2 Psi)] / [2 N nu (int y0)^2 cos^{2N-2} Psi],
/// evaluated in log space. Throws DegenerateProtocolError when int y0 = 0.
Uncertainty css_uncertainty(int n_qubits, double chi, double psi, double y0_integral, double nu);

/// Delta b = sqrt(Var Jy / nu) / |d<Jy>/db| for one moment set.
Uncertainty uncertainty_from_moments(const MomentSet& moments, double nu);

/// Minimizes Delta b over phi: 181-point sweep over one period, then golden-section refinement.
Uncertainty optimize_phase(const PhaseFamily& family, double y0_integral, double nu);

}  // namespace ramsey
