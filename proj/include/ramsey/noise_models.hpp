#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ramsey {

/// Bosonic bath with spectral density I(W) = alpha * wc^(1-s) * W^s * exp(-W/wc).
struct OhmicFamilySpectrum {
  double alpha = 1.0;
  double s = 1.0;
  double omega_c = 1.0;  // rad/s

  void validate() const;
  /// I(W) for W >= 0; zero for W < 0.
  double density(double big_omega) const;
  /// Closed form of the integral of I over [0, inf): alpha * wc^2 * Gamma(s+1).
  double total_weight() const;
};

/// Single thermal bosonic mode B(t) = 2g (a^dag e^{i wz t} + h.c.).
struct ThermalModeSpectrum {
  double g = 0.0;           // rad/s
  double omega_mode = 1.0;  // rad/s
  double nbar = 0.0;

  void validate() const;
};

/// Contributes 2*pi*weight*delta(w - omega) to S(w), i.e. weight*exp(i omega tau) to C(tau).
struct SpectralLine {
  double omega = 0.0;
  double weight = 0.0;
};

struct ContinuousDensity {
  std::function<double(double)> s;  // S(w), must be >= 0; evaluated only inside [lower, upper]
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double scale = 1.0;       // typical width of features in S
  double tail_start = 0.0;  // |w| past which S decays monotonically
};

/// Noise spectrum S(w) = int dt e^{-i w t} C(t): an optional continuous part plus
/// discrete lines. Immutable after construction.
class NoiseSpectrum {
 public:
  NoiseSpectrum() = default;
  NoiseSpectrum(std::optional<ContinuousDensity> continuous, std::vector<SpectralLine> lines,
                std::string label);

  /// Continuous part of S(w); zero outside the support.
  double density(double omega) const;
  /// Classical spectrum S+(w) = S(w) + S(-w), continuous part.
  double s_plus(double omega) const { return density(omega) + density(-omega); }
  /// Quantum spectrum S-(w) = S(w) - S(-w), continuous part.
  double s_minus(double omega) const { return density(omega) - density(-omega); }

  const std::optional<ContinuousDensity>& continuous() const { return continuous_; }
  const std::vector<SpectralLine>& lines() const { return lines_; }
  const std::string& label() const { return label_; }

  /// Largest |w| in the continuous support (may be infinite), 0 without a continuous part.
  double positive_extent() const;
  bool is_zero() const;

 private:
  std::optional<ContinuousDensity> continuous_;
  std::vector<SpectralLine> lines_;
  std::string label_ = "zero";
};

/// Vacuum bath: all weight at negative frequency, S+(w) = 2 pi I(w), S-(w) = -2 pi I(w) for w > 0.
NoiseSpectrum ohmic_to_spectrum(const OhmicFamilySpectrum& spec);

/// Two lines at +-wz with weights 4g^2 nbar and 4g^2 (nbar + 1).
NoiseSpectrum thermal_to_spectrum(const ThermalModeSpectrum& spec);

/// Linear interpolation of S(w) samples, zero outside the sampled range.
NoiseSpectrum tabulated_spectrum(std::vector<double> omega, std::vector<double> s,
                                 std::string label = "tabulated");

/// Reads a two-column CSV (omega, S). Lines starting with '#' and a non-numeric
/// header row are skipped.
NoiseSpectrum load_tabulated_spectrum(const std::filesystem::path& path);

/// C(tau) = (1/2pi) int dw e^{i w tau} S(w) + sum_j w_j e^{i w_j tau}.
std::complex<double> correlation_function(const NoiseSpectrum& spectrum, double tau,
                                          double rel_tol = 1e-11);

}  // namespace ramsey
