#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ramsey/control_filters.hpp"
#include "ramsey/dephasing.hpp"
#include "ramsey/dicke.hpp"
#include "ramsey/estimators.hpp"
#include "ramsey/noise_models.hpp"

namespace ramsey {

/// Total time T shared by nu = T/t repetitions; curves report Delta b * sqrt(T).
struct FixedTotalTime {
  double total_time = 1.0;  // s
};

/// Fixed number of repetitions nu; curves report Delta b.
struct FixedShots {
  double shots = 1.0;
};

using Budget = std::variant<FixedTotalTime, FixedShots>;

/// How the readout phase phi is chosen at each detection time.
enum class PhasePolicy {
  optimal,  // minimize Delta b over phi (b-independent)
  from_b,   // phi = b * int y0
};

std::string_view to_string(PhasePolicy policy);

struct Scenario {
  EnsembleSpec ensemble;
  NoiseSpectrum spectrum;
  ControlProtocol protocol;
  double b = 0.0;  // rad/s
  Budget budget = FixedShots{};
  Backend backend = Backend::css_closed_form;
  PhasePolicy phase = PhasePolicy::optimal;
  bool neglect_bath_phase = false;  // force Psi = 0
  double quad_rel_tol = 1e-9;
  int max_qubits = kDefaultMaxQubits;

  void validate() const;
};

/// Twisted state with the (theta, beta) that minimize the initial variance of Jy.
EnsembleSpec optimally_squeezed(int n_qubits);

enum class PointFlag : std::uint8_t {
  none = 0,
  effectively_infinite = 1,  // signal below the underflow floor; value is +inf
  below_resolution = 2,      // exact Dicke signal under 1e-12 of its maximum; value is roundoff
};

std::string_view to_string(PointFlag flag);

struct PointResult {
  double t = 0.0;
  double value = 0.0;    // Delta b, or Delta b * sqrt(T) for a fixed total time
  double delta_b = 0.0;  // Delta b at the repetition count in force at t
  double phi = 0.0;
  double chi = 0.0;
  double psi = 0.0;
  PointFlag flag = PointFlag::none;
};

/// Backend state prepared once per scenario (angles, Dicke bands) and evaluated per time.
class ScenarioEvaluator {
 public:
  explicit ScenarioEvaluator(Scenario scenario);

  PointResult operator()(double t) const;
  const Scenario& scenario() const { return scenario_; }
  /// Backend description, angles and dephasing route.
  std::map<std::string, std::string> metadata() const;

 private:
  Scenario scenario_;
  double theta_ = 0.0;
  double beta_ = 0.0;
  std::optional<DickeBands> bands_;
};

struct SweepResult {
  std::vector<double> times;
  std::vector<double> delta_b;  // reported value per time (see PointResult::value)
  std::vector<PointFlag> flags;
  double t_opt = 0.0;
  double delta_b_opt = 0.0;
  bool at_boundary = false;  // minimum on the first or last grid time
  std::optional<double> t_res;
  std::optional<double> delta_b_offset;  // value at t_opt + t_res
  std::map<std::string, std::string> metadata;
};

/// Reported value on every grid time. The minimum is taken over the grid only.
SweepResult uncertainty_curve(const Scenario& scenario, std::span<const double> times);

struct TimeBracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizeOptions {
  int points_per_decade = 400;
  double rel_tol = 1e-6;
};

struct TimeMinimum {
  double t = 0.0;
  double value = 0.0;
};

/// Logarithmic coarse scan over the bracket, then golden-section refinement in log t.
/// Throws NoBracketError when the scan minimum lies at either end.
TimeMinimum minimize_over_time(const std::function<double(double)>& objective, TimeBracket bracket,
                               const OptimizeOptions& options = {});

/// minimize_over_time applied to the scenario's reported value; the coarse scan is kept.
SweepResult optimize_detection_time(const Scenario& scenario, TimeBracket bracket,
                                    std::optional<double> t_res = std::nullopt,
                                    const OptimizeOptions& options = {});

/// Logarithmically spaced times, points_per_decade per factor of ten, both ends included.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (log N, log value).
ScalingFit scaling_fit(std::span<const double> n, std::span<const double> values);

/// Penning-trap amplitude sensing with a thermal COM mode.
struct IonParameters {
  double omega_z = 2.0 * std::numbers::pi * 1.57e6;  // rad/s
  double u_dk = 40e-24;                          // N
  double mass = 1.50e-26;                        // kg
  double nbar = 12.8;
  double detuning = 2.0 * std::numbers::pi * 2e3;  // D = omega_z - mu, rad/s
  int n_qubits = 100;
  double shots = 1.0;
  InitialState initial_state = CoherentSpinState{};

  void validate() const;
};

inline constexpr double kHbar = 1.054571817e-34;  // J s

/// g = U dk / sqrt(2 hbar M N omega_z), so that hbar g = U dk sqrt(hbar / (2 M N omega_z)).
double ion_coupling(const IonParameters& p);

/// Thermal-mode spectrum, ion drive with mu = omega_z - D, fixed shots.
Scenario ion_scenario(const IonParameters& p, Backend backend);

/// Detection times before the bath phase first reaches |Psi| = pi/2 (rotating-wave estimate).
/// Later lobes revive because Delta b is pi-periodic in Psi while chi stays bounded.
TimeBracket ion_first_lobe(const IonParameters& p);

/// Delta Z_c = hbar Delta b / (U dk), in metres.
double ion_dzc_from_delta_b(const IonParameters& p, double delta_b);

/// Delta Z_c ~ U dk / (2 sqrt(nu) M omega_z |D| sqrt(N)).
double ion_analytic_dzc(const IonParameters& p);

}  // namespace ramsey
