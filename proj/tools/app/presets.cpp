#include "presets.hpp"

#include <array>

namespace ramsey::app {

namespace {

constexpr std::string_view kFig1a = R"(
job: curve
model: spin_boson
ensemble: {n_qubits: 100}
spectrum: {kind: ohmic, alpha: 1.0, s: 3.0, omega_c_rad_per_s: 1.0}
protocol: {kind: free_evolution}
budget: {kind: fixed_total_time, total_time_s: 1.0}
time: {t_min_s: 1.0e-3, t_max_s: 1.0, points_per_decade: 100}
series:
  - {name: psi, backend: css_closed_form, initial_state: css}
  - {name: psi_zero, backend: css_closed_form, initial_state: css, bath_phase: forced_zero}
)";

// Same physics as fig1a; only the time axis is longer.
constexpr std::string_view kFig1b = R"(
job: curve
model: spin_boson
ensemble: {n_qubits: 100}
spectrum: {kind: ohmic, alpha: 1.0, s: 3.0, omega_c_rad_per_s: 1.0}
protocol: {kind: free_evolution}
budget: {kind: fixed_total_time, total_time_s: 1.0}
time: {t_min_s: 1.0e-3, t_max_s: 100.0, points_per_decade: 100}
optimize: {enabled: false}
series:
  - {name: psi, backend: css_closed_form, initial_state: css}
  - {name: psi_zero, backend: css_closed_form, initial_state: css, bath_phase: forced_zero}
)";

constexpr std::string_view kFig1c = R"(
job: curve
model: spin_boson
ensemble: {n_qubits: 1000}
spectrum: {kind: ohmic, alpha: 1.0, s: 3.0, omega_c_rad_per_s: 1.0}
protocol: {kind: free_evolution}
budget: {kind: fixed_total_time, total_time_s: 1.0}
time: {t_min_s: 1.0e-3, t_max_s: 1.0, points_per_decade: 100}
q_function: {times_s: [0.0, 0.1, 0.3], theta_points: 61, gamma_points: 121}
series:
  - {name: oats_cumulant, backend: oats_cumulant, initial_state: oats_optimal}
  - {name: dicke_exact, backend: dicke_exact, initial_state: oats_optimal}
  - {name: dicke_exact_psi_zero, backend: dicke_exact, initial_state: oats_optimal, bath_phase: forced_zero}
)";

// D/2pi from 0.5 kHz to 10 kHz.
constexpr std::string_view kFig2a = R"(
job: scan
model: ion
ensemble: {n_qubits: 100}
ion: {omega_z_rad_per_s: 9864600.93227195, u_dk_newton: 40.0e-24, ion_mass_kg: 1.50e-26, nbar: 12.8,
      detuning_rad_per_s: 12566.370614359172, window: first_lobe}
budget: {kind: fixed_shots, shots: 1.0}
scan:
  parameter: detuning_rad_per_s
  values: [3141.5926535897932, 6283.1853071795865, 12566.370614359172, 18849.555921538758,
           31415.926535897932, 43982.297150257105, 62831.853071795865]
series:
  - {name: analytic, analytic: true}
  - {name: css, backend: css_closed_form, initial_state: css}
  - {name: css_psi_zero, backend: css_closed_form, initial_state: css, bath_phase: forced_zero}
  - {name: oats_cumulant, backend: oats_cumulant, initial_state: oats_optimal}
)";

constexpr std::string_view kFig2b = R"(
job: scan
model: ion
ensemble: {n_qubits: 100}
ion: {omega_z_rad_per_s: 9864600.93227195, u_dk_newton: 40.0e-24, ion_mass_kg: 1.50e-26, nbar: 12.8,
      detuning_rad_per_s: 12566.370614359172, window: first_lobe}
budget: {kind: fixed_shots, shots: 1.0}
scan:
  parameter: n_qubits
  values: [10, 20, 50, 100, 200, 500, 1000, 2000]
series:
  - {name: analytic, analytic: true}
  - {name: css, backend: css_closed_form, initial_state: css}
  - {name: oats_cumulant, backend: oats_cumulant, initial_state: oats_optimal}
  - {name: oats_psi_zero, backend: oats_cumulant, initial_state: oats_optimal, bath_phase: forced_zero}
)";

constexpr std::array kPresets{
    Preset{"fig1a", "CSS N=100, ohmic alpha=1 s=3: Delta b sqrt(T) vs t with and without bath phase",
           kFig1a},
    Preset{"fig1b", "fig1a parameters on an extended time range up to 100 s", kFig1b},
    Preset{"fig1c", "optimal OATS N=1000: cumulant vs exact Dicke vs exact with Psi=0, plus Q-functions",
           kFig1c},
    Preset{"fig2a", "Penning trap N=100: optimal Delta Z_c vs detuning D", kFig2a},
    Preset{"fig2b", "Penning trap D/2pi=2 kHz: optimal Delta Z_c vs N", kFig2b},
};

}  // namespace

std::span<const Preset> presets() { return kPresets; }

const Preset* find_preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace ramsey::app
