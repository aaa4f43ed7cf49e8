#pragma once

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramsey/estimators.hpp"
#include "ramsey/runner.hpp"

namespace ramsey::app {

/// Bad or unknown configuration input; the message names the key and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class JobKind { curve, scan };
enum class Model { spin_boson, ion };
enum class StateKind { css, oats_optimal, oats };
enum class ScanParameter { n_qubits, detuning };

struct SpectrumConfig {
  std::string kind = "ohmic";  // ohmic | thermal_mode | tabulated | none
  double alpha = 1.0;
  double s = 3.0;
  double omega_c = 1.0;  // rad/s
  double g = 0.0;        // rad/s
  double omega_mode = 1.0;
  double nbar = 0.0;
  std::string path;  // tabulated: two columns omega [rad/s], S(omega) [rad/s]
};

struct ProtocolConfig {
  std::string kind = "free_evolution";  // free_evolution | ion_drive
  double mu = 0.0;                      // rad/s
  double d = 0.0;                       // rad/s
};

struct IonConfig {
  double omega_z = IonParameters{}.omega_z;
  double u_dk = IonParameters{}.u_dk;
  double mass = IonParameters{}.mass;
  double nbar = IonParameters{}.nbar;
  double detuning = IonParameters{}.detuning;
  bool first_lobe_window = true;
};

struct SeriesConfig {
  std::string name;
  Backend backend = Backend::css_closed_form;
  StateKind state = StateKind::css;
  double theta = 0.0;  // rad, explicit twisted state only
  double beta = 0.0;
  bool psi_zero = false;
  bool analytic = false;  // ion closed form instead of a numerical optimum
};

struct RunConfig {
  JobKind job = JobKind::curve;
  Model model = Model::spin_boson;
  std::filesystem::path output_dir = "ramsey_out";
  std::optional<std::string> preset;

  int n_qubits = 100;
  SpectrumConfig spectrum;
  ProtocolConfig protocol;
  IonConfig ion;
  std::optional<double> b;  // rad/s; default chosen per model
  bool fixed_total_time = true;
  double total_time = 1.0;  // s
  double shots = 1.0;
  PhasePolicy phase = PhasePolicy::optimal;
  double quad_rel_tol = 1e-9;
  int max_qubits = kDefaultMaxQubits;

  double t_min = 1e-3;  // s, curve grid and non-ion optimization window
  double t_max = 1.0;
  int points_per_decade = 100;  // curve grid
  bool optimize = true;         // curve job: also refine t_opt when the dip is interior
  int opt_points_per_decade = 400;
  double opt_rel_tol = 1e-6;
  std::optional<double> t_res;

  ScanParameter scan_parameter = ScanParameter::n_qubits;
  std::vector<double> scan_values;

  std::vector<double> q_times;  // s
  int q_theta_points = 61;
  int q_gamma_points = 121;

  std::vector<SeriesConfig> series;
};

/// Reads a YAML file into a node; parse errors become ConfigError with the line number.
YAML::Node load_yaml_file(const std::filesystem::path& path);
YAML::Node load_yaml_text(const std::string& text, const std::string& origin);

/// Recursively overlays `top` onto `base` (maps merge, everything else replaces).
YAML::Node merge(const YAML::Node& base, const YAML::Node& top);

/// Applies `dotted.key=value`; the value is parsed as YAML so lists and numbers keep their type.
void apply_override(YAML::Node& root, const std::string& assignment);

/// Strict conversion: unknown keys, wrong types and out-of-range values are rejected.
RunConfig parse_config(const YAML::Node& root);

/// Fully explicit YAML that parses back to the same RunConfig.
std::string emit_resolved(const RunConfig& config);

std::string_view to_string(JobKind kind);
std::string_view to_string(Model model);
std::string_view to_string(StateKind kind);
std::string_view to_string(ScanParameter p);

}  // namespace ramsey::app
