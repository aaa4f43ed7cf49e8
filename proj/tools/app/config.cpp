#include "config.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace ramsey::app {

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null() || m.line < 0) return "(set on the command line)";
  return "(line " + std::to_string(m.line + 1) + ")";
}

/// Strict view of one mapping: every key must be read, anything left over is an error.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(label() + " must be a mapping " + where(node_));
    }
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    const YAML::Node v = child(key);
    if (!v || v.IsNull()) return fallback;
    return convert<T>(v, key);
  }

  template <typename T>
  std::optional<T> optional(const std::string& key) {
    seen_.insert(key);
    const YAML::Node v = child(key);
    if (!v || v.IsNull()) return std::nullopt;
    return convert<T>(v, key);
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<const char*> allowed) {
    const std::string v = get<std::string>(key, fallback);
    for (const char* a : allowed) {
      if (v == a) return v;
    }
    std::ostringstream os;
    os << qualified(key) << ": unknown value '" << v << "' " << where(child(key)) << "; expected one of";
    for (const char* a : allowed) os << " " << a;
    throw ConfigError(os.str());
  }

  std::vector<double> numbers(const std::string& key) {
    seen_.insert(key);
    const YAML::Node v = child(key);
    std::vector<double> out;
    if (!v || v.IsNull()) return out;
    if (!v.IsSequence()) throw ConfigError(qualified(key) + " must be a list " + where(v));
    for (const auto& item : v) out.push_back(convert<double>(item, key));
    return out;
  }

  Section section(const std::string& key) {
    seen_.insert(key);
    return Section(child(key), qualified(key));
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return child(key);
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) {
        throw ConfigError("unknown key '" + qualified(key) + "' " + where(kv.first));
      }
    }
  }

 private:
  YAML::Node child(const std::string& key) const {
    if (!node_ || node_.IsNull()) return YAML::Node();
    return node_[key];
  }

  std::string label() const { return path_.empty() ? "configuration" : "'" + path_ + "'"; }

  template <typename T>
  T convert(const YAML::Node& v, const std::string& key) const {
    try {
      if (!v.IsScalar()) throw YAML::BadConversion(v.Mark());
      T out = v.as<T>();
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) throw YAML::BadConversion(v.Mark());
      }
      return out;
    } catch (const YAML::BadConversion&) {
      throw ConfigError(qualified(key) + ": cannot read '" + (v.IsScalar() ? v.Scalar() : "<non-scalar>") +
                        "' as " + type_name<T>() + " " + where(v));
    }
  }

  template <typename T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else return "a string";
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

Backend parse_backend(const std::string& s) {
  if (s == "css_closed_form") return Backend::css_closed_form;
  if (s == "oats_cumulant") return Backend::oats_cumulant;
  return Backend::dicke_exact;
}

StateKind parse_state(const std::string& s) {
  if (s == "oats_optimal") return StateKind::oats_optimal;
  if (s == "oats") return StateKind::oats;
  return StateKind::css;
}

}  // namespace

std::string_view to_string(JobKind kind) { return kind == JobKind::curve ? "curve" : "scan"; }
std::string_view to_string(Model model) { return model == Model::ion ? "ion" : "spin_boson"; }
std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::css: return "css";
    case StateKind::oats_optimal: return "oats_optimal";
    case StateKind::oats: return "oats";
  }
  return "css";
}
std::string_view to_string(ScanParameter p) {
  return p == ScanParameter::n_qubits ? "n_qubits" : "detuning_rad_per_s";
}

YAML::Node load_yaml_file(const std::filesystem::path& path) {
  try {
    return YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read configuration file " + path.string());
  } catch (const YAML::ParserException& e) {
    throw ConfigError(path.string() + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

YAML::Node load_yaml_text(const std::string& text, const std::string& origin) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

YAML::Node merge(const YAML::Node& base, const YAML::Node& top) {
  if (!top || top.IsNull()) return YAML::Clone(base);
  if (!base || base.IsNull() || !base.IsMap() || !top.IsMap()) return YAML::Clone(top);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : top) {
    const auto key = kv.first.as<std::string>();
    out[key] = merge(out[key], kv.second);
  }
  return out;
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  }
  const std::string path = assignment.substr(0, eq);
  const YAML::Node value = load_yaml_text(assignment.substr(eq + 1), "--set " + path);

  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("--set: empty component in key '" + path + "'");
    parts.push_back(part);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  // yaml-cpp nodes are handles: walking with copies edits the tree in place.
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node cur = chain.back();
    YAML::Node next;
    if (cur.IsSequence()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(parts[i]);
      } catch (const std::exception&) {
        throw ConfigError("--set " + path + ": '" + parts[i] + "' must index a list");
      }
      if (idx >= cur.size()) throw ConfigError("--set " + path + ": list index out of range");
      next = cur[idx];
    } else {
      next = cur[parts[i]];
      if (!next.IsDefined() || next.IsNull()) {
        cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
        next = cur[parts[i]];
      }
    }
    chain.push_back(next);
  }
  YAML::Node leaf = chain.back();
  if (leaf.IsSequence()) {
    const std::size_t idx = std::stoul(parts.back());
    if (idx >= leaf.size()) throw ConfigError("--set " + path + ": list index out of range");
    leaf[idx] = value;
  } else {
    leaf[parts.back()] = value;
  }
}

RunConfig parse_config(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigError("empty configuration");
  RunConfig c;
  Section top(root, "");
  const std::string job = top.choice("job", "curve", {"curve", "scan"});
  c.job = job == "curve" ? JobKind::curve : JobKind::scan;
  const std::string model = top.choice("model", "spin_boson", {"spin_boson", "ion"});
  c.model = model == "ion" ? Model::ion : Model::spin_boson;
  c.output_dir = top.get<std::string>("output_dir", c.output_dir.string());
  c.preset = top.optional<std::string>("preset");

  {
    Section e = top.section("ensemble");
    c.n_qubits = e.get<int>("n_qubits", c.n_qubits);
    e.finish();
    require(c.n_qubits >= 1, "ensemble.n_qubits must be >= 1");
  }
  {
    Section s = top.section("spectrum");
    c.spectrum.kind = s.choice("kind", c.spectrum.kind, {"ohmic", "thermal_mode", "tabulated", "none"});
    c.spectrum.alpha = s.get<double>("alpha", c.spectrum.alpha);
    c.spectrum.s = s.get<double>("s", c.spectrum.s);
    c.spectrum.omega_c = s.get<double>("omega_c_rad_per_s", c.spectrum.omega_c);
    c.spectrum.g = s.get<double>("g_rad_per_s", c.spectrum.g);
    c.spectrum.omega_mode = s.get<double>("omega_mode_rad_per_s", c.spectrum.omega_mode);
    c.spectrum.nbar = s.get<double>("nbar", c.spectrum.nbar);
    c.spectrum.path = s.get<std::string>("path", c.spectrum.path);
    s.finish();
    require(c.spectrum.kind != "tabulated" || !c.spectrum.path.empty(),
            "spectrum.path is required for a tabulated spectrum");
  }
  {
    Section p = top.section("protocol");
    c.protocol.kind = p.choice("kind", c.protocol.kind, {"free_evolution", "ion_drive"});
    c.protocol.mu = p.get<double>("mu_rad_per_s", c.protocol.mu);
    c.protocol.d = p.get<double>("d_rad_per_s", c.protocol.d);
    p.finish();
  }
  {
    Section i = top.section("ion");
    c.ion.omega_z = i.get<double>("omega_z_rad_per_s", c.ion.omega_z);
    c.ion.u_dk = i.get<double>("u_dk_newton", c.ion.u_dk);
    c.ion.mass = i.get<double>("ion_mass_kg", c.ion.mass);
    c.ion.nbar = i.get<double>("nbar", c.ion.nbar);
    c.ion.detuning = i.get<double>("detuning_rad_per_s", c.ion.detuning);
    c.ion.first_lobe_window = i.choice("window", "first_lobe", {"first_lobe", "fixed"}) == "first_lobe";
    i.finish();
  }
  c.b = top.optional<double>("b_rad_per_s");
  {
    Section b = top.section("budget");
    c.fixed_total_time =
        b.choice("kind", c.model == Model::ion ? "fixed_shots" : "fixed_total_time",
                 {"fixed_total_time", "fixed_shots"}) == "fixed_total_time";
    c.total_time = b.get<double>("total_time_s", c.total_time);
    c.shots = b.get<double>("shots", c.shots);
    b.finish();
    require(c.total_time > 0.0, "budget.total_time_s must be > 0");
    require(c.shots > 0.0, "budget.shots must be > 0");
  }
  c.phase = top.choice("phase_policy", "optimal", {"optimal", "from_b"}) == "optimal" ? PhasePolicy::optimal
                                                                                     : PhasePolicy::from_b;
  c.quad_rel_tol = top.get<double>("quadrature_rel_tol", c.quad_rel_tol);
  require(c.quad_rel_tol > 0.0 && c.quad_rel_tol < 1.0, "quadrature_rel_tol must lie in (0, 1)");
  c.max_qubits = top.get<int>("max_qubits_exact", c.max_qubits);
  {
    Section t = top.section("time");
    c.t_min = t.get<double>("t_min_s", c.t_min);
    c.t_max = t.get<double>("t_max_s", c.t_max);
    c.points_per_decade = t.get<int>("points_per_decade", c.points_per_decade);
    t.finish();
    require(c.t_min > 0.0 && c.t_max > c.t_min, "time: need 0 < t_min_s < t_max_s");
    require(c.points_per_decade >= 1, "time.points_per_decade must be >= 1");
  }
  {
    Section o = top.section("optimize");
    c.optimize = o.get<bool>("enabled", c.optimize);
    c.opt_points_per_decade = o.get<int>("points_per_decade", c.opt_points_per_decade);
    c.opt_rel_tol = o.get<double>("rel_tol", c.opt_rel_tol);
    c.t_res = o.optional<double>("t_res_s");
    o.finish();
    require(c.opt_points_per_decade >= 1, "optimize.points_per_decade must be >= 1");
    require(c.opt_rel_tol > 0.0, "optimize.rel_tol must be > 0");
    require(!c.t_res || *c.t_res >= 0.0, "optimize.t_res_s must be >= 0");
  }
  {
    Section s = top.section("scan");
    c.scan_parameter = s.choice("parameter", "n_qubits", {"n_qubits", "detuning_rad_per_s"}) == "n_qubits"
                           ? ScanParameter::n_qubits
                           : ScanParameter::detuning;
    c.scan_values = s.numbers("values");
    s.finish();
    require(c.job != JobKind::scan || !c.scan_values.empty(), "scan.values must list at least one value");
    require(c.scan_parameter == ScanParameter::n_qubits || c.model == Model::ion,
            "scan.parameter detuning_rad_per_s needs model: ion");
    for (double v : c.scan_values) {
      require(v > 0.0 || c.scan_parameter == ScanParameter::detuning, "scan.values must be positive");
      require(c.scan_parameter != ScanParameter::n_qubits || v == std::floor(v),
              "scan.values must be integers when scanning n_qubits");
    }
  }
  {
    Section q = top.section("q_function");
    c.q_times = q.numbers("times_s");
    c.q_theta_points = q.get<int>("theta_points", c.q_theta_points);
    c.q_gamma_points = q.get<int>("gamma_points", c.q_gamma_points);
    q.finish();
    require(c.q_theta_points >= 2 && c.q_gamma_points >= 1, "q_function grid too small");
    for (double t : c.q_times) require(t >= 0.0, "q_function.times_s must be >= 0");
  }

  const YAML::Node series = top.raw("series");
  if (series && !series.IsNull()) {
    require(series.IsSequence(), "series must be a list " + where(series));
    std::set<std::string> names;
    for (std::size_t k = 0; k < series.size(); ++k) {
      Section s(series[k], "series." + std::to_string(k));
      SeriesConfig sc;
      sc.name = s.get<std::string>("name", "series" + std::to_string(k));
      sc.backend = parse_backend(
          s.choice("backend", "css_closed_form", {"css_closed_form", "oats_cumulant", "dicke_exact"}));
      sc.state = parse_state(s.choice("initial_state", sc.backend == Backend::css_closed_form ? "css" : "oats_optimal",
                                      {"css", "oats_optimal", "oats"}));
      sc.theta = s.get<double>("theta_rad", 0.0);
      sc.beta = s.get<double>("beta_rad", 0.0);
      sc.psi_zero = s.choice("bath_phase", "included", {"included", "forced_zero"}) == "forced_zero";
      sc.analytic = s.get<bool>("analytic", false);
      s.finish();
      require(names.insert(sc.name).second, "series name '" + sc.name + "' is used twice");
      for (char ch : sc.name) {
        require(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_',
                "series name '" + sc.name + "' may only contain letters, digits and '_'");
      }
      require(!sc.analytic || c.model == Model::ion, "series." + sc.name + ": analytic needs model: ion");
      require(!sc.analytic || c.job == JobKind::scan, "series." + sc.name + ": analytic only in scan jobs");
      c.series.push_back(sc);
    }
  }
  if (c.series.empty()) c.series.push_back({"css", Backend::css_closed_form, StateKind::css});
  top.finish();
  return c;
}

std::string emit_resolved(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "job" << YAML::Value << std::string(to_string(c.job));
  out << YAML::Key << "model" << YAML::Value << std::string(to_string(c.model));
  out << YAML::Key << "output_dir" << YAML::Value << c.output_dir.string();
  if (c.preset) out << YAML::Key << "preset" << YAML::Value << *c.preset;
  out << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap << YAML::Key << "n_qubits" << YAML::Value
      << c.n_qubits << YAML::EndMap;
  out << YAML::Key << "spectrum" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.spectrum.kind;
  out << YAML::Key << "alpha" << YAML::Value << c.spectrum.alpha;
  out << YAML::Key << "s" << YAML::Value << c.spectrum.s;
  out << YAML::Key << "omega_c_rad_per_s" << YAML::Value << c.spectrum.omega_c;
  out << YAML::Key << "g_rad_per_s" << YAML::Value << c.spectrum.g;
  out << YAML::Key << "omega_mode_rad_per_s" << YAML::Value << c.spectrum.omega_mode;
  out << YAML::Key << "nbar" << YAML::Value << c.spectrum.nbar;
  out << YAML::Key << "path" << YAML::Value << c.spectrum.path;
  out << YAML::EndMap;
  out << YAML::Key << "protocol" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.protocol.kind;
  out << YAML::Key << "mu_rad_per_s" << YAML::Value << c.protocol.mu;
  out << YAML::Key << "d_rad_per_s" << YAML::Value << c.protocol.d;
  out << YAML::EndMap;
  out << YAML::Key << "ion" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "omega_z_rad_per_s" << YAML::Value << c.ion.omega_z;
  out << YAML::Key << "u_dk_newton" << YAML::Value << c.ion.u_dk;
  out << YAML::Key << "ion_mass_kg" << YAML::Value << c.ion.mass;
  out << YAML::Key << "nbar" << YAML::Value << c.ion.nbar;
  out << YAML::Key << "detuning_rad_per_s" << YAML::Value << c.ion.detuning;
  out << YAML::Key << "window" << YAML::Value << (c.ion.first_lobe_window ? "first_lobe" : "fixed");
  out << YAML::EndMap;
  if (c.b) out << YAML::Key << "b_rad_per_s" << YAML::Value << *c.b;
  out << YAML::Key << "budget" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << (c.fixed_total_time ? "fixed_total_time" : "fixed_shots");
  out << YAML::Key << "total_time_s" << YAML::Value << c.total_time;
  out << YAML::Key << "shots" << YAML::Value << c.shots;
  out << YAML::EndMap;
  out << YAML::Key << "phase_policy" << YAML::Value << std::string(to_string(c.phase));
  out << YAML::Key << "quadrature_rel_tol" << YAML::Value << c.quad_rel_tol;
  out << YAML::Key << "max_qubits_exact" << YAML::Value << c.max_qubits;
  out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "t_min_s" << YAML::Value << c.t_min;
  out << YAML::Key << "t_max_s" << YAML::Value << c.t_max;
  out << YAML::Key << "points_per_decade" << YAML::Value << c.points_per_decade;
  out << YAML::EndMap;
  out << YAML::Key << "optimize" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.optimize;
  out << YAML::Key << "points_per_decade" << YAML::Value << c.opt_points_per_decade;
  out << YAML::Key << "rel_tol" << YAML::Value << c.opt_rel_tol;
  if (c.t_res) out << YAML::Key << "t_res_s" << YAML::Value << *c.t_res;
  out << YAML::EndMap;
  out << YAML::Key << "scan" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "parameter" << YAML::Value << std::string(to_string(c.scan_parameter));
  out << YAML::Key << "values" << YAML::Value << YAML::Flow << c.scan_values;
  out << YAML::EndMap;
  out << YAML::Key << "q_function" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "times_s" << YAML::Value << YAML::Flow << c.q_times;
  out << YAML::Key << "theta_points" << YAML::Value << c.q_theta_points;
  out << YAML::Key << "gamma_points" << YAML::Value << c.q_gamma_points;
  out << YAML::EndMap;
  out << YAML::Key << "series" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : c.series) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "backend" << YAML::Value << std::string(to_string(s.backend));
    out << YAML::Key << "initial_state" << YAML::Value << std::string(to_string(s.state));
    out << YAML::Key << "theta_rad" << YAML::Value << s.theta;
    out << YAML::Key << "beta_rad" << YAML::Value << s.beta;
    out << YAML::Key << "bath_phase" << YAML::Value << (s.psi_zero ? "forced_zero" : "included");
    out << YAML::Key << "analytic" << YAML::Value << s.analytic;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace ramsey::app
