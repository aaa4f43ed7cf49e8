#include "ramsey/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ramsey/errors.hpp"
#include "ramsey/quadrature.hpp"

namespace ramsey {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void OhmicFamilySpectrum::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("ohmic: alpha must be >= 0");
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("ohmic: s must be >= 0");
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw DomainError("ohmic: omega_c must be > 0");
}

double OhmicFamilySpectrum::density(double big_omega) const {
  if (big_omega < 0.0 || alpha == 0.0) return 0.0;
  const double x = big_omega / omega_c;
  if (x == 0.0) return s == 0.0 ? alpha * omega_c : 0.0;
  return alpha * omega_c * std::exp(s * std::log(x) - x);
}

double OhmicFamilySpectrum::total_weight() const {
  return alpha * omega_c * omega_c * std::exp(std::lgamma(s + 1.0));
}

void ThermalModeSpectrum::validate() const {
  if (!std::isfinite(g)) throw DomainError("thermal_mode: g must be finite");
  if (!(omega_mode > 0.0) || !std::isfinite(omega_mode)) {
    throw DomainError("thermal_mode: omega_z must be > 0");
  }
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("thermal_mode: nbar must be >= 0");
}

NoiseSpectrum::NoiseSpectrum(std::optional<ContinuousDensity> continuous,
                             std::vector<SpectralLine> lines, std::string label)
    : continuous_(std::move(continuous)), lines_(std::move(lines)), label_(std::move(label)) {
  if (continuous_) {
    if (!continuous_->s) throw DomainError("spectrum: continuous density without a function");
    if (!(continuous_->lower < continuous_->upper)) throw DomainError("spectrum: empty support");
    if (!(continuous_->scale > 0.0)) throw DomainError("spectrum: scale must be > 0");
  }
  for (const auto& l : lines_) {
    if (!std::isfinite(l.omega) || !(l.weight >= 0.0)) {
      throw DomainError("spectrum: line weights must be finite and >= 0");
    }
  }
}

double NoiseSpectrum::density(double omega) const {
  if (!continuous_) return 0.0;
  if (omega < continuous_->lower || omega > continuous_->upper) return 0.0;
  return continuous_->s(omega);
}

double NoiseSpectrum::positive_extent() const {
  if (!continuous_) return 0.0;
  return std::max(std::abs(continuous_->lower), std::abs(continuous_->upper));
}

bool NoiseSpectrum::is_zero() const {
  const bool lines_zero =
      std::all_of(lines_.begin(), lines_.end(), [](const SpectralLine& l) { return l.weight == 0.0; });
  return !continuous_ && lines_zero;
}

NoiseSpectrum ohmic_to_spectrum(const OhmicFamilySpectrum& spec) {
  spec.validate();
  std::ostringstream label;
  label << "ohmic(alpha=" << spec.alpha << ", s=" << spec.s << ", omega_c=" << spec.omega_c << ")";
  if (spec.alpha == 0.0) return NoiseSpectrum(std::nullopt, {}, label.str());

  ContinuousDensity d;
  d.s = [spec](double w) { return kTwoPi * spec.density(-w); };
  d.lower = -quad::kInf;
  d.upper = 0.0;
  d.scale = spec.omega_c;
  d.tail_start = spec.omega_c * (2.0 * spec.s + 4.0);
  return NoiseSpectrum(std::move(d), {}, label.str());
}

NoiseSpectrum thermal_to_spectrum(const ThermalModeSpectrum& spec) {
  spec.validate();
  const double g2 = 4.0 * spec.g * spec.g;
  std::ostringstream label;
  label << "thermal_mode(g=" << spec.g << ", omega_z=" << spec.omega_mode << ", nbar=" << spec.nbar
        << ")";
  return NoiseSpectrum(std::nullopt,
                       {{spec.omega_mode, g2 * spec.nbar}, {-spec.omega_mode, g2 * (spec.nbar + 1.0)}},
                       label.str());
}

NoiseSpectrum tabulated_spectrum(std::vector<double> omega, std::vector<double> s, std::string label) {
  if (omega.size() != s.size()) throw DomainError("tabulated spectrum: column lengths differ");
  if (omega.size() < 2) throw DomainError("tabulated spectrum: need at least two samples");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!std::isfinite(omega[i]) || !std::isfinite(s[i])) {
      throw DomainError("tabulated spectrum: non-finite sample");
    }
    if (s[i] < 0.0) throw DomainError("tabulated spectrum: S(omega) must be >= 0");
    if (i > 0 && !(omega[i] > omega[i - 1])) {
      throw DomainError("tabulated spectrum: omega must be strictly increasing");
    }
  }
  const double lo = omega.front();
  const double hi = omega.back();
  double min_step = quad::kInf;
  for (std::size_t i = 1; i < omega.size(); ++i) min_step = std::min(min_step, omega[i] - omega[i - 1]);

  ContinuousDensity d;
  d.lower = lo;
  d.upper = hi;
  d.scale = std::max(min_step, (hi - lo) / 1000.0);
  d.tail_start = std::max(std::abs(lo), std::abs(hi));
  // A table mirrored about w = 0 is evaluated on |w| so that S(w) - S(-w) vanishes exactly.
  bool mirrored = true;
  for (std::size_t i = 0, j = omega.size() - 1; i < j; ++i, --j) {
    if (omega[i] != -omega[j] || s[i] != s[j]) {
      mirrored = false;
      break;
    }
  }
  d.s = [w = std::move(omega), v = std::move(s), mirrored](double x) {
    if (mirrored) x = std::abs(x);
    if (x < w.front() || x > w.back()) return 0.0;
    auto it = std::upper_bound(w.begin(), w.end(), x);
    if (it == w.end()) return v.back();
    const auto i = static_cast<std::size_t>(it - w.begin());
    const double f = (x - w[i - 1]) / (w[i] - w[i - 1]);
    return v[i - 1] + f * (v[i] - v[i - 1]);
  };
  return NoiseSpectrum(std::move(d), {}, std::move(label));
}

NoiseSpectrum load_tabulated_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("tabulated spectrum: cannot open " + path.string());
  std::vector<double> w, s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double a = 0, b = 0;
    if (!(is >> a >> b)) {
      if (w.empty()) continue;  // header row
      throw DomainError("tabulated spectrum: malformed row " + std::to_string(lineno) + " in " +
                        path.string());
    }
    w.push_back(a);
    s.push_back(b);
  }
  return tabulated_spectrum(std::move(w), std::move(s), "tabulated(" + path.filename().string() + ")");
}

std::complex<double> correlation_function(const NoiseSpectrum& spectrum, double tau, double rel_tol) {
  if (!std::isfinite(tau)) throw DomainError("correlation_function: tau must be finite");
  std::complex<double> c{0.0, 0.0};
  for (const auto& l : spectrum.lines()) c += l.weight * std::polar(1.0, l.omega * tau);

  const auto& cont = spectrum.continuous();
  if (!cont) return c;

  // Fold onto w >= 0: S(w) e^{iwt} + S(-w) e^{-iwt}.
  quad::PanelOptions opts;
  const double osc = std::abs(tau) > 0.0 ? std::numbers::pi / std::abs(tau) : quad::kInf;
  opts.panel_width = std::min(cont->scale, osc);
  opts.tail_start = cont->tail_start;
  opts.rel_tol = rel_tol;
  const double extent = spectrum.positive_extent();

  auto re = [&](double w) {
    return (spectrum.density(w) + spectrum.density(-w)) * std::cos(w * tau);
  };
  auto im = [&](double w) {
    return (spectrum.density(w) - spectrum.density(-w)) * std::sin(w * tau);
  };
  const quad::Result r_re = quad::integrate_panels(re, 0.0, extent, opts);
  // The imaginary part can vanish identically (even S); use the real part's scale.
  opts.abs_tol = rel_tol * r_re.l1;
  const quad::Result r_im = quad::integrate_panels(im, 0.0, extent, opts);
  c += std::complex<double>(r_re.value, r_im.value) / kTwoPi;
  return c;
}

}  // namespace ramsey
