#include "ramsey/control_filters.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "ramsey/errors.hpp"
#include "ramsey/quadrature.hpp"

namespace ramsey {

using cd = std::complex<double>;

namespace detail {

namespace {

// e^z - 1 without cancellation for small |z|.
cd expm1c(cd z) {
  const double a = z.real();
  const double b = z.imag();
  const double h = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * h * h, std::exp(a) * std::sin(b)};
}

// (e^z - 1) / z
cd phi1(cd z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  return expm1c(z) / z;
}

cd divided_difference1(cd x, cd y) { return std::exp(x) * phi1(y - x); }

double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

}  // namespace

cd exp_divided_difference(cd z0, cd z1, cd z2) {
  const std::array<cd, 3> z{z0, z1, z2};
  // Use the most separated pair as the outer nodes.
  int lo = 0, hi = 1;
  double spread = std::abs(z[1] - z[0]);
  if (std::abs(z[2] - z[0]) > spread) { lo = 0; hi = 2; spread = std::abs(z[2] - z[0]); }
  if (std::abs(z[2] - z[1]) > spread) { lo = 1; hi = 2; spread = std::abs(z[2] - z[1]); }
  const int mid = 3 - lo - hi;

  if (spread <= 1.0) {
    // e^{z_lo} * sum_n h_n(a, b) / (n + 2)!, h_n the complete homogeneous polynomial.
    const cd a = z[mid] - z[lo];
    const cd b = z[hi] - z[lo];
    cd h = 1.0;
    cd bn = 1.0;
    double fact = 2.0;  // (n + 2)!
    cd sum = 0.5;
    for (int n = 1; n < 60; ++n) {
      bn *= b;
      h = bn + a * h;
      fact *= static_cast<double>(n + 2);
      const cd term = h / fact;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(z[lo]) * sum;
  }
  return (divided_difference1(z[mid], z[hi]) - divided_difference1(z[lo], z[mid])) /
         (z[hi] - z[lo]);
}

cd phase_integral(double x, double t) {
  const double u = 0.5 * x * t;
  return t * sinc(u) * std::polar(1.0, -u);
}

}  // namespace detail

Modulation Modulation::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("modulation: constant must be finite");
  Modulation m;
  m.kind_ = Kind::constant;
  m.parameter_ = value;
  m.terms_ = {{value, 0.0}};
  return m;
}

Modulation Modulation::cosine(double mu) {
  if (!std::isfinite(mu)) throw DomainError("modulation: mu must be finite");
  Modulation m;
  m.kind_ = Kind::cosine;
  m.parameter_ = mu;
  m.terms_ = {{0.5, mu}, {0.5, -mu}};
  return m;
}

Modulation Modulation::one_minus_cos(double d) {
  if (!std::isfinite(d)) throw DomainError("modulation: D must be finite");
  Modulation m;
  m.kind_ = Kind::one_minus_cos;
  m.parameter_ = d;
  m.terms_ = {{1.0, 0.0}, {-0.5, d}, {-0.5, -d}};
  return m;
}

Modulation Modulation::custom(std::function<double(double)> f, std::string name) {
  if (!f) throw DomainError("modulation: empty custom function");
  Modulation m;
  m.kind_ = Kind::custom;
  m.parameter_ = 0.0;
  m.fn_ = std::move(f);
  m.name_ = std::move(name);
  return m;
}

double Modulation::operator()(double t) const {
  switch (kind_) {
    case Kind::constant: return parameter_;
    case Kind::cosine: return std::cos(parameter_ * t);
    case Kind::one_minus_cos: return 1.0 - std::cos(parameter_ * t);
    case Kind::custom: return fn_(t);
  }
  return 0.0;
}

double Modulation::integral(double t) const {
  if (kind_ == Kind::custom) {
    return quad::integrate(fn_, 0.0, t, 1e-13, 1e-300).value;
  }
  cd acc = 0.0;
  for (const auto& term : terms_) acc += term.coeff * detail::phase_integral(-term.freq, t);
  return acc.real();
}

std::string Modulation::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::constant: os << "constant(" << parameter_ << ")"; break;
    case Kind::cosine: os << "cos(mu t), mu=" << parameter_; break;
    case Kind::one_minus_cos: os << "1-cos(D t), D=" << parameter_; break;
    case Kind::custom: os << "custom(" << name_ << ")"; break;
  }
  return os.str();
}

ControlProtocol ControlProtocol::free_evolution() {
  return {Modulation::constant(1.0), Modulation::constant(1.0), "free_evolution"};
}

ControlProtocol ControlProtocol::ion_drive(double mu, double d) {
  std::ostringstream os;
  os.precision(17);
  os << "ion_drive(mu=" << mu << ", D=" << d << ")";
  return {Modulation::one_minus_cos(d), Modulation::cosine(mu), os.str()};
}

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("filter function: t must be >= 0");
}

double f_plus_quadrature(const Modulation& y, double omega, double t) {
  auto c = [&](double s) { return y(s) * std::cos(omega * s); };
  auto sn = [&](double s) { return y(s) * std::sin(omega * s); };
  const auto rc = quad::integrate(c, 0.0, t, 1e-12, 1e-300);
  const auto rs = quad::integrate(sn, 0.0, t, 1e-12, 1e-14 * rc.l1);
  return rc.value * rc.value + rs.value * rs.value;
}

cd f_minus_quadrature(const Modulation& y, double omega, double t) {
  // Inner integral I(s) = int_0^s y(u) e^{-iwu} du.
  auto inner = [&](double s) -> cd {
    if (s == 0.0) return 0.0;
    auto c = [&](double u) { return y(u) * std::cos(omega * u); };
    auto sn = [&](double u) { return -y(u) * std::sin(omega * u); };
    const auto rc = quad::integrate(c, 0.0, s, 1e-12, 1e-300);
    const auto rs = quad::integrate(sn, 0.0, s, 1e-12, 1e-14 * rc.l1 + 1e-300);
    return {rc.value, rs.value};
  };
  auto outer_re = [&](double s) { return (y(s) * std::polar(1.0, omega * s) * inner(s)).real(); };
  auto outer_im = [&](double s) { return (y(s) * std::polar(1.0, omega * s) * inner(s)).imag(); };
  const auto re = quad::integrate(outer_re, 0.0, t, 1e-10, 1e-300);
  const auto im = quad::integrate(outer_im, 0.0, t, 1e-10, 1e-12 * re.l1 + 1e-300);
  return {re.value, im.value};
}

}  // namespace

double f_plus(const ControlProtocol& protocol, double omega, double t) {
  check_time(t);
  if (t == 0.0) return 0.0;
  const Modulation& y = protocol.y;
  if (!y.has_closed_form()) return f_plus_quadrature(y, omega, t);
  cd acc = 0.0;
  for (const auto& term : y.terms()) acc += term.coeff * detail::phase_integral(omega - term.freq, t);
  return std::norm(acc);
}

cd f_minus(const ControlProtocol& protocol, double omega, double t) {
  check_time(t);
  if (t == 0.0) return 0.0;
  const Modulation& y = protocol.y;
  if (!y.has_closed_form()) return f_minus_quadrature(y, omega, t);
  cd acc = 0.0;
  const cd it{0.0, t};
  for (const auto& k : y.terms()) {
    for (const auto& l : y.terms()) {
      acc += k.coeff * l.coeff *
             detail::exp_divided_difference(0.0, it * (k.freq + omega), it * (k.freq + l.freq));
    }
  }
  return t * t * acc;
}

double y0_integral(const ControlProtocol& protocol, double t) {
  check_time(t);
  return protocol.y0.integral(t);
}

}  // namespace ramsey
