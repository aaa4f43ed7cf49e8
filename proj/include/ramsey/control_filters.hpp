#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace ramsey {

/// One term c * exp(i * freq * t) of a modulation written as an exponential sum.
struct ExpTerm {
  double coeff = 0.0;
  double freq = 0.0;  // rad/s
};

/// Real, bounded control modulation y(t). Built-in kinds are finite exponential
/// sums and get closed-form filter functions; custom kinds fall back to quadrature.
class Modulation {
 public:
  enum class Kind { constant, cosine, one_minus_cos, custom };

  static Modulation constant(double value = 1.0);
  /// cos(mu t)
  static Modulation cosine(double mu);
  /// 1 - cos(D t)
  static Modulation one_minus_cos(double d);
  static Modulation custom(std::function<double(double)> f, std::string name);

  double operator()(double t) const;
  /// int_0^t y(s) ds
  double integral(double t) const;

  Kind kind() const { return kind_; }
  bool has_closed_form() const { return kind_ != Kind::custom; }
  const std::vector<ExpTerm>& terms() const { return terms_; }
  /// Parameter of the built-in kinds (value, mu or D).
  double parameter() const { return parameter_; }
  std::string describe() const;

 private:
  Modulation() = default;
  Kind kind_ = Kind::constant;
  double parameter_ = 1.0;
  std::vector<ExpTerm> terms_;
  std::function<double(double)> fn_;
  std::string name_;
};

/// Pair (y0, y): y0 modulates the estimated frequency b, y modulates the noise coupling.
struct ControlProtocol {
  Modulation y0 = Modulation::constant(1.0);
  Modulation y = Modulation::constant(1.0);
  std::string label = "free_evolution";

  static ControlProtocol free_evolution();
  /// y0(t) = 1 - cos(D t), y(t) = cos(mu t).
  static ControlProtocol ion_drive(double mu, double d);
};

/// First-order filter function F+(w, t) = |int_0^t y(s) e^{-iws} ds|^2.
double f_plus(const ControlProtocol& protocol, double omega, double t);

/// Second-order filter function F-(w, t) = int_0^t ds y(s) int_0^s du y(u) e^{-iw(u-s)}.
std::complex<double> f_minus(const ControlProtocol& protocol, double omega, double t);

/// int_0^t y0(s) ds
double y0_integral(const ControlProtocol& protocol, double t);

namespace detail {

/// Second divided difference of exp at three complex nodes, evaluated without
/// cancellation when nodes coalesce. Equals int_0^1 dx int_0^x dy exp(...) for
/// nodes (0, a, a+b).
std::complex<double> exp_divided_difference(std::complex<double> z0, std::complex<double> z1,
                                            std::complex<double> z2);

/// int_0^t e^{-ixs} ds
std::complex<double> phase_integral(double x, double t);

}  // namespace detail

}  // namespace ramsey
