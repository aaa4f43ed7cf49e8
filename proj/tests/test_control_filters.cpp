#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "ramsey/control_filters.hpp"
#include "ramsey/errors.hpp"

using namespace ramsey;
using cd = std::complex<double>;

namespace {

// Composite Gauss-Legendre, independent of the library quadrature.
template <class F>
cd composite_gl(F f, double a, double b, int panels) {
  using boost::math::quadrature::gauss;
  cd acc = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    auto re = [&](double x) { return f(x).real(); };
    auto im = [&](double x) { return f(x).imag(); };
    acc += cd(gauss<double, 20>::integrate(re, lo, lo + h), gauss<double, 20>::integrate(im, lo, lo + h));
  }
  return acc;
}

double brute_f_plus(const Modulation& y, double w, double t) {
  const int panels = 40 + static_cast<int>(std::abs(w) * t + 1.0);
  const cd v = composite_gl([&](double s) { return y(s) * std::polar(1.0, -w * s); }, 0.0, t, panels);
  return std::norm(v);
}

cd brute_f_minus(const Modulation& y, double w, double t) {
  const int panels = 12 + static_cast<int>(std::abs(w) * t / 4.0 + 1.0);
  auto inner = [&](double s) {
    return composite_gl([&](double u) { return y(u) * std::polar(1.0, -w * u); }, 0.0, s, panels);
  };
  return composite_gl([&](double s) { return y(s) * std::polar(1.0, w * s) * inner(s); }, 0.0, t,
                      panels);
}

}  // namespace

TEST_CASE("free evolution closed forms") {
  const auto p = ControlProtocol::free_evolution();
  for (double w : {0.3, 1.0, 7.5}) {
    for (double t : {0.2, 1.0, 3.7}) {
      const double s = std::sin(0.5 * w * t);
      CHECK(f_plus(p, w, t) == doctest::Approx(4.0 * s * s / (w * w)).epsilon(1e-12));
      const cd fm = f_minus(p, w, t);
      CHECK(fm.imag() == doctest::Approx((w * t - std::sin(w * t)) / (w * w)).epsilon(1e-11));
      CHECK(fm.real() == doctest::Approx((1.0 - std::cos(w * t)) / (w * w)).epsilon(1e-11));
    }
  }
  CHECK(f_plus(p, 0.0, 2.0) == doctest::Approx(4.0));
  CHECK(f_plus(p, 2.0 * std::numbers::pi, 1.0) == doctest::Approx(0.0).epsilon(1e-28));
  // short time: Im F- ~ w t^3 / 6
  CHECK(f_minus(p, 2.0, 1e-3).imag() == doctest::Approx(2.0 * 1e-9 / 6.0).epsilon(1e-6));
  CHECK(f_minus(p, 1e-9, 1.0).imag() == doctest::Approx(1e-9 / 6.0).epsilon(1e-8));
}

TEST_CASE("zero time and zero frequency") {
  const auto p = ControlProtocol::ion_drive(9.0, 0.4);
  CHECK(f_plus(p, 3.0, 0.0) == 0.0);
  CHECK(f_minus(p, 3.0, 0.0) == cd(0.0, 0.0));
  const double t = 2.3;
  const double integral = std::sin(9.0 * t) / 9.0;
  const cd f0 = f_minus(p, 0.0, t);
  CHECK(f0.real() == doctest::Approx(0.5 * integral * integral).epsilon(1e-12));
  CHECK(std::abs(f0.imag()) < 1e-15);
  CHECK_THROWS_AS(f_plus(p, 1.0, -1.0), DomainError);
}

TEST_CASE("cosine modulation on resonance") {
  const double mu = 1e4, t = 5.0;
  const auto p = ControlProtocol::ion_drive(mu, 1.0);
  const double fp = f_plus(p, mu, t);
  CHECK(std::abs(fp - t * t / 4.0) <= 2.0 * t / mu);
}

TEST_CASE("closed forms agree with brute-force double quadrature") {
  const ControlProtocol protocols[] = {ControlProtocol::free_evolution(),
                                       ControlProtocol::ion_drive(3.1, 0.7),
                                       {Modulation::constant(1.0), Modulation::one_minus_cos(2.2), "omc"},
                                       {Modulation::constant(1.0), Modulation::constant(0.6), "scaled"}};
  for (const auto& p : protocols) {
    for (double w : {0.0, 0.05, 1.0, 3.1, 3.15, 12.0}) {
      for (double t : {0.1, 1.0, 4.0}) {
        const double fp = f_plus(p, w, t);
        const double fp_ref = brute_f_plus(p.y, w, t);
        CHECK(std::abs(fp - fp_ref) <= 1e-8 * std::max(fp_ref, 1e-6 * t * t));
        const cd fm = f_minus(p, w, t);
        const cd fm_ref = brute_f_minus(p.y, w, t);
        CHECK(std::abs(fm - fm_ref) <= 1e-8 * std::max(std::abs(fm_ref), 1e-6 * t * t));
        // ordered-square identity
        CHECK(fp == doctest::Approx(2.0 * fm.real()).epsilon(1e-10).scale(t * t * 1e-3));
        CHECK(f_plus(p, -w, t) == doctest::Approx(fp).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("custom modulation falls back to quadrature") {
  const auto y = Modulation::custom([](double s) { return std::cos(3.1 * s); }, "cos3.1");
  const ControlProtocol custom{Modulation::constant(1.0), y, "custom"};
  const auto closed = ControlProtocol::ion_drive(3.1, 0.7);
  for (double w : {0.4, 3.0}) {
    CHECK(f_plus(custom, w, 2.0) == doctest::Approx(f_plus(closed, w, 2.0)).epsilon(1e-9));
    const cd a = f_minus(custom, w, 2.0);
    const cd b = f_minus(closed, w, 2.0);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
  }
}

TEST_CASE("exp divided difference is continuous through coalescing nodes") {
  using detail::exp_divided_difference;
  const cd z0{0.0, 0.0}, z1{0.0, 3.0}, z2{0.2, 5.0};
  const cd naive = ((std::exp(z2) - std::exp(z1)) / (z2 - z1) - (std::exp(z1) - std::exp(z0)) / (z1 - z0)) /
                   (z2 - z0);
  CHECK(std::abs(exp_divided_difference(z0, z1, z2) - naive) < 1e-14);
  // all nodes equal: e^z / 2
  const cd z{0.1, 0.7};
  CHECK(std::abs(exp_divided_difference(z, z, z) - 0.5 * std::exp(z)) < 1e-15);
  const cd near = exp_divided_difference(z, z + cd(0, 1e-9), z + cd(0, 2e-9));
  CHECK(std::abs(near - 0.5 * std::exp(z)) < 1e-9);
  // transition between the series and the difference formula
  const cd a = exp_divided_difference(0.0, cd(0, 0.5), cd(0, 0.999999));
  const cd b = exp_divided_difference(0.0, cd(0, 0.5), cd(0, 1.000001));
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("y0 integral") {
  const auto p = ControlProtocol::ion_drive(10.0, 0.5);
  CHECK(y0_integral(p, 2.0) == doctest::Approx(2.0 - std::sin(1.0) / 0.5).epsilon(1e-13));
  CHECK(y0_integral(ControlProtocol::free_evolution(), 3.0) == doctest::Approx(3.0));
}
