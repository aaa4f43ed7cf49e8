#pragma once

#include <functional>
#include <limits>

namespace ramsey::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  double l1 = 0.0;     // integral of |f|, the scale used for relative tolerances
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on a finite interval. Throws QuadratureError when
/// the estimated error exceeds rel_tol * L1 + abs_tol.
Result integrate(const Integrand& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 0.0, unsigned max_depth = 18);

struct PanelOptions {
  double panel_width = 1.0;  // > 0
  /// For an unbounded interval the march may only stop beyond this point.
  double tail_start = 0.0;
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  long max_panels = 4'000'000;
};

/// Integrates over [a, b) by marching fixed-width panels, each refined
/// adaptively. b may be +infinity, in which case the march stops once the
/// integrand has become negligible past tail_start.
Result integrate_panels(const Integrand& f, double a, double b, const PanelOptions& opts);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace ramsey::quad
