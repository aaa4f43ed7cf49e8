#pragma once

#include <functional>
#include <span>

namespace ramsey {

struct Minimum {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of f on [a, b]. Stops once the bracket is
/// narrower than rel_tol * |x| + abs_tol.
Minimum golden_section(const std::function<double(double)>& f, double a, double b, double rel_tol,
                       double abs_tol = 0.0, int max_iterations = 500);

struct Bracket {
  double lo = 0.0;
  double mid = 0.0;
  double hi = 0.0;
  std::size_t index = 0;  // grid index of mid
};

/// Bracket around the smallest sampled value of a coarse scan. Throws NoBracketError
/// when the smallest value sits at either end of the grid (monotone scan).
Bracket bracket_from_scan(std::span<const double> x, std::span<const double> f);

}  // namespace ramsey
