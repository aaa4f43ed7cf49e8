#include "ramsey/optimize.hpp"

#include <cmath>

#include "ramsey/errors.hpp"

namespace ramsey {

Minimum golden_section(const std::function<double(double)>& f, double a, double b, double rel_tol,
                       double abs_tol, int max_iterations) {
  if (!(a < b)) throw DomainError("golden_section: need a < b");
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int evals = 2;
  for (int it = 0; it < max_iterations; ++it) {
    const double centre = 0.5 * (a + b);
    if (b - a <= rel_tol * std::abs(centre) + abs_tol) break;
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  return f1 <= f2 ? Minimum{x1, f1, evals} : Minimum{x2, f2, evals};
}

Bracket bracket_from_scan(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size() || x.size() < 3) throw DomainError("bracket_from_scan: need >= 3 samples");
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i] < f[best]) best = i;
  }
  if (best == 0 || best + 1 == f.size()) {
    throw NoBracketError("bracket_from_scan: smallest value at the edge of the scan (monotone)");
  }
  return {x[best - 1], x[best], x[best + 1], best};
}

}  // namespace ramsey
