#include "ramsey/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "ramsey/errors.hpp"

namespace ramsey::quad {

namespace {

// Nodes and weights come from Boost; the adaptive driver is ours because the
// Boost 1.74 recursive driver reports sub-interval errors on the reference scale.
using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxSegments = 5000;

struct Segment {
  double a = 0.0;
  double b = 0.0;
  Result r;
  bool operator<(const Segment& o) const { return r.error < o.r.error; }
};

Segment gk21(const Integrand& f, double a, double b) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fc = f(mid);
  double k = fc * wk[0];
  double g = 0.0;  // the 10-point Gauss rule has no centre node
  double l1 = std::abs(fc) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    k += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) g += (fp + fm) * wg[i / 2];
  }
  Segment s{a, b, {}};
  s.r.value = k * half;
  s.r.l1 = l1 * std::abs(half);
  s.r.error = std::max(std::abs((k - g) * half), 50.0 * kEps * s.r.l1);
  return s;
}

// Globally adaptive bisection of the worst segment until the summed error meets the target.
Result adaptive(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                unsigned max_depth) {
  const double min_width = std::abs(b - a) * std::ldexp(1.0, -static_cast<int>(max_depth));
  std::priority_queue<Segment> heap;
  Result total;
  {
    Segment s = gk21(f, a, b);
    total = s.r;
    heap.push(s);
  }
  std::vector<Segment> frozen;
  while (!heap.empty() && total.error > rel_tol * total.l1 + abs_tol &&
         heap.size() + frozen.size() < kMaxSegments) {
    Segment worst = heap.top();
    heap.pop();
    if (std::abs(worst.b - worst.a) <= min_width) {
      frozen.push_back(worst);
      continue;
    }
    const double m = 0.5 * (worst.a + worst.b);
    const Segment left = gk21(f, worst.a, m);
    const Segment right = gk21(f, m, worst.b);
    total.value += left.r.value + right.r.value - worst.r.value;
    total.error += left.r.error + right.r.error - worst.r.error;
    total.l1 += left.r.l1 + right.r.l1 - worst.r.l1;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  Result exact;
  auto add = [&exact](const Segment& s) {
    exact.value += s.r.value;
    exact.error += s.r.error;
    exact.l1 += s.r.l1;
  };
  for (const auto& s : frozen) add(s);
  while (!heap.empty()) {
    add(heap.top());
    heap.pop();
  }
  return exact;
}

[[noreturn]] void fail(const char* where, const Result& r) {
  std::ostringstream os;
  os << where << ": quadrature did not converge (estimate " << r.value << ", error " << r.error
     << ")";
  throw QuadratureError(os.str(), r.value, r.error);
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                 unsigned max_depth) {
  if (a == b) return {};
  const Result r = adaptive(f, a, b, rel_tol, abs_tol, max_depth);
  if (!std::isfinite(r.value) || r.error > rel_tol * r.l1 + abs_tol) fail("integrate", r);
  return r;
}

Result integrate_panels(const Integrand& f, double a, double b, const PanelOptions& opts) {
  if (!(opts.panel_width > 0.0)) throw DomainError("integrate_panels: panel width must be > 0");
  if (b <= a) return {};

  Result total;
  int quiet_panels = 0;
  long n = 0;
  while (true) {
    const double x = a + static_cast<double>(n) * opts.panel_width;
    if (!(x < b)) break;
    if (++n > opts.max_panels) fail("integrate_panels (panel limit)", total);
    const double x_next = std::min(a + static_cast<double>(n) * opts.panel_width, b);
    const Result p = adaptive(f, x, x_next, opts.rel_tol, 0.0, 12);
    total.value += p.value;
    total.error += p.error;
    total.l1 += p.l1;

    if (std::isinf(b) && x_next >= opts.tail_start) {
      const bool negligible = p.l1 <= 1e-3 * opts.rel_tol * total.l1 + opts.abs_tol * 1e-3;
      quiet_panels = negligible ? quiet_panels + 1 : 0;
      if (quiet_panels >= 4) break;
    }
  }
  if (!std::isfinite(total.value) || total.error > opts.rel_tol * total.l1 + opts.abs_tol) {
    fail("integrate_panels", total);
  }
  return total;
}

}  // namespace ramsey::quad
