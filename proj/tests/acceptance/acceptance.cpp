// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ramsey/control_filters.hpp"
#include "ramsey/dephasing.hpp"
#include "ramsey/dicke.hpp"
#include "ramsey/estimators.hpp"
#include "ramsey/runner.hpp"

using namespace ramsey;
using std::numbers::pi;

namespace {

const double kChi0 = std::sqrt(6.0);  // alpha = 1, s = 3, wc = 1

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

class Suite {
 public:
  void run(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "[exception: " << e.what() << "] ";
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0.0 && elapsed > limit_s) {
      out.pass = false;
      out.detail << "[runtime above " << limit_s << " s] ";
    }
    if (!out.pass) ++failures_;
    std::printf("CRITERION %d %s: %s | %s(%.2f s)\n", id, out.pass ? "PASS" : "FAIL", title,
                out.detail.str().c_str(), elapsed);
    std::fflush(stdout);
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

Scenario spin_boson(int n, Backend backend) {
  Scenario s;
  s.ensemble = {n, CoherentSpinState{}};
  s.spectrum = ohmic_to_spectrum({1.0, 3.0, 1.0});
  s.protocol = ControlProtocol::free_evolution();
  s.budget = FixedTotalTime{1.0};
  s.backend = backend;
  if (backend != Backend::css_closed_form) s.ensemble = optimally_squeezed(n);
  return s;
}

TimeBracket around(double t) { return {t / 30.0, t * 30.0}; }

double css_guess(double n) { return 1.0 / (kChi0 * std::sqrt(n)); }
double oats_guess(double n) { return std::pow(4.0 / 3.0, 1.0 / 6.0) / (kChi0 * std::pow(n, 5.0 / 6.0)); }

struct LineFit {
  double slope = 0.0;
  double r_squared = 0.0;
};

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double k = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / k;
    my += y[i] / k;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  return {sxy / sxx, sxy * sxy / (sxx * syy)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1: short-time anchors of the ohmic s = 3 bath.
void short_time(Outcome& o) {
  const auto spec = ohmic_to_spectrum({1.0, 3.0, 1.0});
  const double t = 1e-3;
  const ChiPsi cp = chi_psi(spec, ControlProtocol::free_evolution(), t);
  const double a = cp.chi / (t * t);
  const double b = cp.psi / (t * t * t);
  o.detail << "chi/(wc t)^2 = " << a << ", Psi/(wc t)^3 = " << b << " ";
  o.require(rel(a, 6.0) <= 0.01, "chi/(wc t)^2 within 1% of 6");
  o.require(rel(b, -4.0) <= 0.01, "Psi/(wc t)^3 within 1% of -4");
}

// 2: closed-form coherent moments against exact Dicke evolution, derivative against differences.
void backend_oracle(Outcome& o) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> nd(1, 12);
  std::uniform_real_distribution<double> phid(-pi, pi), chid(0.0, 2.0), psid(-pi, pi);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = nd(rng);
    const double phi = phid(rng), chi = chid(rng), psi = psid(rng);
    const MomentSet c = css_moments(n, phi, chi, psi);
    const JyMoments d = dicke_moments(dicke_evolve(dicke_prepare({n, CoherentSpinState{}}), phi, chi, psi));
    // <Jy> may vanish; measure it against its natural scale N/2 there.
    worst = std::max(worst, std::abs(c.jy - d.jy) / std::max(std::abs(d.jy), 1e-3 * n));
    worst = std::max(worst, rel(c.jy2, d.jy2));
  }
  std::mt19937 rng2(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_fd = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 11;
    const DickeState s0 = trial % 2 ? dicke_prepare({n, CoherentSpinState{}})
                                    : dicke_prepare({n, TwistedSpinState{0.3 * u(rng2), 2.0 * u(rng2)}});
    const double y0 = 1.5 + u(rng2);
    const double b = u(rng2), chi = 0.3 * (1.0 + u(rng2)), psi = 0.2 * u(rng2);
    const double h = 1e-5;
    auto jy = [&](double bb) { return dicke_moments(dicke_evolve(s0, bb * y0, chi, psi)).jy; };
    const double fd = (jy(b + h) - jy(b - h)) / (2.0 * h);
    const double an = dicke_djy_db(s0, b * y0, chi, psi, y0);
    worst_fd = std::max(worst_fd, std::abs(an - fd) / std::max(std::abs(an), 1.0));
  }
  o.detail << "max moment deviation " << worst << ", max derivative deviation " << worst_fd << " ";
  o.require(worst <= 1e-10, "moments agree to 1e-10");
  o.require(worst_fd <= 1e-6, "derivative agrees to 1e-6");
}

// 3: coherent-state exponents of t_opt and Delta b_opt.
void css_scaling(Outcome& o) {
  std::vector<double> ns, topt, dbopt;
  for (double e : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    const int n = static_cast<int>(std::lround(std::pow(10.0, e)));
    const SweepResult r = optimize_detection_time(spin_boson(n, Backend::css_closed_form), around(css_guess(n)));
    ns.push_back(n);
    topt.push_back(r.t_opt);
    dbopt.push_back(r.delta_b_opt);
  }
  const ScalingFit ft = scaling_fit(ns, topt);
  const ScalingFit fb = scaling_fit(ns, dbopt);
  o.detail << "t_opt exponent " << ft.exponent << ", Delta b_opt exponent " << fb.exponent << " ";
  o.require(std::abs(ft.exponent + 0.5) <= 0.03, "t_opt exponent -1/2 +- 0.03");
  o.require(std::abs(fb.exponent + 0.25) <= 0.03, "Delta b_opt exponent -1/4 +- 0.03");
}

// 4: twisted-state exponent and cumulant versus exact Dicke at N = 1000.
void oats_scaling(Outcome& o) {
  std::vector<double> ns, dbopt;
  for (int n : {100, 200, 400, 800}) {
    const SweepResult r = optimize_detection_time(spin_boson(n, Backend::oats_cumulant), around(oats_guess(n)));
    ns.push_back(n);
    dbopt.push_back(r.delta_b_opt);
  }
  const ScalingFit f = scaling_fit(ns, dbopt);
  const int n = 1000;
  const SweepResult cum = optimize_detection_time(spin_boson(n, Backend::oats_cumulant), around(oats_guess(n)));
  const ScenarioEvaluator exact(spin_boson(n, Backend::dicke_exact));
  const double exact_value = exact(cum.t_opt).value;
  const double dev = rel(cum.delta_b_opt, exact_value);
  o.detail << "cumulant exponent " << f.exponent << "; N=1000 at t_opt: cumulant " << cum.delta_b_opt
           << ", exact " << exact_value << " (rel. diff " << dev << ") ";
  o.require(std::abs(f.exponent + 5.0 / 12.0) <= 0.04, "exponent -5/12 +- 0.04");
  o.require(dev <= 0.05, "cumulant within 5% of exact at t_opt");
}

// 5: ratio to the Psi = 0 curve at t_opt + t_res grows exponentially with N.
void exponential_blowup(Outcome& o) {
  const double t_res = 0.3;  // 1 / wc units
  std::vector<double> ns, log_ratio;
  for (int n = 100; n <= 1000; n += 100) {
    Scenario s = spin_boson(n, Backend::css_closed_form);
    const SweepResult r = optimize_detection_time(s, around(css_guess(n)), t_res);
    s.neglect_bath_phase = true;
    const double reference = ScenarioEvaluator(s)(r.t_opt + t_res).value;
    ns.push_back(n);
    log_ratio.push_back(std::log(*r.delta_b_offset / reference));
  }
  const LineFit f = linear_fit(ns, log_ratio);
  o.detail << "wc t_res = " << t_res << ", N in [100, 1000]: slope of log ratio " << f.slope
           << " per qubit, r^2 " << f.r_squared << " ";
  o.require(f.slope > 0.0, "positive slope");
  o.require(f.r_squared > 0.99, "r^2 > 0.99");
}

double ion_optimum_dzc(const IonParameters& p, Backend backend) {
  const SweepResult r = optimize_detection_time(ion_scenario(p, backend), ion_first_lobe(p));
  return ion_dzc_from_delta_b(p, r.delta_b_opt);
}

// 6: ion closed form against the optimized coherent-state pipeline.
void ion_agreement(Outcome& o) {
  double worst = 0.0;
  for (double d_khz : {2.0, 4.0, 6.0, 8.0, 10.0}) {
    IonParameters p;
    p.detuning = 2.0 * pi * d_khz * 1e3;
    worst = std::max(worst, rel(ion_optimum_dzc(p, Backend::css_closed_form), ion_analytic_dzc(p)));
  }
  for (int n : {100, 200, 300, 400, 500}) {
    IonParameters p;
    p.n_qubits = n;
    worst = std::max(worst, rel(ion_optimum_dzc(p, Backend::css_closed_form), ion_analytic_dzc(p)));
  }
  o.detail << "max relative deviation " << worst << " ";
  o.require(worst <= 0.15, "within 15%");
}

// 7: ion twisted state, cumulant backend.
void ion_antisqueezing(Outcome& o) {
  std::vector<double> ns, oats, oats_exact;
  bool above = true;
  for (int n : {50, 75, 100, 150, 200, 300, 500}) {
    IonParameters p;
    p.n_qubits = n;
    const double css = ion_optimum_dzc(p, Backend::css_closed_form);
    p.initial_state = optimally_squeezed(n).initial_state;
    const double cum = ion_optimum_dzc(p, Backend::oats_cumulant);
    above = above && cum > css;
    ns.push_back(n);
    oats.push_back(cum);
    oats_exact.push_back(ion_optimum_dzc(p, Backend::dicke_exact));
  }
  const ScalingFit f = scaling_fit(ns, oats);
  const ScalingFit fe = scaling_fit(ns, oats_exact);
  o.detail << "cumulant exponent " << f.exponent << " (exact Dicke, for reference: " << fe.exponent
           << "); OATS above CSS at every N: " << (above ? "yes" : "no") << " ";
  o.require(std::abs(f.exponent + 1.0 / 6.0) <= 0.05, "cumulant exponent -1/6 +- 0.05");
  o.require(above, "OATS above CSS pointwise");
}

// 8: invariants.
void invariants(Outcome& o) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> chid(0.0, 1.0), psid(-1.2, 1.2);
  std::uniform_int_distribution<int> nd(2, 60);

  double worst_period = 0.0;
  bool lower_bound = true;
  for (int i = 0; i < 200; ++i) {
    const int n = nd(rng);
    const double chi = chid(rng), psi = psid(rng);
    const Uncertainty a = css_uncertainty(n, chi, psi, 1.3, 2.0);
    const Uncertainty b = css_uncertainty(n, chi, psi + pi, 1.3, 2.0);
    const Uncertainty z = css_uncertainty(n, chi, 0.0, 1.3, 2.0);
    if (!a.effectively_infinite) worst_period = std::max(worst_period, rel(b.value, a.value));
    lower_bound = lower_bound && a.value >= z.value * (1.0 - 1e-14);
  }
  const DickeBands twisted = DickeBands::from_amplitudes(prepare_amplitudes({30, TwistedSpinState{0.1, 1.2}}));
  for (double psi : {-0.05, 0.02, 0.07}) {
    const double a = optimize_phase(dicke_phase_family(twisted, 0.2, psi), 1.0, 1.0).value;
    const double b = optimize_phase(dicke_phase_family(twisted, 0.2, psi + pi), 1.0, 1.0).value;
    worst_period = std::max(worst_period, rel(b, a));
  }
  o.detail << "period " << worst_period << "; ";
  o.require(worst_period <= 1e-9, "Delta b(Psi + pi) = Delta b(Psi)");
  o.require(lower_bound, "Delta b >= Delta b at Psi = 0");

  double worst_twist = 0.0;
  for (int n : {6, 12}) {
    const DickeState s0 = dicke_prepare({n, TwistedSpinState{0.4, 0.9}});
    Eigen::VectorXcd u(n + 1);
    for (int k = 0; k <= n; ++k) u(k) = std::polar(1.0, -0.37 * s0.m(k) * s0.m(k));
    const Eigen::MatrixXcd lhs = dicke_evolve(s0, 0.7, 0.3, 0.37).rho();
    const Eigen::MatrixXcd rhs =
        u.asDiagonal() * dicke_evolve(s0, 0.7, 0.3, 0.0).rho() * u.conjugate().asDiagonal();
    worst_twist = std::max(worst_twist, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  o.detail << "U_Psi factorization " << worst_twist << "; ";
  o.require(worst_twist <= 1e-13, "U_Psi factorization");

  // Q is a polynomial of degree N in cos(theta): Gauss-Legendre in cos(theta) is exact.
  const int n = 20;
  const DickeState s = dicke_evolve(dicke_prepare({n, TwistedSpinState{0.3, 1.0}}), 0.2, 0.1, 0.05);
  using GL = boost::math::quadrature::gauss<double, 30>;
  std::vector<double> th, w;
  for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
    for (double sgn : {1.0, -1.0}) {
      if (GL::abscissa()[i] == 0.0 && sgn < 0) continue;
      th.push_back(std::acos(sgn * GL::abscissa()[i]));
      w.push_back(GL::weights()[i]);
    }
  }
  const int ng = 64;
  std::vector<double> gm(ng);
  for (int j = 0; j < ng; ++j) gm[j] = 2.0 * pi * j / ng;
  const Eigen::MatrixXd q = q_function(s, th, gm);
  double total = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) total += w[i] * q.row(static_cast<Eigen::Index>(i)).sum();
  total *= (2.0 * pi / ng) * (n + 1) / (4.0 * pi);
  o.detail << "Q normalization " << total << "; ";
  o.require(std::abs(total - 1.0) <= 1e-3, "Q normalization within 0.1%");

  double worst_filter = 0.0;
  for (const auto& p : {ControlProtocol::free_evolution(), ControlProtocol::ion_drive(18.0, 2.0)}) {
    for (double wv : {0.0, 0.3, 5.0, 18.0, 40.0}) {
      for (double t : {0.1, 1.7, 9.0}) {
        const double fp = f_plus(p, wv, t);
        worst_filter = std::max(worst_filter, std::abs(fp - 2.0 * f_minus(p, wv, t).real()) / std::max(fp, 1e-300));
      }
    }
  }
  o.detail << "F+ vs 2 Re F- " << worst_filter << "; ";
  o.require(worst_filter <= 1e-10, "F+ = 2 Re F-");

  double worst_oracle = 0.0;
  auto compare = [&](const NoiseSpectrum& spec, const ControlProtocol& p, double t) {
    const ChiPsi f = chi_psi(spec, p, t);
    const ChiPsi g = chi_psi_time_domain_oracle(spec, p, t);
    worst_oracle = std::max({worst_oracle, rel(g.chi, f.chi), rel(g.psi, f.psi)});
  };
  for (double t : {0.1, 0.7, 2.5}) compare(ohmic_to_spectrum({1.0, 3.0, 1.0}), ControlProtocol::free_evolution(), t);
  compare(ohmic_to_spectrum({0.5, 1.5, 2.0}), ControlProtocol::free_evolution(), 1.1);
  for (double t : {0.05, 1.3, 4.0}) {
    compare(thermal_to_spectrum({0.3, 20.0, 2.5}), ControlProtocol::ion_drive(18.0, 2.0), t);
  }
  o.detail << "time vs frequency domain " << worst_oracle << " ";
  o.require(worst_oracle <= 1e-6, "time-domain oracle within 1e-6");
}

// 9: noiseless baselines.
void noiseless(Outcome& o) {
  double worst = 0.0;
  for (int n : {1, 10, 1000}) {
    Scenario s;
    s.ensemble = {n, CoherentSpinState{}};
    s.budget = FixedShots{3.0};
    const ScenarioEvaluator e(s);
    for (double t : {1e-3, 0.5, 40.0}) worst = std::max(worst, rel(e(t).value, 1.0 / (t * std::sqrt(3.0 * n))));
  }
  std::vector<double> ns, db;
  for (int n : {50, 100, 200, 400, 1000}) {
    Scenario s;
    s.ensemble = optimally_squeezed(n);
    s.backend = Backend::dicke_exact;
    ns.push_back(n);
    db.push_back(ScenarioEvaluator(s)(1.0).value);
  }
  const ScalingFit f = scaling_fit(ns, db);
  o.detail << "CSS deviation from 1/(t sqrt(N nu)) " << worst << "; OATS exponent " << f.exponent << " ";
  o.require(worst <= 1e-13, "CSS noiseless closed form");
  o.require(std::abs(f.exponent + 5.0 / 6.0) <= 0.05, "OATS exponent -5/6 +- 0.05");
}

}  // namespace

int main() {
  Suite suite;
  suite.run(1, "short-time anchors", 1.0, short_time);
  suite.run(2, "backend oracle equivalence", 10.0, backend_oracle);
  suite.run(3, "CSS scaling", 60.0, css_scaling);
  suite.run(4, "OATS scaling", 600.0, oats_scaling);
  suite.run(5, "exponential blowup at t_opt + t_res", 0.0, exponential_blowup);
  suite.run(6, "ion closed form vs numerical optimum", 60.0, ion_agreement);
  suite.run(7, "ion OATS anti-squeezing", 0.0, ion_antisqueezing);
  suite.run(8, "invariant suite", 0.0, invariants);
  suite.run(9, "noiseless baselines", 0.0, noiseless);
  std::printf("%d of 9 criteria failed\n", suite.failures());
  return suite.failures();
}
