#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ramsey/errors.hpp"
#include "ramsey/runner.hpp"

using namespace ramsey;
using std::numbers::pi;

namespace {

const double kChi0 = std::sqrt(6.0);  // alpha = 1, s = 3, wc = 1

Scenario spin_boson(int n, Backend backend = Backend::css_closed_form) {
  Scenario s;
  s.ensemble = {n, CoherentSpinState{}};
  s.spectrum = ohmic_to_spectrum({1.0, 3.0, 1.0});
  s.protocol = ControlProtocol::free_evolution();
  s.budget = FixedTotalTime{1.0};
  s.backend = backend;
  return s;
}

TimeBracket around(double t) { return {t / 30.0, t * 30.0}; }

}  // namespace

TEST_CASE("noiseless coherent state gives 1 / (t sqrt(N nu))") {
  Scenario s;
  s.ensemble = {50, CoherentSpinState{}};
  s.budget = FixedShots{7.0};
  const std::vector<double> times = log_grid(1e-3, 1e2, 10);
  const SweepResult r = uncertainty_curve(s, times);
  REQUIRE(r.delta_b.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(r.delta_b[i] == doctest::Approx(1.0 / (times[i] * std::sqrt(50.0 * 7.0))).epsilon(1e-13));
    CHECK(r.flags[i] == PointFlag::none);
  }
  CHECK(r.at_boundary);
  CHECK_THROWS_AS(optimize_detection_time(s, {1e-3, 1e2}), NoBracketError);
}

TEST_CASE("time grids are validated") {
  Scenario s;
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(uncertainty_curve(s, bad), DomainError);
  const std::vector<double> nonpositive{0.0, 1.0};
  CHECK_THROWS_AS(uncertainty_curve(s, nonpositive), DomainError);
  CHECK_THROWS_AS(log_grid(1.0, 1.0, 10), DomainError);
  const auto g = log_grid(1e-2, 1e2, 400);
  CHECK(g.size() == 1601);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e2);
}

TEST_CASE("synthetic objective (t - 3)^2 + 1") {
  const TimeMinimum m = minimize_over_time([](double t) { return (t - 3.0) * (t - 3.0) + 1.0; },
                                           {0.1, 100.0});
  CHECK(m.t == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(minimize_over_time([](double t) { return t; }, {0.1, 10.0}), NoBracketError);
}

TEST_CASE("scenario validation") {
  Scenario s = spin_boson(10);
  s.ensemble = {10, TwistedSpinState{0.1, 0.2}};
  CHECK_THROWS_AS(ScenarioEvaluator{s}, DomainError);
  s = spin_boson(10);
  s.budget = FixedShots{0.0};
  CHECK_THROWS_AS(ScenarioEvaluator{s}, DomainError);
  s.budget = FixedTotalTime{-1.0};
  CHECK_THROWS_AS(ScenarioEvaluator{s}, DomainError);
  s = spin_boson(2, Backend::oats_cumulant);
  CHECK_THROWS_AS(ScenarioEvaluator{s}, DomainError);
}

TEST_CASE("fixed total time T = nu t reproduces fixed shots at that time") {
  Scenario a = spin_boson(100);
  Scenario b = a;
  const double t = 0.03;
  const double nu = 12.5;
  a.budget = FixedTotalTime{nu * t};
  b.budget = FixedShots{nu};
  const PointResult pa = ScenarioEvaluator(a)(t);
  const PointResult pb = ScenarioEvaluator(b)(t);
  CHECK(pa.delta_b == doctest::Approx(pb.delta_b).epsilon(1e-14));
  CHECK(pa.value == doctest::Approx(pa.delta_b * std::sqrt(nu * t)).epsilon(1e-14));
  CHECK(pb.value == pb.delta_b);
}

TEST_CASE("spin-boson coherent state, N = 100: single dip, bath phase raises the curve") {
  // Up to wc t = 1, where |Psi| approaches pi/2; later lobes revive.
  const std::vector<double> times = log_grid(1e-3, 1.0, 40);
  Scenario s = spin_boson(100);
  const SweepResult with_psi = uncertainty_curve(s, times);
  s.neglect_bath_phase = true;
  const SweepResult without_psi = uncertainty_curve(s, times);

  CHECK_FALSE(with_psi.at_boundary);
  std::size_t i_min = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (with_psi.delta_b[i] < with_psi.delta_b[i_min]) i_min = i;
    CHECK(with_psi.delta_b[i] >= without_psi.delta_b[i] * (1.0 - 1e-12));
  }
  for (std::size_t i = 1; i <= i_min; ++i) CHECK(with_psi.delta_b[i] < with_psi.delta_b[i - 1]);
  for (std::size_t i = i_min + 1; i < times.size(); ++i) {
    CHECK(with_psi.delta_b[i] > with_psi.delta_b[i - 1]);
  }
  CHECK(with_psi.delta_b.back() > 1e10 * without_psi.delta_b.back());
  CHECK(with_psi.metadata.at("bath_phase") == "included");
  CHECK(without_psi.metadata.at("bath_phase") == "forced_zero");
}

TEST_CASE("exact Dicke backend reproduces the closed form on a curve") {
  const std::vector<double> times = log_grid(1e-3, 0.4, 8);
  const SweepResult css = uncertainty_curve(spin_boson(100), times);
  const SweepResult dicke = uncertainty_curve(spin_boson(100, Backend::dicke_exact), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(dicke.delta_b[i] == doctest::Approx(css.delta_b[i]).epsilon(1e-9));
    CHECK(dicke.flags[i] == PointFlag::none);
  }
  // Near |Psi| = pi/2 the exact signal drowns in roundoff and says so.
  const ScenarioEvaluator exact(spin_boson(100, Backend::dicke_exact));
  CHECK(exact(0.95).flag == PointFlag::below_resolution);
}

TEST_CASE("phase from b never beats the optimized phase") {
  Scenario s = spin_boson(20, Backend::dicke_exact);
  const ScenarioEvaluator best(s);
  for (double b : {0.0, 3.0, 30.0}) {
    s.phase = PhasePolicy::from_b;
    s.b = b;
    const ScenarioEvaluator fixed(s);
    for (double t : {0.05, 0.2}) {
      CHECK(fixed(t).value >= best(t).value * (1.0 - 1e-9));
      CHECK(fixed(t).phi == doctest::Approx(b * t));
    }
  }
  // Coherent state: the closed form is optimal at phi = 0.
  s.b = 0.0;
  s.backend = Backend::css_closed_form;
  const ScenarioEvaluator fixed_css(s);
  CHECK(fixed_css(0.1).value == doctest::Approx(best(0.1).value).epsilon(1e-9));
}

TEST_CASE("large-N coherent optimum follows the asymptotic formulas") {
  const int n = 10000;
  const SweepResult r = optimize_detection_time(spin_boson(n), around(1.0 / (kChi0 * std::sqrt(n))));
  CHECK(r.t_opt * kChi0 * std::sqrt(double(n)) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(r.delta_b_opt * std::sqrt(1.0 / (2.0 * kChi0)) * std::pow(n, 0.25) ==
        doctest::Approx(1.0).epsilon(0.05));
  CHECK_FALSE(r.at_boundary);
  CHECK(r.metadata.count("t_opt_refinement") == 1);
}

TEST_CASE("optimum is stable under coarse-grid refinement") {
  const Scenario s = spin_boson(1000);
  const TimeBracket br = around(1.0 / (kChi0 * std::sqrt(1000.0)));
  const SweepResult a = optimize_detection_time(s, br);
  OptimizeOptions dense;
  dense.points_per_decade = 1600;
  const SweepResult b = optimize_detection_time(s, br, std::nullopt, dense);
  CHECK(b.t_opt == doctest::Approx(a.t_opt).epsilon(1e-5));
  CHECK(b.delta_b_opt == doctest::Approx(a.delta_b_opt).epsilon(1e-10));
}

TEST_CASE("twisted-state optimum near (4/3)^(1/6) / (chi0 N^(5/6))") {
  const int n = 1000;
  Scenario s = spin_boson(n, Backend::oats_cumulant);
  s.ensemble = optimally_squeezed(n);
  const double guess = std::pow(4.0 / 3.0, 1.0 / 6.0) / (kChi0 * std::pow(n, 5.0 / 6.0));
  const SweepResult r = optimize_detection_time(s, around(guess));
  CHECK(r.t_opt == doctest::Approx(guess).epsilon(0.10));
  CHECK(r.metadata.count("theta_rad") == 1);
  CHECK(r.metadata.count("beta_rad") == 1);
}

TEST_CASE("resolution offset reports the value at t_opt + t_res") {
  const Scenario s = spin_boson(300);
  const SweepResult r = optimize_detection_time(s, around(1.0 / (kChi0 * std::sqrt(300.0))), 0.2);
  REQUIRE(r.delta_b_offset.has_value());
  CHECK(*r.delta_b_offset == doctest::Approx(ScenarioEvaluator(s)(r.t_opt + 0.2).value).epsilon(1e-14));
  CHECK(*r.delta_b_offset > r.delta_b_opt);
  CHECK_THROWS_AS(optimize_detection_time(s, {0.01, 1.0}, -1.0), DomainError);
}

TEST_CASE("lost signal is flagged, never silent") {
  Scenario s = spin_boson(2000);
  const std::vector<double> times{0.01, 1.0};
  const SweepResult r = uncertainty_curve(s, times);
  CHECK(r.flags[0] == PointFlag::none);
  CHECK(r.flags[1] == PointFlag::effectively_infinite);
  CHECK(std::isinf(r.delta_b[1]));
  CHECK(r.t_opt == 0.01);
}

TEST_CASE("sweeps are reproducible bit for bit") {
  const std::vector<double> times = log_grid(1e-3, 1.0, 50);
  const SweepResult a = uncertainty_curve(spin_boson(500), times);
  const SweepResult b = uncertainty_curve(spin_boson(500), times);
  CHECK(a.delta_b == b.delta_b);
}

TEST_CASE("scaling fit") {
  const std::vector<double> n{10, 100, 1000, 1e4};
  std::vector<double> v;
  for (double x : n) v.push_back(7.0 * std::pow(x, -0.25));
  const ScalingFit f = scaling_fit(n, v);
  CHECK(f.exponent == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(scaling_fit(two, two), DomainError);
  const std::vector<double> same{5, 5, 5};
  CHECK_THROWS_AS(scaling_fit(same, v), DomainError);
  const std::vector<double> negative{1, -2, 3};
  CHECK_THROWS_AS(scaling_fit(n, negative), DomainError);
}

TEST_CASE("ion parameters, coupling and unit conversion") {
  IonParameters p;
  const double g = ion_coupling(p);
  CHECK(kHbar * g == doctest::Approx(p.u_dk * std::sqrt(kHbar / (2.0 * p.mass * p.n_qubits * p.omega_z)))
                         .epsilon(1e-14));
  const Scenario s = ion_scenario(p, Backend::css_closed_form);
  CHECK(s.protocol.y.parameter() == doctest::Approx(p.omega_z - p.detuning));
  CHECK(std::holds_alternative<FixedShots>(s.budget));
  CHECK(ion_dzc_from_delta_b(p, 2.0) == doctest::Approx(kHbar * 2.0 / p.u_dk));

  IonParameters zero = p;
  zero.detuning = 0.0;
  CHECK_THROWS_AS(ion_scenario(zero, Backend::css_closed_form), DomainError);
  IonParameters far = p;
  far.detuning = p.omega_z;
  CHECK_THROWS_AS(ion_coupling(far), DomainError);
  IonParameters no_mass = p;
  no_mass.mass = 0.0;
  CHECK_THROWS_AS(ion_analytic_dzc(no_mass), DomainError);
}

TEST_CASE("ion closed-form uncertainty") {
  IonParameters p;
  CHECK(ion_analytic_dzc(p) == doctest::Approx(1.0756e-9).epsilon(1e-3));
  IonParameters twice = p;
  twice.n_qubits = 200;
  CHECK(ion_analytic_dzc(twice) / ion_analytic_dzc(p) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  IonParameters shots = p;
  shots.shots = 4.0;
  CHECK(ion_analytic_dzc(shots) == doctest::Approx(0.5 * ion_analytic_dzc(p)).epsilon(1e-14));
}

TEST_CASE("ion coherent state: numerical optimum agrees with the closed form") {
  for (double d_khz : {2.0, 10.0}) {
    IonParameters p;
    p.detuning = 2.0 * pi * d_khz * 1e3;
    const SweepResult r = optimize_detection_time(ion_scenario(p, Backend::css_closed_form), ion_first_lobe(p));
    const double dzc = ion_dzc_from_delta_b(p, r.delta_b_opt);
    CHECK(dzc == doctest::Approx(ion_analytic_dzc(p)).epsilon(0.15));
    CHECK(r.t_opt * p.detuning > 1.0);
  }
}
