#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kpplab/fronts.hpp"
#include "kpplab/theory.hpp"

using namespace kpplab;

namespace {

InitialProfile algebraic_profile(double alpha = 2.0, double C = 1.0,
                                 double x_blend = 10.0) {
  TailSpec t;
  t.family = TailFamily::algebraic;
  t.alpha = alpha;
  t.C = C;
  return InitialProfile::make(t, 0.9, x_blend, 2.0);
}

LevelSetTrajectory ideal_trajectory(const InitialProfile& p, double lambda, double r,
                                    double t0, double t1, double dt) {
  LevelSetTrajectory tr;
  tr.lambda = lambda;
  for (double t = t0; t <= t1 + 1e-12; t += dt) {
    Crossing c;
    c.x_min = c.x_max = p.invert_tail(lambda * std::exp(-r * t));
    c.empty = false;
    tr.append(t, c);
  }
  return tr;
}

RunRecord accelerating_run(const InitialProfile& p, const Nonlinearity& nl, double t_end,
                           std::vector<double> levels) {
  const Grid g = Grid::stretched_with_uniform_head(-10.0, 15.0, 500.0, 0.04, 1.0);
  SolverConfig cfg;
  cfg.dt_obs = 0.25;
  RunOptions opts;
  opts.levels = std::move(levels);
  opts.record_snapshots = true;
  return run(p, nl, cfg, g, t_end, opts);
}

}  // namespace

TEST_CASE("supersolution anchor solves the tail curvature inequality") {
  const InitialProfile p = algebraic_profile(2.0, 1.0, 5.0);
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  const ComparisonBound cb = derive_comparison_params(p, nl, 0.2, ComparisonKind::super);
  // |u0''| <= 0.1 u0 on the x^{-2} tail means 6 x^{-2} <= 0.1.
  CHECK(cb.rho == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(cb.xi1 == doctest::Approx(std::sqrt(60.0)).epsilon(1e-6));
  CHECK(p.tail_curvature_ratio(cb.xi1) <= 0.1 * (1.0 + 1e-9));
}

TEST_CASE("subsolution constants satisfy the structural constraints") {
  const InitialProfile p = algebraic_profile(2.0, 1.0, 5.0);
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  const ComparisonBound cb = derive_comparison_params(p, nl, 0.2, ComparisonKind::sub);
  CHECK(cb.rho == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(cb.rho * (1.0 + cb.delta_eff) > 1.0);
  CHECK(cb.rho > 1.0 - 0.2);
  CHECK(cb.rho < 1.0);
  CHECK(cb.s1 <= 1.0);
  CHECK(cb.s1 == doctest::Approx(p.value(cb.xi2)).epsilon(1e-12));
  const double b_expected = std::max(std::pow(cb.s1, -cb.delta_eff),
                                     2.0 * nl.m_low() / (cb.rho * 2.0 - 1.0));
  CHECK(cb.B == doctest::Approx(b_expected).epsilon(1e-12));
  // Worked arithmetic case for the coefficient formula itself.
  CHECK(std::max(std::pow(0.4, -1.0), 2.0 * 1.0 / (0.9 * 2.0 - 1.0)) ==
        doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("comparison-function values: worked examples") {
  const InitialProfile p = algebraic_profile();
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  const ComparisonBound sup = derive_comparison_params(p, nl, 0.2, ComparisonKind::super);
  CHECK(supersolution_value(sup, p, 0.0, sup.xi1) == doctest::Approx(1.0).epsilon(1e-12));
  const double v = supersolution_value(sup, p, 0.0, 2.0 * sup.xi1);
  CHECK(v == doctest::Approx(0.25).epsilon(1e-9));  // x^{-2} tail: quarter at 2x
  CHECK(v < 1.0);
  CHECK(supersolution_value(sup, p, 50.0, sup.xi1 + 1.0) == 1.0);
  CHECK_THROWS_AS(supersolution_value(sup, p, 0.0, sup.xi1 - 1.0), std::invalid_argument);

  ComparisonBound sub;
  sub.kind = ComparisonKind::sub;
  sub.rho = 0.9;
  sub.B = 2.5;
  sub.delta_eff = 1.0;
  sub.s1 = 0.4;
  CHECK(subsolution_value(sub, p, 0.0, 100.0) ==
        doctest::Approx(1e-4 - 2.5e-8).epsilon(1e-10));
  // s >= s1 regime gives zero once B >= s1^{-delta}.
  CHECK(subsolution_value(sub, p, 0.0, p.invert_tail(0.5 * 0.01)) >= 0.0);
  const double s_big_t = std::log(1.0 / 1e-4) / 0.9 + 5.0;
  CHECK(subsolution_value(sub, p, s_big_t, 100.0) == 0.0);
}

TEST_CASE("sandwich margins vanish identically at t=0") {
  const InitialProfile p = algebraic_profile();
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  const ComparisonBound cs = derive_comparison_params(p, nl, 0.4, ComparisonKind::super);
  const ComparisonBound cb = derive_comparison_params(p, nl, 0.4, ComparisonKind::sub);
  RunRecord rec;
  const Grid g = Grid::build(GridKind::uniform, 0.0, 200.0, 2000);
  Snapshot s;
  s.t = 0.0;
  s.grid = std::make_shared<Grid>(g);
  s.u.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s.u[i] = p.value(g.node(i));
  rec.snapshots.push_back(std::move(s));
  const SandwichReport rep = sandwich_report(rec, p, cs, cb);
  CHECK(rep.pass);
  CHECK(rep.worst_upper == 0.0);
  CHECK(rep.worst_lower == 0.0);
}

TEST_CASE("band, sandwich and flatness checks on an accelerating algebraic run") {
  const InitialProfile p = algebraic_profile();
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  const RunRecord rec = accelerating_run(p, nl, 15.0, {0.5});
  REQUIRE(rec.completed);
  const auto& tr = rec.trajectories[0];

  SUBCASE("band membership enters and persists") {
    const PersistenceReport rep = band_membership(tr, p, nl, 0.2, 0.5, 0.5);
    CHECK(rep.pass);
    CHECK(rep.entry_time >= 0.0);
    // Wider band never enters later.
    const PersistenceReport wide = band_membership(tr, p, nl, 0.4, 0.5, 0.5);
    CHECK(wide.pass);
    CHECK(wide.entry_time <= rep.entry_time + 1e-12);
  }

  SUBCASE("sandwich holds; corrupting the coefficient is detected") {
    const ComparisonBound cs = derive_comparison_params(p, nl, 0.4, ComparisonKind::super);
    const ComparisonBound cb = derive_comparison_params(p, nl, 0.4, ComparisonKind::sub);
    const SandwichReport rep = sandwich_report(rec, p, cs, cb);
    CHECK(rep.pass);
    CHECK(rep.worst_upper < 1e-3);
    CHECK(rep.worst_lower < 1e-3);

    // With auto-derived constants rho < f'(0), so the bound carries large
    // slack; the corruption must push the subsolution peak 1/(4B) above 1
    // before a violation can register.
    ComparisonBound bad = cb;
    bad.B = cb.B / 1000.0;
    const SandwichReport broken = sandwich_report(rec, p, cs, bad);
    CHECK_FALSE(broken.pass);
    CHECK(broken.worst_lower > 1e-3);
  }

  SUBCASE("ode reduction entry is monotone in eps") {
    const PersistenceReport tight = ode_reduction_residual(tr, p, nl, 0.2);
    const PersistenceReport loose = ode_reduction_residual(tr, p, nl, 0.5);
    CHECK(tight.pass);
    CHECK(loose.pass);
    CHECK(loose.entry_time <= tight.entry_time + 1e-12);
  }

  SUBCASE("flatness series contracts") {
    const std::vector<FlatnessRecord> fl = flatness_series(rec);
    REQUIRE(fl.size() == rec.snapshots.size());
    for (std::size_t k = 1; k < fl.size(); ++k) {
      CHECK(fl[k].m_plus <= fl[k - 1].m_plus + 1e-6);
      CHECK(fl[k].m_minus >= fl[k - 1].m_minus - 1e-6);
      CHECK(fl[k].sup_v >= std::max(fl[k].m_plus, -fl[k].m_minus) - 1e-15);
    }
    CHECK(fl.back().sup_v < 0.5 * fl[fl.size() / 4].sup_v + 1e-12);
  }
}

TEST_CASE("ideal ODE-reduction trajectory is a zero-slack member") {
  const InitialProfile p = algebraic_profile();
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  const LevelSetTrajectory tr = ideal_trajectory(p, 0.5, 1.0, 4.0, 30.0, 0.5);

  const PersistenceReport band = band_membership(tr, p, nl, 0.05, 0.5, 0.5);
  CHECK(band.pass);
  CHECK(band.entry_time == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_FALSE(band.reexit);

  const PersistenceReport ode = ode_reduction_residual(tr, p, nl, 0.1);
  CHECK(ode.pass);
  CHECK(ode.entry_time == doctest::Approx(4.0).epsilon(1e-12));

  const RefinedBandReport ref = refined_band(tr, p, nl, 0.4, 0.6, 5.0, 30.0);
  CHECK(ref.pass);
  CHECK(ref.r_min == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ref.r_max == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("refined band rejects tails without the curvature hypothesis") {
  TailSpec t;
  t.family = TailFamily::tlnt;
  t.alpha = 1.0;
  t.C = 1.0;
  const InitialProfile p = InitialProfile::make(t, 0.9, 10.0, 2.0);
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  const LevelSetTrajectory tr = ideal_trajectory(p, 0.5, 1.0, 6.0, 12.0, 0.5);
  CHECK_THROWS_AS(refined_band(tr, p, nl, 0.1, 10.0, 6.0, 12.0), std::invalid_argument);
}

TEST_CASE("exponential tails violate the band for large times") {
  TailSpec t;
  t.family = TailFamily::exponential;
  t.alpha = 0.5;
  t.C = 1.0;
  const InitialProfile p = InitialProfile::make(t, 0.9, 5.0, 2.0);
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  // Linearly moving level set at the front speed 2.5 = alpha + f'(0)/alpha.
  LevelSetTrajectory tr;
  tr.lambda = 0.5;
  for (double tt = 0.0; tt <= 80.0; tt += 1.0) {
    Crossing c;
    c.x_min = c.x_max = 10.0 + 2.5 * tt;
    c.empty = false;
    tr.append(tt, c);
  }
  const PersistenceReport rep = band_membership(tr, p, nl, 0.2, 0.5, 0.5);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("flatness metrics: constant, monotone, and front states") {
  const Grid g = Grid::build(GridKind::uniform, 0.0, 10.0, 100);

  std::vector<double> flat(g.size(), 0.7);
  const FlatnessRecord fr = flatness_metrics(0.0, g, flat);
  CHECK(fr.sup_ux <= 1e-14);
  CHECK(fr.sup_v <= 1e-14);
  CHECK(fr.m_plus <= 1e-14);
  CHECK(fr.m_minus >= -1e-14);

  std::vector<double> dec(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dec[i] = 0.9 * std::exp(-0.3 * g.node(i));
  const FlatnessRecord fd = flatness_metrics(0.0, g, dec);
  CHECK(fd.m_plus == 0.0);
  CHECK(fd.m_minus == doctest::Approx(-fd.sup_v).epsilon(1e-12));
  CHECK(fd.sup_v == doctest::Approx(0.3).epsilon(1e-3));

  const FrontProfile fp = solve_front(Nonlinearity::logistic(1.0), 2.5);
  const Grid fg = Grid::build(GridKind::uniform, fp.z.front(), fp.z.back(),
                              static_cast<int>(fp.z.size()) - 1);
  const FlatnessRecord ff = flatness_metrics(0.0, fg, fp.phi);
  CHECK(ff.sup_v == doctest::Approx(0.5).epsilon(0.02));
  CHECK(ff.m_plus == 0.0);
}

TEST_CASE("log-derivative quadrature converges for slow tails") {
  const InitialProfile p = algebraic_profile();
  const double i4 = log_derivative_lp(p, 2.0, 1e4);
  const double i5 = log_derivative_lp(p, 2.0, 1e5);
  const double i6 = log_derivative_lp(p, 2.0, 1e6);
  CHECK(i5 >= i4);
  CHECK(i6 >= i5);
  // Tail contribution of (2/x)^2 beyond X is 4/X: the increments shrink.
  CHECK(i6 - i5 < i5 - i4);
  CHECK(i6 - i5 == doctest::Approx(4.0 / 1e5 - 4.0 / 1e6).epsilon(1e-3));
}
