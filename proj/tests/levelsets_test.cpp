#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kpplab/levelsets.hpp"

using namespace kpplab;

namespace {

LevelSetTrajectory traj_from(double lambda,
                             const std::vector<std::pair<double, double>>& txs) {
  LevelSetTrajectory tr;
  tr.lambda = lambda;
  for (const auto& [t, x] : txs) {
    Crossing c;
    c.x_min = c.x_max = x;
    c.empty = false;
    tr.append(t, c);
  }
  return tr;
}

}  // namespace

TEST_CASE("crossing extraction interpolates linearly") {
  // u = 0.8, 0.4 on x = 1, 2: level 0.6 sits halfway.
  const Crossing c = extract_crossings({1.0, 2.0}, {0.8, 0.4}, 0.6);
  REQUIRE_FALSE(c.empty);
  CHECK(c.x_min == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c.x_max == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("level never attained gives an empty crossing") {
  const Crossing c = extract_crossings({0.0, 1.0, 2.0}, {0.3, 0.2, 0.1}, 0.5);
  CHECK(c.empty);
  CHECK_THROWS_AS(extract_crossings({0.0, 1.0}, {0.5, 0.4}, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(extract_crossings({0.0, 1.0}, {0.5, 0.4}, 0.0), std::invalid_argument);
}

TEST_CASE("exact nodal hit uses the node position, not interpolation") {
  const Crossing c = extract_crossings({0.0, 1.0, 2.0}, {0.9, 0.5, 0.1}, 0.5);
  REQUIRE_FALSE(c.empty);
  CHECK(c.x_min == 1.0);
  CHECK(c.x_max == 1.0);
}

TEST_CASE("multiple crossings report the extreme positions") {
  // Dips below then recovers then decays: crossings at three interior points.
  const std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> u = {0.9, 0.3, 0.7, 0.6, 0.1};
  const Crossing c = extract_crossings(x, u, 0.5);
  REQUIRE_FALSE(c.empty);
  CHECK(c.x_min == doctest::Approx(0.0 + 0.4 / 0.6).epsilon(1e-14));
  CHECK(c.x_max == doctest::Approx(3.0 + 0.1 / 0.5).epsilon(1e-14));
}

TEST_CASE("trajectory bookkeeping and first nonempty time") {
  LevelSetTrajectory tr;
  tr.lambda = 0.5;
  Crossing none;
  tr.append(0.0, none);
  Crossing hit;
  hit.x_min = hit.x_max = 2.0;
  hit.empty = false;
  tr.append(1.0, hit);
  CHECK(tr.t_first_nonempty == 1.0);
  CHECK(tr.sample_at(1.0).x_min == 2.0);
  CHECK_THROWS_AS(tr.sample_at(0.5), std::invalid_argument);
}

TEST_CASE("average speed on a synthetic linear trajectory") {
  const auto tr = traj_from(0.5, {{0.0, 3.0}, {1.0, 5.0}, {2.0, 7.0}});
  CHECK(average_speed(tr, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(average_speed(tr, 1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(average_speed(tr, 2.0, 1.0), std::invalid_argument);

  LevelSetTrajectory with_gap = tr;
  Crossing none;
  with_gap.append(3.0, none);
  CHECK_THROWS_AS(average_speed(with_gap, 0.0, 3.0), std::invalid_argument);
}

TEST_CASE("growth-law fits recover synthetic exact laws") {
  std::vector<std::pair<double, double>> lin, tlt, pow_, expo, dexp;
  for (int k = 0; k < 40; ++k) {
    const double t = 1.0 + 0.25 * k;
    lin.emplace_back(t, 1.0 + 2.5 * t);
    tlt.emplace_back(t, 0.7 + 1.5 * t * std::log(t));
    pow_.emplace_back(t, 3.0 * std::pow(t, 2.0));
    expo.emplace_back(t, 4.0 * std::exp(0.5 * t));
    dexp.emplace_back(t, std::exp(2.0 * std::exp(0.3 * t)));
  }
  const GrowthFit fl = fit_growth_law(traj_from(0.5, lin), GrowthLaw::linear, 1.0, 11.0);
  CHECK(fl.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fl.intercept == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fl.r2 == doctest::Approx(1.0).epsilon(1e-12));

  const GrowthFit ft = fit_growth_law(traj_from(0.5, tlt), GrowthLaw::t_log_t, 1.0, 11.0);
  CHECK(ft.slope == doctest::Approx(1.5).epsilon(1e-12));

  // power: ln x = ln K + (1/alpha) ln t with x = K t^{1/alpha}.
  const GrowthFit fp = fit_growth_law(traj_from(0.5, pow_), GrowthLaw::power, 1.0, 11.0);
  CHECK(fp.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::exp(fp.intercept) == doctest::Approx(3.0).epsilon(1e-10));

  const GrowthFit fe =
      fit_growth_law(traj_from(0.5, expo), GrowthLaw::exponential, 1.0, 11.0);
  CHECK(fe.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(fe.intercept) == doctest::Approx(4.0).epsilon(1e-10));

  const GrowthFit fd =
      fit_growth_law(traj_from(0.5, dexp), GrowthLaw::double_exponential, 1.0, 11.0);
  CHECK(fd.slope == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::exp(fd.intercept) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fit preconditions: sample count and positivity") {
  std::vector<std::pair<double, double>> few;
  for (int k = 0; k < 9; ++k) few.emplace_back(1.0 + k, 2.0 + k);
  CHECK_THROWS_AS(fit_growth_law(traj_from(0.5, few), GrowthLaw::linear, 0.0, 100.0),
                  std::invalid_argument);

  std::vector<std::pair<double, double>> neg;
  for (int k = 0; k < 20; ++k) neg.emplace_back(1.0 + k, -5.0 + k);
  CHECK_THROWS_AS(fit_growth_law(traj_from(0.5, neg), GrowthLaw::power, 0.0, 100.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_growth_law(traj_from(0.5, neg), GrowthLaw::exponential, 0.0, 100.0),
                  std::invalid_argument);
}

TEST_CASE("level sets of a decreasing profile are nested across levels") {
  // For a monotone nonincreasing u, a smaller level crosses farther right.
  std::vector<double> x(200), u(200);
  for (int i = 0; i < 200; ++i) {
    x[i] = 0.1 * i;
    u[i] = 0.95 * std::exp(-0.3 * x[i]);
  }
  double prev = -1.0;
  for (double lam : {0.8, 0.6, 0.4, 0.2, 0.05}) {
    const Crossing c = extract_crossings(x, u, lam);
    REQUIRE_FALSE(c.empty);
    CHECK(c.x_min > prev);
    CHECK(c.x_min == doctest::Approx(c.x_max).epsilon(1e-14));
    prev = c.x_min;
  }
}
