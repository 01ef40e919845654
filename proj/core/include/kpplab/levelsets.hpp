#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kpplab {

struct Crossing {
  double x_min = 0.0;
  double x_max = 0.0;
  bool empty = true;
};

struct LevelSample {
  double t = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  bool empty = true;
};

/// Time series of the extreme crossing positions of one level value.
/// Append-only during a run, read-only afterwards.
struct LevelSetTrajectory {
  double lambda = 0.0;
  std::vector<LevelSample> samples;
  double t_first_nonempty = -1.0;

  void append(double t, const Crossing& c);
  const LevelSample& sample_at(double t) const;  // exact time lookup
};

/// Scans nodal values for sign changes of u - lambda; crossings are located
/// by linear interpolation between the bracketing nodes. A nodal value
/// exactly equal to lambda returns that node position.
Crossing extract_crossings(const std::vector<double>& x, const std::vector<double>& u,
                           double lambda);

double average_speed(const LevelSetTrajectory& traj, double t1, double t2);

enum class GrowthLaw { linear, t_log_t, power, exponential, double_exponential };

/// Ordinary least squares in the law's transformed coordinates:
///   linear:              x       vs t
///   t_log_t:             x       vs t ln t
///   power:               ln x    vs ln t    (slope = 1/alpha_hat, intercept = ln K_hat)
///   exponential:         ln x    vs t
///   double_exponential:  ln ln x vs t
struct GrowthFit {
  GrowthLaw law = GrowthLaw::linear;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

GrowthFit fit_growth_law(const LevelSetTrajectory& traj, GrowthLaw law, double t_a, double t_b);

std::string to_string(GrowthLaw law);
GrowthLaw growth_law_from_string(const std::string& s);

}  // namespace kpplab
