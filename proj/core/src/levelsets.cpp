#include "kpplab/levelsets.hpp"

#include <cmath>
#include <stdexcept>

namespace kpplab {

void LevelSetTrajectory::append(double t, const Crossing& c) {
  samples.push_back({t, c.x_min, c.x_max, c.empty});
  if (!c.empty && t_first_nonempty < 0.0) t_first_nonempty = t;
}

const LevelSample& LevelSetTrajectory::sample_at(double t) const {
  for (const auto& s : samples)
    if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
  throw std::invalid_argument("no trajectory sample at requested time");
}

Crossing extract_crossings(const std::vector<double>& x, const std::vector<double>& u,
                           double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("level value must lie in (0,1)");
  Crossing c;
  auto record = [&c](double pos) {
    if (c.empty) {
      c.x_min = c.x_max = pos;
      c.empty = false;
    } else {
      c.x_min = std::min(c.x_min, pos);
      c.x_max = std::max(c.x_max, pos);
    }
  };
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double di = u[i] - lambda;
    if (di == 0.0) {
      record(x[i]);  // tie rule: the node itself is the crossing
      continue;
    }
    if (i + 1 == u.size()) break;
    const double dj = u[i + 1] - lambda;
    if (dj == 0.0) continue;  // handled at the next node
    if ((di < 0.0) != (dj < 0.0))
      record(x[i] + di / (di - dj) * (x[i + 1] - x[i]));
  }
  return c;
}

double average_speed(const LevelSetTrajectory& traj, double t1, double t2) {
  if (!(t2 > t1)) throw std::invalid_argument("average_speed needs t2 > t1");
  const LevelSample& a = traj.sample_at(t1);
  const LevelSample& b = traj.sample_at(t2);
  if (a.empty || b.empty)
    throw std::invalid_argument("average_speed: empty level set at an endpoint");
  return (b.x_min - a.x_min) / (t2 - t1);
}

GrowthFit fit_growth_law(const LevelSetTrajectory& traj, GrowthLaw law, double t_a,
                         double t_b) {
  std::vector<double> zs, ys;
  for (const auto& s : traj.samples) {
    if (s.empty || s.t < t_a || s.t > t_b) continue;
    double z = 0.0, y = 0.0;
    switch (law) {
      case GrowthLaw::linear:
        z = s.t;
        y = s.x_min;
        break;
      case GrowthLaw::t_log_t:
        if (!(s.t > 0.0)) continue;
        z = s.t * std::log(s.t);
        y = s.x_min;
        break;
      case GrowthLaw::power:
        if (!(s.t > 0.0 && s.x_min > 0.0))
          throw std::invalid_argument("power fit needs positive t and positions");
        z = std::log(s.t);
        y = std::log(s.x_min);
        break;
      case GrowthLaw::exponential:
        if (!(s.x_min > 1.0))
          throw std::invalid_argument("exponential fit needs positions > 1");
        z = s.t;
        y = std::log(s.x_min);
        break;
      case GrowthLaw::double_exponential:
        if (!(s.x_min > std::exp(1.0)))
          throw std::invalid_argument("double-exponential fit needs positions > e");
        z = s.t;
        y = std::log(std::log(s.x_min));
        break;
    }
    zs.push_back(z);
    ys.push_back(y);
  }
  const std::size_t n = zs.size();
  if (n < 10) throw std::invalid_argument("fit window holds fewer than 10 samples");

  double mz = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mz += zs[i];
    my += ys[i];
  }
  mz /= n;
  my /= n;
  double szz = 0.0, szy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dz = zs[i] - mz, dy = ys[i] - my;
    szz += dz * dz;
    szy += dz * dy;
    syy += dy * dy;
  }
  GrowthFit fit;
  fit.law = law;
  fit.n = n;
  fit.slope = szy / szz;
  fit.intercept = my - fit.slope * mz;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.slope * zs[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::string to_string(GrowthLaw law) {
  switch (law) {
    case GrowthLaw::linear:
      return "linear";
    case GrowthLaw::t_log_t:
      return "t_log_t";
    case GrowthLaw::power:
      return "power";
    case GrowthLaw::exponential:
      return "exponential";
    case GrowthLaw::double_exponential:
      return "double_exponential";
  }
  return "?";
}

GrowthLaw growth_law_from_string(const std::string& s) {
  if (s == "linear") return GrowthLaw::linear;
  if (s == "t_log_t") return GrowthLaw::t_log_t;
  if (s == "power") return GrowthLaw::power;
  if (s == "exponential") return GrowthLaw::exponential;
  if (s == "double_exponential") return GrowthLaw::double_exponential;
  throw std::invalid_argument("unknown growth law: " + s);
}

}  // namespace kpplab
