#pragma once

#include <cstddef>
#include <vector>

#include "kpplab/levelsets.hpp"
#include "kpplab/nonlinearity.hpp"
#include "kpplab/profile.hpp"
#include "kpplab/solver.hpp"

namespace kpplab {

enum class ComparisonKind { super, sub };

/// Constants for the explicit comparison functions:
///   super: ubar(t,x) = min(u0(x) e^{rho t} / u0(xi1), 1) on [xi1, inf)
///   sub:   ulow(t,x) = max(s - B s^{1+delta_eff}, 0), s = u0(x) e^{rho t}
struct ComparisonBound {
  ComparisonKind kind = ComparisonKind::super;
  double eps = 0.0;
  double rho = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double B = 0.0;
  double delta_eff = 0.0;
  double s1 = 0.0;
};

struct FlatnessRecord {
  double t = 0.0;
  double sup_ux = 0.0;
  double sup_v = 0.0;   // sup |u_x/u|
  double m_plus = 0.0;  // sup of the positive part of u_x/u
  double m_minus = 0.0; // most negative value of u_x/u
};

/// Derives the anchors and coefficients by scanning the analytic tail:
///   super: rho = f'(0)+eps/2, xi1 = first x with |u0''| <= (eps/2) u0 onward
///   sub:   rho in (f'(0)-eps, f'(0)) with rho(1+delta) > f'(0); xi2 from the
///          curvature threshold min(f'(0)-rho, (rho(1+delta)-f'(0))/(2(1+delta)));
///          s1 = min(s0, u0(xi2)); B = max(s1^{-delta}, 2M/(rho(1+delta)-f'(0)))
ComparisonBound derive_comparison_params(const InitialProfile& p, const Nonlinearity& nl,
                                         double eps, ComparisonKind kind);

double supersolution_value(const ComparisonBound& cb, const InitialProfile& p, double t,
                           double x);
double subsolution_value(const ComparisonBound& cb, const InitialProfile& p, double t,
                         double x);

struct SandwichReport {
  bool pass = false;
  double tolerance = 1e-3;
  double worst_upper = 0.0;  // max over (t, x >= xi1) of (u - ubar)+
  double worst_lower = 0.0;  // max over (t, x) of (ulow - u)+
  double t_worst_upper = 0.0, x_worst_upper = 0.0;
  double t_worst_lower = 0.0, x_worst_lower = 0.0;
};

SandwichReport sandwich_report(const RunRecord& rec, const InitialProfile& p,
                               const ComparisonBound& cb_super,
                               const ComparisonBound& cb_sub, double tolerance = 1e-3);

/// Entry/persistence verdict for a per-sample predicate over a trajectory.
struct PersistenceReport {
  bool pass = false;         // entered and never re-exited
  double entry_time = -1.0;  // first time the predicate holds (-1: never)
  bool reexit = false;
  double worst_margin = 0.0;  // largest post-entry violation, log units
  std::size_t n_samples = 0;
};

/// Checks u0(x_max(t)) >= gamma e^{-(f'(0)+eps)t} and
/// u0(x_min(t)) <= Gamma e^{-(f'(0)-eps)t}, evaluated in log coordinates so
/// far-tail values cannot underflow.
PersistenceReport band_membership(const LevelSetTrajectory& traj, const InitialProfile& p,
                                  const Nonlinearity& nl, double eps, double gamma,
                                  double Gamma);

struct RefinedBandReport {
  bool pass = false;
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t n_samples = 0;
};

/// r(t) = u0(x_min(t)) e^{f'(0)t} must stay inside [r_lo, r_hi] over the
/// window [t_a, t_b]. Requires a tail with u0'' = O(u0^{1+beta}), beta >= nu,
/// and a strict upper envelope on f.
RefinedBandReport refined_band(const LevelSetTrajectory& traj, const InitialProfile& p,
                               const Nonlinearity& nl, double r_lo, double r_hi,
                               double t_a, double t_b);

/// Both sides of u0(x_min) e^{(f'(0)-eps)t} <= lambda <= u0(x_min) e^{(f'(0)+eps)t}.
PersistenceReport ode_reduction_residual(const LevelSetTrajectory& traj,
                                         const InitialProfile& p, const Nonlinearity& nl,
                                         double eps);

FlatnessRecord flatness_metrics(const CauchyState& state);
FlatnessRecord flatness_metrics(double t, const Grid& grid, const std::vector<double>& u);
std::vector<FlatnessRecord> flatness_series(const RunRecord& rec);

/// Simpson quadrature of |u0'/u0|^p over [x_blend - blend_width, X]; the
/// integrand vanishes on the plateau to the left.
double log_derivative_lp(const InitialProfile& p, double p_exp, double X);

}  // namespace kpplab
