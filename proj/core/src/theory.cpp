#include "kpplab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpplab {

namespace {

// Smallest x >= x_blend with |u0''| <= target * u0 from x onward, located on
// the analytic tail (the curvature ratio decreases for every slow family).
double curvature_anchor(const InitialProfile& p, double target, const char* who) {
  const double x0 = p.x_blend();
  if (p.tail_spec().family == TailFamily::exponential) {
    const double a = p.tail_spec().alpha;
    if (a * a <= target) return x0;
    throw std::invalid_argument(std::string(who) +
                                ": exponential tail curvature never drops below the "
                                "required threshold");
  }
  const int n = 4096;
  const double x_end = 1e12;
  double prev_x = x0, prev_r = p.tail_curvature_ratio(x0);
  if (prev_r <= target) return x0;
  for (int k = 1; k < n; ++k) {
    const double x = x0 * std::pow(x_end / x0, static_cast<double>(k) / (n - 1));
    const double r = p.tail_curvature_ratio(x);
    if (r <= target) {
      // Bisect the threshold crossing in [prev_x, x].
      double lo = prev_x, hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (p.tail_curvature_ratio(mid) <= target ? hi : lo) = mid;
        if (hi - lo < 1e-12 * hi) break;
      }
      // Persistence check on the remaining samples.
      for (int j = k + 1; j < n; ++j) {
        const double xj = x0 * std::pow(x_end / x0, static_cast<double>(j) / (n - 1));
        if (p.tail_curvature_ratio(xj) > target * (1.0 + 1e-9))
          throw std::invalid_argument(std::string(who) +
                                      ": tail curvature bound does not persist");
      }
      return hi;
    }
    prev_x = x;
    prev_r = r;
  }
  throw std::invalid_argument(std::string(who) +
                              ": no anchor with the required curvature bound found "
                              "below x=1e12");
}

}  // namespace

ComparisonBound derive_comparison_params(const InitialProfile& p, const Nonlinearity& nl,
                                         double eps, ComparisonKind kind) {
  const double f0 = nl.fprime0();
  if (!(eps > 0.0 && eps < f0))
    throw std::invalid_argument("eps must lie in (0, f'(0))");
  ComparisonBound cb;
  cb.kind = kind;
  cb.eps = eps;
  if (kind == ComparisonKind::super) {
    cb.rho = f0 + 0.5 * eps;
    cb.xi1 = curvature_anchor(p, 0.5 * eps, "supersolution");
    return cb;
  }

  double de = nl.delta();
  if (auto beta = p.tail_beta()) de = std::min(de, *beta);
  cb.delta_eff = de;
  const double lo = std::max(f0 - eps, f0 / (1.0 + de));
  cb.rho = std::max(f0 - 0.5 * eps, 0.5 * (lo + f0));
  if (!(cb.rho > f0 - eps && cb.rho < f0 && cb.rho * (1.0 + de) > f0))
    throw std::invalid_argument(
        "subsolution: no growth exponent satisfies rho in (f'(0)-eps, f'(0)) with "
        "rho(1+delta) > f'(0)");
  const double thr =
      std::min(f0 - cb.rho, (cb.rho * (1.0 + de) - f0) / (2.0 * (1.0 + de)));
  cb.xi2 = curvature_anchor(p, thr, "subsolution");
  const double kappa = p.value(cb.xi2);  // inf over (-inf, xi2] by monotonicity
  cb.s1 = std::min(nl.s0(), kappa);
  cb.B = std::max(std::pow(cb.s1, -de),
                  2.0 * nl.m_low() / (cb.rho * (1.0 + de) - f0));
  return cb;
}

double supersolution_value(const ComparisonBound& cb, const InitialProfile& p, double t,
                           double x) {
  if (cb.kind != ComparisonKind::super)
    throw std::invalid_argument("supersolution_value needs a super bound");
  if (x < cb.xi1 - 1e-12 * std::max(1.0, std::abs(cb.xi1)))
    throw std::invalid_argument("supersolution formula is valid only on [xi1, inf)");
  const double le = p.log_value(x) - p.log_value(cb.xi1) + cb.rho * t;
  return le >= 0.0 ? 1.0 : std::exp(le);
}

double subsolution_value(const ComparisonBound& cb, const InitialProfile& p, double t,
                         double x) {
  if (cb.kind != ComparisonKind::sub)
    throw std::invalid_argument("subsolution_value needs a sub bound");
  const double ls = p.log_value(x) + cb.rho * t;
  if (ls > 60.0) return 0.0;  // far above s1: g(s) <= 0
  const double s = std::exp(ls);
  return std::max(s - cb.B * std::pow(s, 1.0 + cb.delta_eff), 0.0);
}

SandwichReport sandwich_report(const RunRecord& rec, const InitialProfile& p,
                               const ComparisonBound& cb_super,
                               const ComparisonBound& cb_sub, double tolerance) {
  if (cb_super.kind != ComparisonKind::super || cb_sub.kind != ComparisonKind::sub)
    throw std::invalid_argument("sandwich_report needs one super and one sub bound");
  SandwichReport rep;
  rep.tolerance = tolerance;
  for (const auto& snap : rec.snapshots) {
    const Grid& g = *snap.grid;
    for (std::size_t i = 0; i < snap.u.size(); ++i) {
      const double x = g.node(i);
      const double u = snap.u[i];
      if (x >= cb_super.xi1) {
        const double m = u - supersolution_value(cb_super, p, snap.t, x);
        if (m > rep.worst_upper) {
          rep.worst_upper = m;
          rep.t_worst_upper = snap.t;
          rep.x_worst_upper = x;
        }
      }
      const double m = subsolution_value(cb_sub, p, snap.t, x) - u;
      if (m > rep.worst_lower) {
        rep.worst_lower = m;
        rep.t_worst_lower = snap.t;
        rep.x_worst_lower = x;
      }
    }
  }
  rep.pass = rep.worst_upper < tolerance && rep.worst_lower < tolerance;
  return rep;
}

namespace {

// Shared entry/persistence bookkeeping: violation(sample) <= 0 means member.
// The statements being checked are asymptotic, so the entry time T* is the
// start of the final membership streak (the first time after which membership
// never lapses); earlier transient memberships are reported as re-exits.
template <typename Violation>
PersistenceReport persistence_scan(const LevelSetTrajectory& traj, Violation violation) {
  PersistenceReport rep;
  rep.n_samples = traj.samples.size();
  double first_member = -1.0, streak_start = -1.0;
  for (const auto& s : traj.samples) {
    const double v = s.empty ? 1e300 : violation(s);
    const bool member = v <= 1e-12;
    if (member) {
      if (first_member < 0.0) first_member = s.t;
      if (streak_start < 0.0) streak_start = s.t;
    } else {
      streak_start = -1.0;
      if (first_member >= 0.0) rep.worst_margin = std::max(rep.worst_margin, v);
    }
  }
  rep.pass = streak_start >= 0.0;
  rep.entry_time = rep.pass ? streak_start : first_member;
  rep.reexit = first_member >= 0.0 && first_member < streak_start;
  if (!rep.pass) rep.reexit = first_member >= 0.0;
  return rep;
}

}  // namespace

PersistenceReport band_membership(const LevelSetTrajectory& traj, const InitialProfile& p,
                                  const Nonlinearity& nl, double eps, double gamma,
                                  double Gamma) {
  const double f0 = nl.fprime0();
  if (!(eps > 0.0 && eps < f0))
    throw std::invalid_argument("eps must lie in (0, f'(0))");
  const double lg = std::log(gamma), lG = std::log(Gamma);
  return persistence_scan(traj, [&](const LevelSample& s) {
    const double low = (lg - (f0 + eps) * s.t) - p.log_value(s.x_max);
    const double high = p.log_value(s.x_min) - (lG - (f0 - eps) * s.t);
    return std::max(low, high);
  });
}

RefinedBandReport refined_band(const LevelSetTrajectory& traj, const InitialProfile& p,
                               const Nonlinearity& nl, double r_lo, double r_hi,
                               double t_a, double t_b) {
  const auto beta = p.tail_beta();
  if (!beta)
    throw std::invalid_argument(
        "refined band needs a tail with u0'' = O(u0^{1+beta})");
  if (!nl.mu() || !nl.nu())
    throw std::invalid_argument("refined band needs a strict upper envelope (mu, nu)");
  if (*beta < *nl.nu() - 1e-12)
    throw std::invalid_argument("refined band needs beta >= nu");
  RefinedBandReport rep;
  rep.r_min = 1e300;
  rep.r_max = -1e300;
  const double f0 = nl.fprime0();
  for (const auto& s : traj.samples) {
    if (s.empty || s.t < t_a - 1e-12 || s.t > t_b + 1e-12) continue;
    const double r = std::exp(p.log_value(s.x_min) + f0 * s.t);
    rep.r_min = std::min(rep.r_min, r);
    rep.r_max = std::max(rep.r_max, r);
    ++rep.n_samples;
  }
  rep.pass = rep.n_samples > 0 && rep.r_min >= r_lo && rep.r_max <= r_hi;
  return rep;
}

PersistenceReport ode_reduction_residual(const LevelSetTrajectory& traj,
                                         const InitialProfile& p, const Nonlinearity& nl,
                                         double eps) {
  const double f0 = nl.fprime0();
  if (!(eps > 0.0 && eps < f0))
    throw std::invalid_argument("eps must lie in (0, f'(0))");
  const double ll = std::log(traj.lambda);
  return persistence_scan(traj, [&](const LevelSample& s) {
    const double lu = p.log_value(s.x_min);
    const double low = (lu + (f0 - eps) * s.t) - ll;   // must be <= 0
    const double high = ll - (lu + (f0 + eps) * s.t);  // must be <= 0
    return std::max(low, high);
  });
}

FlatnessRecord flatness_metrics(double t, const Grid& grid,
                                const std::vector<double>& u) {
  if (u.size() < 3) throw std::invalid_argument("flatness metrics need >= 3 nodes");
  FlatnessRecord rec;
  rec.t = t;
  double vmax = 0.0, vmin = 0.0, sup_ux = 0.0, sup_v = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double hm = grid.node(i) - grid.node(i - 1);
    const double hp = grid.node(i + 1) - grid.node(i);
    const double ux = (hm * hm * u[i + 1] - hp * hp * u[i - 1] +
                       (hp * hp - hm * hm) * u[i]) /
                      (hm * hp * (hm + hp));
    sup_ux = std::max(sup_ux, std::abs(ux));
    if (u[i] <= 0.0) continue;
    const double v = ux / u[i];
    sup_v = std::max(sup_v, std::abs(v));
    vmax = std::max(vmax, v);
    vmin = std::min(vmin, v);
  }
  rec.sup_ux = sup_ux;
  rec.sup_v = sup_v;
  rec.m_plus = vmax;
  rec.m_minus = vmin;
  return rec;
}

FlatnessRecord flatness_metrics(const CauchyState& state) {
  return flatness_metrics(state.t, state.grid, state.u);
}

std::vector<FlatnessRecord> flatness_series(const RunRecord& rec) {
  std::vector<FlatnessRecord> out;
  out.reserve(rec.snapshots.size());
  for (const auto& snap : rec.snapshots)
    out.push_back(flatness_metrics(snap.t, *snap.grid, snap.u));
  return out;
}

double log_derivative_lp(const InitialProfile& p, double p_exp, double X) {
  const double a = p.x_blend() - p.blend_width();
  if (!(X > p.x_blend())) throw std::invalid_argument("X must exceed x_blend");
  auto integrand = [&](double x) {
    const double r = x < p.x_blend() ? p.derivative(x, 1) / p.value(x)
                                     : p.tail_log_deriv(x);
    return std::pow(std::abs(r), p_exp);
  };
  // Composite Simpson; log-spaced panels beyond the blend keep the sample
  // count modest for very large X.
  double total = 0.0;
  auto simpson = [&](double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = integrand(lo) + integrand(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(lo + i * h);
    return s * h / 3.0;
  };
  total += simpson(a, p.x_blend(), 200);
  double lo = p.x_blend();
  while (lo < X) {
    const double hi = std::min(lo * 2.0, X);
    total += simpson(lo, hi, 512);
    lo = hi;
  }
  return total;
}

}  // namespace kpplab
