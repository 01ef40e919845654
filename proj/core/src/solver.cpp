#include "kpplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kpplab {

namespace {

double logistic_from_log(double log_u0, double r, double t) {
  // u = 1 / (1 + exp(lq)), lq = ln((1-u0)/u0) - r t, stable for u0 near 0 or 1.
  if (log_u0 >= 0.0) return 1.0;
  const double u0 = std::exp(log_u0);
  // When u0 underflows, log1p(-u0) is 0 and the log form stays exact.
  const double lq = (u0 > 0.0 ? std::log1p(-u0) : 0.0) - log_u0 - r * t;
  if (lq > 0.0) {
    const double e = std::exp(-lq);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(lq));
}

double reaction_rk4_step(const Nonlinearity& nl, double u, double dt) {
  const double k1 = nl.eval_clamped(u);
  const double k2 = nl.eval_clamped(u + 0.5 * dt * k1);
  const double k3 = nl.eval_clamped(u + 0.5 * dt * k2);
  const double k4 = nl.eval_clamped(u + dt * k3);
  return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void reaction_half(std::vector<double>& u, const Nonlinearity& nl, double half_dt) {
  for (double& v : u) v = reaction_rk4_step(nl, v, half_dt);
}

// Crank-Nicolson step for u_t = u_xx: (I - dt/2 L) u_new = (I + dt/2 L) u_old.
// Left end: homogeneous Neumann via a symmetric ghost node. Right end: held
// fixed (its evolution is pure reaction, applied by the Strang halves).
void diffusion_step(const Grid& g, std::vector<double>& u, double dt) {
  const std::size_t n = u.size();
  thread_local std::vector<double> diag, upper, lower, rhs;
  diag.resize(n);
  upper.resize(n);
  lower.resize(n);
  rhs.resize(n);

  {
    const double h = g.node(1) - g.node(0);
    const double w = dt / (h * h);  // dt/2 * 2/h^2
    diag[0] = 1.0 + w;
    upper[0] = -w;
    rhs[0] = (1.0 - w) * u[0] + w * u[1];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto w = g.laplacian_weights(i);
    lower[i] = -0.5 * dt * w[0];
    diag[i] = 1.0 - 0.5 * dt * w[1];
    upper[i] = -0.5 * dt * w[2];
    rhs[i] = u[i] + 0.5 * dt * (w[0] * u[i - 1] + w[1] * u[i] + w[2] * u[i + 1]);
  }
  lower[n - 1] = 0.0;
  diag[n - 1] = 1.0;
  rhs[n - 1] = u[n - 1];

  // Thomas sweep.
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  u[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) u[i] = (rhs[i] - upper[i] * u[i + 1]) / diag[i];
  // Crank-Nicolson violates the discrete maximum principle by rounding-scale
  // amounts when dt >> h^2; exact diffusion preserves [0,1], so round back.
  for (double& v : u) v = std::clamp(v, 0.0, 1.0);
}

[[noreturn]] void invariant_abort(const char* what, double t, std::size_t i, double x,
                                  double v) {
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "solution invariant violated (%s) at t=%.10g, node %zu, x=%.10g, "
                "value=%.17g",
                what, t, i, x, v);
  throw std::runtime_error(buf);
}

void check_invariants(CauchyState& s, const SolverConfig& cfg, InvariantSummary* inv) {
  const std::size_t n = s.u.size();
  double lo = s.u[0], hi = s.u[0], mono = -1e300;
  std::size_t ilo = 0, ihi = 0, imono = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = s.u[i];
    if (v < lo) {
      lo = v;
      ilo = i;
    }
    if (v > hi) {
      hi = v;
      ihi = i;
    }
    if (i + 1 < n) {
      const double d = s.u[i + 1] - s.u[i];
      if (d > mono) {
        mono = d;
        imono = i + 1;
      }
    }
  }
  if (inv) {
    inv->worst_range_low = std::min(inv->worst_range_low, lo);
    inv->worst_range_high = std::max(inv->worst_range_high, hi);
    inv->worst_monotone = std::max(inv->worst_monotone, mono);
  }
  if (lo < -cfg.range_tol)
    invariant_abort("range, below 0", s.t, ilo, s.grid.node(ilo), lo);
  if (hi > 1.0 + cfg.range_tol)
    invariant_abort("range, above 1", s.t, ihi, s.grid.node(ihi), hi);
  if (cfg.check_monotone && mono > cfg.mono_tol)
    invariant_abort("monotone in x", s.t, imono, s.grid.node(imono), mono);
  // Round floating-point overshoot within tolerance back into [0,1].
  for (double& v : s.u) v = std::clamp(v, 0.0, 1.0);
}

void record_dt(StepStats& st, double dt) {
  ++st.steps;
  st.dt_last = dt;
  st.dt_min_used = std::min(st.dt_min_used, dt);
  st.dt_max_used = std::max(st.dt_max_used, dt);
}

using StepHook = std::function<void(CauchyState&)>;

void advance_impl(CauchyState& state, const SolverConfig& cfg, const Nonlinearity& nl,
                  double t_target, InvariantSummary* inv, const StepHook& hook) {
  const double t_eps = 1e-12 * std::max(1.0, std::abs(t_target));
  if (cfg.dt > 0.0) {
    while (state.t < t_target - t_eps) {
      const double dt = std::min(cfg.dt, t_target - state.t);
      strang_step(state, nl, dt);
      state.t += dt;
      record_dt(state.stats, dt);
      check_invariants(state, cfg, inv);
      if (hook) hook(state);
    }
    state.t = t_target;
    return;
  }

  const double dt_max = cfg.dt_obs > 0.0 ? cfg.dt_obs : t_target - state.t;
  double dt = std::clamp(state.stats.dt_last > 0.0 ? state.stats.dt_last : 1e-3,
                         cfg.dt_min, dt_max);
  while (state.t < t_target - t_eps) {
    dt = std::min(dt, t_target - state.t);
    // Step doubling: one full step against two half steps; the halved pair
    // is kept on acceptance.
    CauchyState full = state;
    strang_step(full, nl, dt);
    CauchyState half = state;
    strang_step(half, nl, 0.5 * dt);
    strang_step(half, nl, 0.5 * dt);
    double err = 0.0;
    for (std::size_t i = 0; i < half.u.size(); ++i)
      err = std::max(err, std::abs(full.u[i] - half.u[i]));
    err /= 3.0;  // Richardson estimate for a second-order step

    const double safety =
        err > 0.0 ? std::clamp(0.9 * std::cbrt(cfg.local_error_tol / err), 0.2, 5.0)
                  : 5.0;
    if (err <= cfg.local_error_tol || dt <= cfg.dt_min * (1.0 + 1e-9)) {
      half.t = state.t + dt;
      half.stats = state.stats;
      state = std::move(half);
      record_dt(state.stats, dt);
      check_invariants(state, cfg, inv);
      if (hook) hook(state);
    } else {
      ++state.stats.rejected;
    }
    dt = std::clamp(dt * safety, cfg.dt_min, dt_max);
  }
  state.t = t_target;
}

}  // namespace

double reaction_ode_solution(const Nonlinearity& nl, double u0, double t) {
  if (u0 <= 0.0) return 0.0;
  if (u0 >= 1.0) return 1.0;
  if (nl.has_closed_form_reaction())
    return logistic_from_log(std::log(u0), nl.logistic_rate(), t);
  // Adaptive RK4 with step doubling to relative tolerance 1e-10.
  double u = u0, s = 0.0, dt = std::min(0.05, t);
  while (s < t) {
    dt = std::min(dt, t - s);
    const double one = reaction_rk4_step(nl, u, dt);
    const double mid = reaction_rk4_step(nl, u, 0.5 * dt);
    const double two = reaction_rk4_step(nl, mid, 0.5 * dt);
    const double err = std::abs(one - two) / 15.0;
    const double tol = 1e-10 * std::max(std::abs(two), 1e-3);
    if (err <= tol) {
      u = two;
      s += dt;
    }
    const double f = err > 0.0 ? std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0) : 5.0;
    dt = std::max(dt * f, 1e-9);
  }
  return u;
}

double right_boundary_value(const InitialProfile& p, const Nonlinearity& nl, double t,
                            double x) {
  const double lu0 = p.log_value(x);
  if (nl.has_closed_form_reaction())
    return logistic_from_log(lu0, nl.logistic_rate(), t);
  return reaction_ode_solution(nl, std::exp(lu0), t);
}

void strang_step(CauchyState& state, const Nonlinearity& nl, double dt) {
  reaction_half(state.u, nl, 0.5 * dt);
  diffusion_step(state.grid, state.u, dt);
  reaction_half(state.u, nl, 0.5 * dt);
}

void advance_to(CauchyState& state, const SolverConfig& cfg, const Nonlinearity& nl,
                double t_target, InvariantSummary* inv) {
  advance_impl(state, cfg, nl, t_target, inv, nullptr);
}

CauchyState make_initial_state(const InitialProfile& p, const Nonlinearity& nl,
                               const Grid& grid) {
  (void)nl;
  CauchyState s;
  s.grid = grid;
  s.u.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) s.u[i] = p.value(grid.node(i));
  s.right_farfield = s.u.back();
  return s;
}

RunRecord run(const InitialProfile& p, const Nonlinearity& nl, const SolverConfig& cfg,
              const Grid& initial_grid, double t_end, const RunOptions& opts) {
  RunRecord rec;
  rec.trajectories.reserve(opts.levels.size());
  for (double lam : opts.levels) {
    LevelSetTrajectory traj;
    traj.lambda = lam;
    rec.trajectories.push_back(std::move(traj));
  }

  CauchyState state = make_initial_state(p, nl, initial_grid);
  auto gptr = std::make_shared<const Grid>(state.grid);

  const double lam_trigger =
      opts.levels.empty() ? 1e-2
                          : *std::min_element(opts.levels.begin(), opts.levels.end());

  auto maybe_expand = [&](CauchyState& s) {
    if (!opts.allow_expansion) return;
    bool changed = false;
    for (;;) {
      const double x_thr = (1.0 - cfg.expansion_margin) * s.grid.x_right();
      // Front position proxy: rightmost node still above the lowest tracked
      // level. The seed for fresh nodes is the zero-diffusion far field.
      std::size_t j = s.u.size();
      while (j > 0 && s.u[j - 1] < lam_trigger) --j;
      if (j == 0 || s.grid.node(j - 1) <= x_thr) break;

      const double old_right = s.grid.x_right();
      const double new_right = cfg.expansion_factor * old_right;
      auto [bigger, bu] = expand_right(
          s.grid, s.u, new_right,
          [&](double x) { return right_boundary_value(p, nl, s.t, x); });
      s.grid = std::move(bigger);
      s.u = std::move(bu);

      ExpansionEvent ev;
      ev.t = s.t;
      ev.old_right = old_right;
      ev.new_right = s.grid.x_right();
      ev.coarsened = false;
      if (s.u.size() > cfg.node_budget) {
        // Drop alternate nodes over the flat region behind the front.
        std::size_t k = 0;
        while (k + 1 < s.u.size() && std::abs(s.u[k + 1] - s.u[0]) < 1e-8) ++k;
        if (k > 200) {
          auto [coarse, map] = s.grid.coarsened_left(s.grid.node(k / 2));
          std::vector<double> cu(map.size());
          for (std::size_t m = 0; m < map.size(); ++m) cu[m] = s.u[map[m]];
          s.grid = std::move(coarse);
          s.u = std::move(cu);
          ev.coarsened = true;
        }
      }
      ev.nodes = s.u.size();
      rec.expansions.push_back(ev);
      changed = true;
    }
    if (changed) gptr = std::make_shared<const Grid>(s.grid);
  };

  auto observe = [&](const CauchyState& s) {
    rec.times.push_back(s.t);
    for (auto& traj : rec.trajectories)
      traj.append(s.t, extract_crossings(s.grid.nodes(), s.u, traj.lambda));
    if (opts.record_snapshots) rec.snapshots.push_back({s.t, gptr, s.u});
    if (opts.observer) opts.observer(s);
  };

  try {
    check_invariants(state, cfg, &rec.invariants);
    maybe_expand(state);
    observe(state);
    const double dt_obs = cfg.dt_obs > 0.0 ? cfg.dt_obs : std::max(t_end, 1e-300);
    const long n_obs = static_cast<long>(std::floor(t_end / dt_obs + 1e-9));
    for (long k = 1; k <= n_obs; ++k) {
      advance_impl(state, cfg, nl, k * dt_obs, &rec.invariants, maybe_expand);
      observe(state);
    }
    if (state.t < t_end - 1e-9 * std::max(1.0, t_end)) {
      advance_impl(state, cfg, nl, t_end, &rec.invariants, maybe_expand);
      observe(state);
    }
  } catch (const std::exception& e) {
    rec.completed = false;
    rec.error = e.what();
  }
  rec.stats = state.stats;
  return rec;
}

namespace {

// Pure-diffusion run on a uniform grid with fixed dt; returns the final values.
std::vector<double> diffuse(const Grid& g, std::vector<double> u, double dt,
                            double t_end) {
  double t = 0.0;
  while (t < t_end - 1e-12) {
    const double step = std::min(dt, t_end - t);
    diffusion_step(g, u, step);
    t += step;
  }
  return u;
}

}  // namespace

double convergence_order_space(double x_left, double x_right, int base_n, double dt,
                               double t_end, const std::function<double(double)>& u0) {
  std::array<std::vector<double>, 3> sol;
  for (int lvl = 0; lvl < 3; ++lvl) {
    const int n = base_n << lvl;
    Grid g = Grid::build(GridKind::uniform, x_left, x_right, n);
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = u0(g.node(i));
    sol[lvl] = diffuse(g, std::move(u), dt, t_end);
  }
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < sol[0].size(); ++i)
    e1 = std::max(e1, std::abs(sol[0][i] - sol[1][2 * i]));
  for (std::size_t i = 0; i < sol[1].size(); ++i)
    e2 = std::max(e2, std::abs(sol[1][i] - sol[2][2 * i]));
  return std::log2(e1 / e2);
}

double convergence_order_time(const InitialProfile& p, const Nonlinearity& nl,
                              const Grid& grid, double base_dt, double t_end) {
  std::array<std::vector<double>, 3> sol;
  for (int lvl = 0; lvl < 3; ++lvl) {
    CauchyState s = make_initial_state(p, nl, grid);
    SolverConfig cfg;
    cfg.dt = base_dt / (1 << lvl);
    cfg.check_monotone = false;
    advance_to(s, cfg, nl, t_end);
    sol[lvl] = std::move(s.u);
  }
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < sol[0].size(); ++i) {
    e1 = std::max(e1, std::abs(sol[0][i] - sol[1][i]));
    e2 = std::max(e2, std::abs(sol[1][i] - sol[2][i]));
  }
  return std::log2(e1 / e2);
}

double convergence_order_reaction(const Nonlinearity& nl, double u0, double base_dt,
                                  double t_end) {
  const double exact = reaction_ode_solution(nl, u0, t_end);
  double err[2];
  for (int lvl = 0; lvl < 2; ++lvl) {
    const double dt = base_dt / (1 << lvl);
    double u = u0, t = 0.0;
    while (t < t_end - 1e-12) {
      const double step = std::min(dt, t_end - t);
      u = reaction_rk4_step(nl, u, step);
      t += step;
    }
    err[lvl] = std::abs(u - exact);
  }
  return std::log2(err[0] / err[1]);
}

}  // namespace kpplab
