#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kpplab/grid.hpp"
#include "kpplab/levelsets.hpp"
#include "kpplab/nonlinearity.hpp"
#include "kpplab/profile.hpp"

namespace kpplab {

struct StepStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double dt_last = 0.0;
  double dt_min_used = 1e300;
  double dt_max_used = 0.0;
};

/// Solver state at one time: nonuniform grid, nodal values in (0,1), and the
/// reaction-ODE far-field value pinned at the right end.
struct CauchyState {
  double t = 0.0;
  Grid grid;
  std::vector<double> u;
  double right_farfield = 0.0;
  StepStats stats;
};

struct SolverConfig {
  double dt = 0.0;                  // > 0: fixed step; 0: adaptive
  double local_error_tol = 1e-7;    // adaptive step-doubling target
  double dt_min = 1e-6;
  double dt_obs = 0.25;             // observation cadence
  double expansion_margin = 0.2;    // expand when front reaches (1-margin)*x_N
  double expansion_factor = 3.0;    // new_right = factor * x_N
  std::size_t node_budget = 200000;
  bool check_monotone = true;
  double range_tol = 1e-14;
  double mono_tol = 1e-10;
};

struct ExpansionEvent {
  double t = 0.0;
  double old_right = 0.0;
  double new_right = 0.0;
  std::size_t nodes = 0;
  bool coarsened = false;
};

struct Snapshot {
  double t = 0.0;
  std::shared_ptr<const Grid> grid;
  std::vector<double> u;
};

struct InvariantSummary {
  double worst_range_low = 0.0;   // min over run of min_i u_i
  double worst_range_high = 1.0;  // max over run of max_i u_i
  double worst_monotone = 0.0;    // max over run of max_i (u_{i+1} - u_i)
  bool ok = true;
};

struct RunOptions {
  std::vector<double> levels;
  bool record_snapshots = true;
  bool allow_expansion = true;
  std::function<void(const CauchyState&)> observer;  // extra per-observation hook
};

struct RunRecord {
  std::vector<double> times;
  std::vector<LevelSetTrajectory> trajectories;
  std::vector<Snapshot> snapshots;
  std::vector<ExpansionEvent> expansions;
  StepStats stats;
  InvariantSummary invariants;
  bool completed = true;
  std::string error;
};

/// U(t; x) solving dU/dt = f(U), U(0) = u0(x): the zero-diffusion far-field
/// closure. Closed form for the logistic family, adaptive integration
/// otherwise (relative tolerance 1e-10).
double right_boundary_value(const InitialProfile& p, const Nonlinearity& nl, double t,
                            double x);

/// Solution of du/dt = f(u), u(0)=u0, at time t (same routine on raw values).
double reaction_ode_solution(const Nonlinearity& nl, double u0, double t);

/// One Strang step of size dt: half reaction (classical RK4 per node), full
/// Crank-Nicolson diffusion (tridiagonal solve; homogeneous Neumann on the
/// left, pinned Dirichlet far field on the right), half reaction.
void strang_step(CauchyState& state, const Nonlinearity& nl, double dt);

/// Advances to t_target with either the fixed step or adaptive step-doubling.
/// Throws on invariant violation with a diagnostic message.
void advance_to(CauchyState& state, const SolverConfig& cfg, const Nonlinearity& nl,
                double t_target, InvariantSummary* inv = nullptr);

CauchyState make_initial_state(const InitialProfile& p, const Nonlinearity& nl,
                               const Grid& grid);

RunRecord run(const InitialProfile& p, const Nonlinearity& nl, const SolverConfig& cfg,
              const Grid& initial_grid, double t_end, const RunOptions& opts = {});

/// Observed spatial order on a pure-diffusion problem (self-convergence over
/// grids h, h/2, h/4 at fixed dt).
double convergence_order_space(double x_left, double x_right, int base_n, double dt,
                               double t_end, const std::function<double(double)>& u0);

/// Observed temporal order of the Strang-split scheme on a fixed grid
/// (self-convergence over dt, dt/2, dt/4).
double convergence_order_time(const InitialProfile& p, const Nonlinearity& nl,
                              const Grid& grid, double base_dt, double t_end);

/// Observed temporal order of the reaction half alone against the closed form.
double convergence_order_reaction(const Nonlinearity& nl, double u0, double base_dt,
                                  double t_end);

}  // namespace kpplab
