#pragma once

#include <vector>

#include "kpplab/nonlinearity.hpp"

namespace kpplab {

/// Minimal front speed 2 sqrt(f'(0)).
double minimal_speed(const Nonlinearity& nl);

/// Spatial decay rate of the front with speed c >= c*: the smaller root of
/// lambda^2 - c lambda + f'(0) = 0.
double decay_rate(const Nonlinearity& nl, double c);

/// Asymptotic level-set speed for an initial tail ~ e^{-alpha x}:
/// alpha + f'(0)/alpha for alpha < sqrt(f'(0)), otherwise the minimal speed.
double expected_speed_from_tail(const Nonlinearity& nl, double alpha);

/// Monotone front profile phi with phi'' + c phi' + f(phi) = 0,
/// phi(-inf) = 1, phi(+inf) = 0, pinned to phi(0) = 1/2.
struct FrontProfile {
  double c = 0.0;
  double h = 0.0;               // sample spacing
  std::vector<double> z;        // z_i = z0 + i h
  std::vector<double> phi;
  std::vector<double> phi_z;
  double max_residual = 0.0;    // |phi'' + c phi' + f(phi)| via 5-point stencils
  double tail_rate = 0.0;       // fitted decay rate of phi on the right tail
};

/// Integrates the phase-plane heteroclinic from the unstable manifold of
/// (1,0) with fixed-step RK4 until phi drops below phi_stop.
FrontProfile solve_front(const Nonlinearity& nl, double c, double h = 1e-3,
                         double eps = 1e-8, double phi_stop = 1e-9);

}  // namespace kpplab
