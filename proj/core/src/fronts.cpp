#include "kpplab/fronts.hpp"

#include <cmath>
#include <stdexcept>

namespace kpplab {

double minimal_speed(const Nonlinearity& nl) { return 2.0 * std::sqrt(nl.fprime0()); }

double decay_rate(const Nonlinearity& nl, double c) {
  const double disc = c * c - 4.0 * nl.fprime0();
  if (disc < 0.0) throw std::invalid_argument("speed below the minimal front speed");
  return 0.5 * (c - std::sqrt(disc));
}

double expected_speed_from_tail(const Nonlinearity& nl, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("tail rate must be positive");
  const double alpha_star = std::sqrt(nl.fprime0());
  if (alpha < alpha_star) return alpha + nl.fprime0() / alpha;
  return minimal_speed(nl);
}

FrontProfile solve_front(const Nonlinearity& nl, double c, double h, double eps,
                         double phi_stop) {
  if (c < minimal_speed(nl) - 1e-12)
    throw std::invalid_argument("speed below the minimal front speed");

  FrontProfile fp;
  fp.c = c;
  fp.h = h;

  // Launch on the unstable manifold of (1, 0). With v = 1 - phi the
  // linearization is v'' + c v' + f'(1) v = 0; the growing rate is
  // mu = (-c + sqrt(c^2 - 4 f'(1)))/2 > 0 since f'(1) < 0.
  const double fp1 = nl.fprime1();
  if (!(fp1 < 0.0)) throw std::invalid_argument("front shooting needs f'(1) < 0");
  const double mu = 0.5 * (-c + std::sqrt(c * c - 4.0 * fp1));

  double phi = 1.0 - eps;
  double psi = -eps * mu;

  auto rhs = [&](double p, double q, double& dp, double& dq) {
    dp = q;
    dq = -c * q - nl.eval_clamped(p);
  };

  const std::size_t max_steps = 100'000'000;
  fp.z.reserve(1 << 16);
  for (std::size_t k = 0; k < max_steps; ++k) {
    fp.z.push_back(k * h);
    fp.phi.push_back(phi);
    fp.phi_z.push_back(psi);
    if (phi < phi_stop) break;

    double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
    rhs(phi, psi, k1p, k1q);
    rhs(phi + 0.5 * h * k1p, psi + 0.5 * h * k1q, k2p, k2q);
    rhs(phi + 0.5 * h * k2p, psi + 0.5 * h * k2q, k3p, k3q);
    rhs(phi + h * k3p, psi + h * k3q, k4p, k4q);
    phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    psi += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    if (phi > 1.0 || psi > 0.0)
      throw std::runtime_error("front shooting left the monotone heteroclinic");
  }
  if (fp.phi.back() >= phi_stop)
    throw std::runtime_error("front shooting did not reach the stop level");

  // Pin phi(0) = 1/2.
  double z_half = 0.0;
  for (std::size_t i = 0; i + 1 < fp.phi.size(); ++i) {
    if (fp.phi[i] >= 0.5 && fp.phi[i + 1] < 0.5) {
      const double a = fp.phi[i] - 0.5, b = fp.phi[i + 1] - 0.5;
      z_half = fp.z[i] + a / (a - b) * h;
      break;
    }
  }
  for (double& z : fp.z) z -= z_half;

  // Residual of the profile equation from 5-point finite differences.
  const std::size_t n = fp.phi.size();
  for (std::size_t i = 2; i + 2 < n; ++i) {
    if (fp.phi[i] < 1e-8 || fp.phi[i] > 1.0 - 1e-8) continue;
    const double d1 = (fp.phi[i - 2] - 8.0 * fp.phi[i - 1] + 8.0 * fp.phi[i + 1] -
                       fp.phi[i + 2]) /
                      (12.0 * h);
    const double d2 = (-fp.phi[i - 2] + 16.0 * fp.phi[i - 1] - 30.0 * fp.phi[i] +
                       16.0 * fp.phi[i + 1] - fp.phi[i + 2]) /
                      (12.0 * h * h);
    const double r = d2 + c * d1 + nl(fp.phi[i]);
    fp.max_residual = std::max(fp.max_residual, std::abs(r));
  }

  // Tail decay rate: least-squares slope of -ln(phi) against z where the
  // profile has entered the linear regime.
  double sz = 0.0, sy = 0.0, szz = 0.0, szy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fp.phi[i] > 1e-4 || fp.phi[i] < 10.0 * phi_stop) continue;
    const double y = -std::log(fp.phi[i]);
    sz += fp.z[i];
    sy += y;
    szz += fp.z[i] * fp.z[i];
    szy += fp.z[i] * y;
    ++m;
  }
  if (m >= 10) {
    const double det = m * szz - sz * sz;
    fp.tail_rate = (m * szy - sz * sy) / det;
  }
  return fp;
}

}  // namespace kpplab
