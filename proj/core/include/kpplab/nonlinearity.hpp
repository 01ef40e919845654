#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kpplab {

/// Worst signed margin of one structural inequality on f, sampled over (0,1].
/// A margin >= -1e-12 counts as satisfied.
struct EnvelopeMargin {
  std::string name;
  double worst_margin = 0.0;
  double worst_s = 0.0;
  bool pass = false;
};

struct EnvelopeReport {
  std::vector<EnvelopeMargin> margins;
  bool pass = false;
};

/// A KPP reaction term f on [0,1] together with its linearization rate f'(0)
/// and the envelope constants used by the comparison-function machinery:
///   f(s) >= fprime0*s - M_low*s^{1+delta}   on (0, s0]
///   f(s) <= fprime0*s - mu*s^{1+nu}         on (0, 1]   (optional, strict case)
/// Immutable after construction; safe to share across workers.
class Nonlinearity {
 public:
  static Nonlinearity logistic(double r);

  /// Unchecked constructor for user-declared envelopes. verify_envelopes()
  /// reports whether the declared constants actually hold.
  static Nonlinearity custom(std::string name, std::function<double(double)> f,
                             double fprime0, double delta, double s0, double m_low,
                             std::optional<double> mu = std::nullopt,
                             std::optional<double> nu = std::nullopt);

  /// f(s). Clamps floating-point overshoot up to 1e-12 outside [0,1];
  /// anything further out is rejected.
  double operator()(double s) const;

  /// f evaluated with s clamped to [0,1]; used by ODE integrators whose
  /// intermediate stages may leave the interval by more than the overshoot
  /// tolerance.
  double eval_clamped(double s) const;

  /// Samples a composite geometric+uniform grid of (0,1] and reports the
  /// worst signed margin of every declared inequality.
  EnvelopeReport verify_envelopes(int n_samples) const;

  const std::string& name() const { return name_; }
  double fprime0() const { return fprime0_; }
  double delta() const { return delta_; }
  double s0() const { return s0_; }
  double m_low() const { return m_low_; }
  const std::optional<double>& mu() const { return mu_; }
  const std::optional<double>& nu() const { return nu_; }

  /// f'(1), needed for the phase-plane linearization at the stable state.
  double fprime1() const;

  /// True when du/dt = f(u) has a closed-form solution (logistic family).
  bool has_closed_form_reaction() const { return logistic_r_.has_value(); }
  double logistic_rate() const { return *logistic_r_; }

 private:
  Nonlinearity() = default;

  std::string name_;
  std::function<double(double)> f_;
  double fprime0_ = 0.0;
  double delta_ = 0.0;
  double s0_ = 0.0;
  double m_low_ = 0.0;
  std::optional<double> mu_;
  std::optional<double> nu_;
  std::optional<double> logistic_r_;
};

}  // namespace kpplab
