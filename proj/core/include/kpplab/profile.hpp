#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kpplab {

enum class TailFamily {
  exponential,    // C e^{-alpha x}
  tlnt,           // C e^{-alpha x / ln x}
  stretched_exp,  // C e^{-beta x^alpha}, alpha in (0,1)
  algebraic,      // C x^{-alpha}
  log_power,      // C (ln x)^{-alpha}
  target_curve,   // e^{-fprime0 g^{-1}(x)} for a built-in curve g
};

enum class TargetCurve { none, quadratic, exponential };  // g(t)=a t^2, g(t)=e^{b t}

struct TailSpec {
  TailFamily family = TailFamily::algebraic;
  double alpha = 0.0;
  double beta = 0.0;
  double C = 1.0;
  // target_curve only
  TargetCurve curve = TargetCurve::none;
  double curve_param = 0.0;  // a or b
  double fprime0 = 0.0;
};

struct SlowDecayEntry {
  double eps = 0.0;
  bool pass = false;
  double max_log_weighted = 0.0;  // max of ln u0(x) + eps x over the samples
};

struct SlowDecayReport {
  std::vector<SlowDecayEntry> entries;
  bool curvature_pass = false;  // u0''/u0 -> 0 on samples
  double curvature_at_xmax = 0.0;
  bool pass = false;
};

/// Front-like, globally nonincreasing, C^2 initial condition: a constant
/// plateau in (0,1) on the left, an analytic slowly decaying tail on
/// [x_blend, +inf), and a quintic-smoothstep C^2 blend in between.
/// Immutable after construction.
class InitialProfile {
 public:
  static InitialProfile make(const TailSpec& tail, double plateau, double x_blend,
                             double blend_width);

  /// Profile whose tail is exactly e^{-fprime0 g^{-1}(x)} on [g(0)+1, inf).
  /// Only the built-in curve catalogue (quadratic, exponential) is accepted.
  static InitialProfile from_target_curve(TargetCurve curve, double param, double fprime0,
                                          double plateau = 0.9, double blend_width = 2.0);

  /// Smallest usable x_blend for which tail(x_blend) <= plateau/2 and the
  /// blend stays inside the tail's analytic domain.
  static double default_x_blend(const TailSpec& tail, double plateau, double blend_width);

  double value(double x) const;
  double derivative(double x, int order) const;  // order in {0,1,2}
  double log_value(double x) const;  // ln u0(x); exact on the tail, no underflow

  /// Analytic tail formula, defined on the whole tail domain (also below
  /// x_blend where the profile itself is blended).
  double tail_value(double x) const;
  double tail_log_value(double x) const;
  double tail_deriv(double x) const;
  double tail_deriv2(double x) const;

  /// |u0''(x)| / u0(x) on the analytic tail, computed from the exponent so it
  /// stays finite where the tail value itself underflows.
  double tail_curvature_ratio(double x) const;

  /// d/dx ln u0 on the analytic tail, likewise underflow-safe.
  double tail_log_deriv(double x) const;

  /// Unique x >= x_blend with u0(x) = level. Closed form for every built-in
  /// family; level must lie in (0, u0(x_blend)].
  double invert_tail(double level) const;

  SlowDecayReport verify_slow_decay(const std::vector<double>& eps_list, double x_max) const;

  /// Exponent beta with u0'' = O(u0^{1+beta}) on the tail, when the family
  /// admits one (algebraic-type tails: beta = 2/alpha).
  std::optional<double> tail_beta() const;

  const TailSpec& tail_spec() const { return tail_; }
  double plateau() const { return plateau_; }
  double x_blend() const { return x_blend_; }
  double blend_width() const { return blend_width_; }
  std::string family_name() const;

 private:
  InitialProfile() = default;
  void validate() const;

  TailSpec tail_;
  double plateau_ = 0.9;
  double x_blend_ = 0.0;
  double blend_width_ = 1.0;
};

std::string to_string(TailFamily f);
TailFamily tail_family_from_string(const std::string& s);

}  // namespace kpplab
