#include "kpplab/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace kpplab {

namespace {

// Exponent phi with tail = C e^{-phi(x)}, plus its first two derivatives.
struct Exponent {
  double phi, dphi, d2phi;
};

double domain_min(const TailSpec& t) {
  switch (t.family) {
    case TailFamily::exponential:
      return -1e300;
    case TailFamily::tlnt:
      return std::exp(1.0);  // x/ln x decreasing below e: tail non-monotone there
    case TailFamily::stretched_exp:
    case TailFamily::algebraic:
      return 0.0;
    case TailFamily::log_power:
      return 1.0;
    case TailFamily::target_curve:
      return t.curve == TargetCurve::quadratic ? 0.0 : 0.0;
  }
  return 0.0;
}

Exponent exponent_at(const TailSpec& t, double x) {
  switch (t.family) {
    case TailFamily::exponential:
      return {t.alpha * x, t.alpha, 0.0};
    case TailFamily::tlnt: {
      const double L = std::log(x);
      return {t.alpha * x / L, t.alpha * (L - 1.0) / (L * L),
              t.alpha * (2.0 - L) / (x * L * L * L)};
    }
    case TailFamily::stretched_exp: {
      const double a = t.alpha, b = t.beta;
      return {b * std::pow(x, a), a * b * std::pow(x, a - 1.0),
              a * (a - 1.0) * b * std::pow(x, a - 2.0)};
    }
    case TailFamily::algebraic: {
      const double a = t.alpha;
      return {a * std::log(x), a / x, -a / (x * x)};
    }
    case TailFamily::log_power: {
      const double a = t.alpha, L = std::log(x);
      return {a * std::log(L), a / (x * L), -a * (L + 1.0) / (x * x * L * L)};
    }
    case TailFamily::target_curve: {
      // quadratic g(t)=a t^2: g^{-1}(x)=sqrt(x/a) -> stretched exponent
      // exponential g(t)=e^{b t}: g^{-1}(x)=ln(x)/b -> algebraic exponent
      if (t.curve == TargetCurve::quadratic) {
        const double b = t.fprime0 / std::sqrt(t.curve_param);
        TailSpec s{TailFamily::stretched_exp, 0.5, b, 1.0};
        return exponent_at(s, x);
      }
      TailSpec s{TailFamily::algebraic, t.fprime0 / t.curve_param, 0.0, 1.0};
      return exponent_at(s, x);
    }
  }
  throw std::logic_error("unreachable tail family");
}

// Closed-form tail inverse: the unique x in the tail domain with tail(x)=level.
double tail_invert(const TailSpec& t, double level) {
  const double y = std::log(t.C / level);  // phi(x) = y
  switch (t.family) {
    case TailFamily::exponential:
      return y / t.alpha;
    case TailFamily::stretched_exp:
      return std::pow(y / t.beta, 1.0 / t.alpha);
    case TailFamily::algebraic:
      return std::exp(y / t.alpha);
    case TailFamily::log_power:
      return std::exp(std::exp(y / t.alpha));
    case TailFamily::tlnt: {
      // Solve x / ln x = m in w = ln x: w - ln w = ln m, Newton iteration.
      const double m = y / t.alpha;
      if (!(m > std::exp(1.0)))  // below the range of x/ln x on (e, inf)
        return std::exp(1.0) * 1.0000001;
      double w = std::max(1.5, std::log(m) + std::log(std::max(std::log(m), 1.1)));
      for (int i = 0; i < 100; ++i) {
        const double g = w - std::log(w) - std::log(m);
        const double dg = 1.0 - 1.0 / w;
        const double step = g / dg;
        w -= step;
        if (std::abs(step) < 1e-15 * std::abs(w)) break;
      }
      return std::exp(w);
    }
    case TailFamily::target_curve: {
      if (t.curve == TargetCurve::quadratic) {
        const double r = std::log(1.0 / level) / t.fprime0;  // g^{-1}(x)
        return t.curve_param * r * r;
      }
      return std::pow(1.0 / level, t.curve_param / t.fprime0);
    }
  }
  throw std::logic_error("unreachable tail family");
}

// Quintic smoothstep: C^2, zero first and second derivatives at both ends.
double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smoothstep_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

}  // namespace

double InitialProfile::tail_log_value(double x) const {
  return std::log(tail_.C) - exponent_at(tail_, x).phi;
}

double InitialProfile::tail_value(double x) const { return std::exp(tail_log_value(x)); }

double InitialProfile::tail_deriv(double x) const {
  const Exponent e = exponent_at(tail_, x);
  return -e.dphi * tail_.C * std::exp(-e.phi);
}

double InitialProfile::tail_deriv2(double x) const {
  const Exponent e = exponent_at(tail_, x);
  return (e.dphi * e.dphi - e.d2phi) * tail_.C * std::exp(-e.phi);
}

double InitialProfile::tail_curvature_ratio(double x) const {
  const Exponent e = exponent_at(tail_, x);
  return std::abs(e.dphi * e.dphi - e.d2phi);
}

double InitialProfile::tail_log_deriv(double x) const {
  return -exponent_at(tail_, x).dphi;
}

double InitialProfile::value(double x) const { return derivative(x, 0); }

double InitialProfile::derivative(double x, int order) const {
  if (order < 0 || order > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
  const double a = x_blend_ - blend_width_;
  if (x <= a) return order == 0 ? plateau_ : 0.0;
  if (x >= x_blend_) {
    switch (order) {
      case 0:
        return tail_value(x);
      case 1:
        return tail_deriv(x);
      default:
        return tail_deriv2(x);
    }
  }
  const double w = blend_width_;
  const double s = (x - a) / w;
  const double T = tail_value(x), T1 = tail_deriv(x), T2 = tail_deriv2(x);
  const double S = smoothstep(s), S1 = smoothstep_d1(s), S2 = smoothstep_d2(s);
  switch (order) {
    case 0:
      return plateau_ + S * (T - plateau_);
    case 1:
      return S1 / w * (T - plateau_) + S * T1;
    default:
      return S2 / (w * w) * (T - plateau_) + 2.0 * S1 / w * T1 + S * T2;
  }
}

double InitialProfile::log_value(double x) const {
  if (x >= x_blend_) return tail_log_value(x);
  return std::log(value(x));
}

double InitialProfile::invert_tail(double level) const {
  if (!(level > 0.0)) throw std::invalid_argument("invert_tail: level must be positive");
  const double top = tail_value(x_blend_);
  if (level > top * (1.0 + 1e-12))
    throw std::invalid_argument("invert_tail: level above u0(x_blend)");
  return tail_invert(tail_, level);
}

SlowDecayReport InitialProfile::verify_slow_decay(const std::vector<double>& eps_list,
                                                  double x_max) const {
  if (eps_list.empty()) throw std::invalid_argument("verify_slow_decay: eps list empty");
  if (x_max <= x_blend_ * 1.01 + 1.0)
    throw std::invalid_argument("verify_slow_decay: x_max too small");

  const int n = 600;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = x_blend_ * std::pow(x_max / x_blend_, static_cast<double>(i) / (n - 1));

  SlowDecayReport rep;
  for (double eps : eps_list) {
    SlowDecayEntry e;
    e.eps = eps;
    double maxw = -1e300;
    bool increasing_late = true;
    double prev = tail_log_value(xs[0]) + eps * xs[0];
    for (int i = 1; i < n; ++i) {
      const double w = tail_log_value(xs[i]) + eps * xs[i];
      if (i > 3 * n / 4 && w <= prev) increasing_late = false;
      prev = w;
      maxw = std::max(maxw, w);
    }
    e.max_log_weighted = maxw;
    e.pass = increasing_late && maxw > std::log(1e6);
    rep.entries.push_back(e);
  }

  const double r_first = std::abs(tail_deriv2(xs[0]) / tail_value(xs[0]));
  const double r_last = std::abs(tail_deriv2(x_max) / tail_value(x_max));
  rep.curvature_at_xmax = r_last;
  rep.curvature_pass = r_last < 0.5 * r_first && r_last < 1e-2;
  rep.pass = rep.curvature_pass;
  for (const auto& e : rep.entries) rep.pass = rep.pass && e.pass;
  return rep;
}

std::optional<double> InitialProfile::tail_beta() const {
  switch (tail_.family) {
    case TailFamily::algebraic:
      return 2.0 / tail_.alpha;
    case TailFamily::target_curve:
      if (tail_.curve == TargetCurve::exponential)
        return 2.0 * tail_.curve_param / tail_.fprime0;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

void InitialProfile::validate() const {
  if (!(plateau_ > 0.0 && plateau_ < 1.0))
    throw std::invalid_argument("plateau must lie in (0,1)");
  if (!(blend_width_ > 0.0)) throw std::invalid_argument("blend_width must be positive");
  const double a = x_blend_ - blend_width_;
  const double dmin = domain_min(tail_);
  if (!(a > dmin))
    throw std::invalid_argument("blend interval leaves the tail's analytic domain");
  const double at_joint = tail_value(a);
  if (!std::isfinite(at_joint) || at_joint >= plateau_)
    throw std::invalid_argument("tail value at blend start must be below plateau");
  if (tail_value(x_blend_) >= plateau_)
    throw std::invalid_argument("tail value at x_blend must be below plateau");
  // Tail must be decreasing over the blend and beyond.
  for (int i = 0; i <= 64; ++i) {
    const double x = a + (x_blend_ * 4.0 - a) * i / 64.0;
    if (tail_deriv(x) > 0.0)
      throw std::invalid_argument("tail is not nonincreasing on the blend region");
  }
  switch (tail_.family) {
    case TailFamily::exponential:
    case TailFamily::algebraic:
    case TailFamily::tlnt:
    case TailFamily::log_power:
      if (!(tail_.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
      break;
    case TailFamily::stretched_exp:
      if (!(tail_.alpha > 0.0 && tail_.alpha < 1.0))
        throw std::invalid_argument("stretched_exp needs alpha in (0,1)");
      if (!(tail_.beta > 0.0)) throw std::invalid_argument("beta must be positive");
      break;
    case TailFamily::target_curve:
      if (tail_.curve == TargetCurve::none)
        throw std::invalid_argument("target curve not in the built-in catalogue");
      if (!(tail_.fprime0 > 0.0) || !(tail_.curve_param > 0.0))
        throw std::invalid_argument("target curve parameters must be positive");
      break;
  }
  if (!(tail_.C > 0.0)) throw std::invalid_argument("C must be positive");
}

InitialProfile InitialProfile::make(const TailSpec& tail, double plateau, double x_blend,
                                    double blend_width) {
  InitialProfile p;
  p.tail_ = tail;
  p.plateau_ = plateau;
  p.x_blend_ = x_blend;
  p.blend_width_ = blend_width;
  p.validate();
  return p;
}

InitialProfile InitialProfile::from_target_curve(TargetCurve curve, double param,
                                                 double fprime0, double plateau,
                                                 double blend_width) {
  if (curve == TargetCurve::none)
    throw std::invalid_argument("target curve not in the built-in catalogue");
  TailSpec spec;
  spec.family = TailFamily::target_curve;
  spec.curve = curve;
  spec.curve_param = param;
  spec.fprime0 = fprime0;
  spec.C = 1.0;
  const double g0 = curve == TargetCurve::quadratic ? 0.0 : 1.0;
  double xb = std::max(g0 + 1.0, default_x_blend(spec, plateau, blend_width));
  return make(spec, plateau, xb, blend_width);
}

double InitialProfile::default_x_blend(const TailSpec& tail, double plateau,
                                       double blend_width) {
  // Smallest x with tail(x) <= plateau/2, kept clear of the domain boundary
  // and pushed right until the whole blend interval sits below the plateau.
  const double dmin = domain_min(tail);
  double x = std::max(tail_invert(tail, plateau / 2.0), dmin + blend_width + 0.5);
  for (int i = 0; i < 10000; ++i) {
    const double at_start =
        std::log(tail.C) - exponent_at(tail, x - blend_width).phi;
    if (std::isfinite(at_start) && at_start < std::log(0.95 * plateau)) break;
    x += 0.5 * blend_width;
  }
  return x;
}

std::string InitialProfile::family_name() const { return to_string(tail_.family); }

std::string to_string(TailFamily f) {
  switch (f) {
    case TailFamily::exponential:
      return "exponential";
    case TailFamily::tlnt:
      return "tlnt";
    case TailFamily::stretched_exp:
      return "stretched_exp";
    case TailFamily::algebraic:
      return "algebraic";
    case TailFamily::log_power:
      return "log_power";
    case TailFamily::target_curve:
      return "target_curve";
  }
  return "?";
}

TailFamily tail_family_from_string(const std::string& s) {
  if (s == "exponential") return TailFamily::exponential;
  if (s == "tlnt") return TailFamily::tlnt;
  if (s == "stretched_exp") return TailFamily::stretched_exp;
  if (s == "algebraic") return TailFamily::algebraic;
  if (s == "log_power") return TailFamily::log_power;
  if (s == "target_curve") return TailFamily::target_curve;
  throw std::invalid_argument("unknown tail family: " + s);
}

}  // namespace kpplab
