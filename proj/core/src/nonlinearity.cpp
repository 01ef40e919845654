#include "kpplab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpplab {

namespace {
constexpr double kOvershoot = 1e-12;
constexpr double kMarginTol = 1e-12;
}  // namespace

Nonlinearity Nonlinearity::logistic(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("logistic rate r must be positive");
  Nonlinearity nl;
  nl.name_ = "logistic";
  nl.f_ = [r](double s) { return r * s * (1.0 - s); };
  nl.fprime0_ = r;
  nl.delta_ = 1.0;
  nl.s0_ = 1.0;
  nl.m_low_ = r;
  nl.mu_ = r;
  nl.nu_ = 1.0;
  nl.logistic_r_ = r;
  return nl;
}

Nonlinearity Nonlinearity::custom(std::string name, std::function<double(double)> f,
                                  double fprime0, double delta, double s0, double m_low,
                                  std::optional<double> mu, std::optional<double> nu) {
  if (f(0.0) != 0.0 || f(1.0) != 0.0)
    throw std::invalid_argument("nonlinearity must satisfy f(0)=f(1)=0 exactly");
  Nonlinearity nl;
  nl.name_ = std::move(name);
  nl.f_ = std::move(f);
  nl.fprime0_ = fprime0;
  nl.delta_ = delta;
  nl.s0_ = s0;
  nl.m_low_ = m_low;
  nl.mu_ = mu;
  nl.nu_ = nu;
  return nl;
}

double Nonlinearity::operator()(double s) const {
  if (s < -kOvershoot || s > 1.0 + kOvershoot)
    throw std::out_of_range("nonlinearity argument outside [0,1] beyond overshoot tolerance");
  return f_(std::clamp(s, 0.0, 1.0));
}

double Nonlinearity::eval_clamped(double s) const { return f_(std::clamp(s, 0.0, 1.0)); }

double Nonlinearity::fprime1() const {
  if (logistic_r_) return -*logistic_r_;
  const double h = 1e-6;
  return (f_(1.0) - f_(1.0 - h)) / h;
}

EnvelopeReport Nonlinearity::verify_envelopes(int n_samples) const {
  if (n_samples < 100) throw std::invalid_argument("verify_envelopes needs n_samples >= 100");

  // Composite sample set: geometric points resolve the s^{1+delta} corrections
  // near 0, uniform points cover the bulk of (0,1].
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  const int n_geo = n_samples / 2;
  const int n_uni = n_samples - n_geo;
  const double s_min = 1e-9;
  for (int i = 0; i < n_geo; ++i)
    samples.push_back(s_min * std::pow(1.0 / s_min, static_cast<double>(i) / (n_geo - 1)));
  for (int i = 1; i <= n_uni; ++i)
    samples.push_back(static_cast<double>(i) / n_uni);

  auto track = [](EnvelopeMargin& m, double margin, double s) {
    if (margin < m.worst_margin) {
      m.worst_margin = margin;
      m.worst_s = s;
    }
  };

  EnvelopeMargin positive{"positivity", 1e300, 0.0, false};
  EnvelopeMargin upper{"kpp_upper", 1e300, 0.0, false};
  EnvelopeMargin lower{"lower_envelope", 1e300, 0.0, false};
  EnvelopeMargin strict{"strict_upper_envelope", 1e300, 0.0, false};
  bool have_strict = mu_ && nu_;

  for (double s : samples) {
    const double fs = f_(std::min(s, 1.0));
    if (s < 1.0) track(positive, fs, s);
    if (s < 1.0) track(upper, fprime0_ * s - fs, s);
    if (s <= s0_) track(lower, fs - (fprime0_ * s - m_low_ * std::pow(s, 1.0 + delta_)), s);
    if (have_strict)
      track(strict, (fprime0_ * s - *mu_ * std::pow(s, 1.0 + *nu_)) - fs, s);
  }

  EnvelopeReport report;
  for (EnvelopeMargin* m : {&positive, &upper, &lower}) {
    m->pass = m->worst_margin >= -kMarginTol;
    report.margins.push_back(*m);
  }
  if (have_strict) {
    strict.pass = strict.worst_margin >= -kMarginTol;
    report.margins.push_back(strict);
  }
  report.pass = std::all_of(report.margins.begin(), report.margins.end(),
                            [](const EnvelopeMargin& m) { return m.pass; });
  return report;
}

}  // namespace kpplab
