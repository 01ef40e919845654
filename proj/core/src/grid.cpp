#include "kpplab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace kpplab {

namespace {
constexpr double kMaxRatio = 1.05;
}

Grid Grid::build(GridKind kind, double x_left, double x_right, int n, double stretch) {
  if (!(x_right > x_left)) throw std::invalid_argument("degenerate interval");
  if (n < 2) throw std::invalid_argument("need at least 2 intervals");
  Grid g;
  g.kind_ = kind;
  g.left_anchor_ = x_left;
  g.nodes_.resize(static_cast<std::size_t>(n) + 1);
  if (kind == GridKind::uniform || stretch <= 0.0) {
    g.kind_ = stretch <= 0.0 && kind == GridKind::log_stretched ? GridKind::uniform : kind;
    const double h = (x_right - x_left) / n;
    for (int i = 0; i <= n; ++i) g.nodes_[i] = x_left + h * i;
  } else {
    g.sigma_ = stretch;
    const double xi_max = std::log1p(stretch * (x_right - x_left));
    g.dxi_ = xi_max / n;
    if (std::exp(g.dxi_) > kMaxRatio + 1e-12)
      throw std::invalid_argument("too few nodes for the 1.05 spacing-ratio bound");
    for (int i = 0; i <= n; ++i)
      g.nodes_[i] = x_left + std::expm1(g.dxi_ * i) / stretch;
  }
  g.nodes_.back() = x_right;
  return g;
}

Grid Grid::stretched_with_uniform_head(double x_left, double anchor, double x_right,
                                       double dxi, double sigma) {
  if (!(sigma > 0.0 && dxi > 0.0)) throw std::invalid_argument("sigma and dxi must be positive");
  if (std::exp(dxi) > kMaxRatio + 1e-12)
    throw std::invalid_argument("dxi violates the 1.05 spacing-ratio bound");
  if (!(x_left < anchor && anchor < x_right)) throw std::invalid_argument("degenerate interval");
  Grid g;
  g.kind_ = GridKind::log_stretched;
  g.sigma_ = sigma;
  g.dxi_ = dxi;
  const double h = dxi / sigma;
  const int n_head = std::max(1, static_cast<int>(std::lround((anchor - x_left) / h)));
  g.head_h_ = h;
  g.left_anchor_ = x_left + n_head * h;
  g.nodes_.reserve(static_cast<std::size_t>(n_head) + 64);
  for (int i = 0; i <= n_head; ++i) g.nodes_.push_back(x_left + h * i);
  for (int k = 1;; ++k) {
    const double x = g.left_anchor_ + std::expm1(dxi * k) / sigma;
    g.nodes_.push_back(x);
    if (x >= x_right) break;
    if (g.nodes_.size() > 50'000'000) throw std::runtime_error("grid node explosion");
  }
  return g;
}

std::array<double, 3> Grid::laplacian_weights(std::size_t i) const {
  const double hm = nodes_[i] - nodes_[i - 1];
  const double hp = nodes_[i + 1] - nodes_[i];
  return {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
}

double Grid::max_spacing_ratio() const {
  double r = 1.0;
  for (std::size_t i = 2; i < nodes_.size(); ++i) {
    const double a = nodes_[i] - nodes_[i - 1];
    const double b = nodes_[i - 1] - nodes_[i - 2];
    r = std::max(r, a / b);
  }
  return r;
}

Grid Grid::expanded_right(double new_right) const {
  if (!(new_right > nodes_.back())) throw std::invalid_argument("new_right must exceed x_N");
  Grid g = *this;
  if (kind_ == GridKind::uniform) {
    const double h = nodes_[1] - nodes_[0];
    double x = nodes_.back();
    while (x < new_right) {
      x += h;
      g.nodes_.push_back(x);
    }
    return g;
  }
  // Continue xi = k * dxi from the current right end.
  const double xi_last = std::log1p(sigma_ * (nodes_.back() - left_anchor_));
  int k = static_cast<int>(std::lround(xi_last / dxi_));
  for (;;) {
    ++k;
    const double x = left_anchor_ + std::expm1(dxi_ * k) / sigma_;
    if (x <= g.nodes_.back()) continue;
    g.nodes_.push_back(x);
    if (x >= new_right) break;
  }
  return g;
}

std::pair<Grid, std::vector<std::size_t>> Grid::coarsened_left(double flat_end) const {
  std::size_t end = 0;
  while (end < nodes_.size() && nodes_[end] < flat_end) ++end;
  // Keep an even pattern so the retained region stays smooth; never touch
  // the last two nodes before `end` to avoid a spacing jump above 2x there.
  Grid g = *this;
  g.nodes_.clear();
  std::vector<std::size_t> map;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const bool drop = i > 0 && i + 1 < end && (i % 2 == 1);
    if (!drop) {
      g.nodes_.push_back(nodes_[i]);
      map.push_back(i);
    }
  }
  return {std::move(g), std::move(map)};
}

std::pair<Grid, std::vector<double>> expand_right(
    const Grid& g, const std::vector<double>& u, double new_right,
    const std::function<double(double)>& seed) {
  Grid bigger = g.expanded_right(new_right);
  std::vector<double> v = u;
  v.reserve(bigger.size());
  for (std::size_t i = u.size(); i < bigger.size(); ++i) v.push_back(seed(bigger.node(i)));
  return {std::move(bigger), std::move(v)};
}

}  // namespace kpplab
