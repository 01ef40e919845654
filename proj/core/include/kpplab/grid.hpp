#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace kpplab {

enum class GridKind { uniform, log_stretched };

/// Strictly increasing 1-D node sequence. log_stretched grids are uniform in
/// xi where x = left_anchor + (e^xi - 1)/sigma; the local spacing ratio
/// h_{i+1}/h_i then equals e^{dxi} and must stay within [1, 1.05].
/// Grids are immutable snapshots; expansion produces a new grid.
class Grid {
 public:
  Grid() = default;  // empty grid; fill via the named constructors

  static Grid build(GridKind kind, double x_left, double x_right, int n,
                    double stretch = 0.0);

  /// Composite grid used by the front solver: a uniform head with spacing
  /// dxi/sigma on [x_left, anchor], then the stretched law beyond the anchor
  /// until at least x_right is covered.
  static Grid stretched_with_uniform_head(double x_left, double anchor, double x_right,
                                          double dxi, double sigma);

  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }
  double x_left() const { return nodes_.front(); }
  double x_right() const { return nodes_.back(); }

  GridKind kind() const { return kind_; }
  double left_anchor() const { return left_anchor_; }
  double sigma() const { return sigma_; }
  double dxi() const { return dxi_; }

  /// Three-point Laplacian weights at interior node i; exact on quadratics.
  std::array<double, 3> laplacian_weights(std::size_t i) const;

  /// Largest spacing ratio h_{i+1}/h_i over the grid.
  double max_spacing_ratio() const;

  /// Continues the grid's law to the right until new_right is covered.
  Grid expanded_right(double new_right) const;

  /// Drops every other node on [x_0, flat_end); returns the coarsened grid
  /// and the index map from new nodes to old nodes.
  std::pair<Grid, std::vector<std::size_t>> coarsened_left(double flat_end) const;

 private:
  std::vector<double> nodes_;
  GridKind kind_ = GridKind::uniform;
  double left_anchor_ = 0.0;
  double sigma_ = 0.0;
  double dxi_ = 0.0;
  double head_h_ = 0.0;  // spacing of the uniform head (0: no head)
};

/// Extends grid and nodal values to cover new_right; fresh nodes get values
/// from `seed`, existing nodes and values are carried over unchanged.
std::pair<Grid, std::vector<double>> expand_right(
    const Grid& g, const std::vector<double>& u, double new_right,
    const std::function<double(double)>& seed);

}  // namespace kpplab
