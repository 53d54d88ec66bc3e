#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "syncarena/types.hpp"

namespace syncarena {

struct LevelLoop {
  std::vector<Vec2d> vertices;
  // True if the loop closes along the edge of the sampled window rather than
  // on the level set itself.
  bool clipped = false;
};

/// Closed zero-level loops of a scalar field sampled on a rectilinear grid.
///
/// field(i, k) is the value at (xs[i], ys[k]); a node is inside when its value
/// is < 0 and everything beyond the grid counts as outside, so every loop is
/// closed. Saddle cells are split by the cell-centre average. Vertices on
/// interior edges are placed on the zero of `f` by bisection along the edge.
std::vector<LevelLoop> extract_level_loops(const Eigen::ArrayXXd& field, const Eigen::VectorXd& xs,
                                           const Eigen::VectorXd& ys,
                                           const std::function<double(double, double)>& f);

}  // namespace syncarena
