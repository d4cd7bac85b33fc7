// SPDX-License-Identifier: Apache-2.0
// Uniform-grid trajectory container shared by the steppers and the action
// functional.
#pragma once

#include <Eigen/Core>

#include "exitlab/errors.hpp"

namespace exitlab {

//! N+1 points on a uniform time grid over [0, horizon]; row i is the state at
//! time i*h with h = horizon/N.
struct Path {
  Eigen::MatrixXd points;  // (N+1) x dim
  double horizon = 0.0;

  Eigen::Index segments() const { return points.rows() - 1; }
  Eigen::Index dim() const { return points.cols(); }
  double spacing() const { return horizon / static_cast<double>(segments()); }

  void require_valid(Eigen::Index min_segments) const {
    if (segments() < min_segments) {
      throw ConfigError("path: need at least " + std::to_string(min_segments) +
                        " segments, got " + std::to_string(segments()));
    }
    if (!(horizon > 0.0)) {
      throw ConfigError("path: horizon must be positive");
    }
    if (!points.allFinite()) {
      throw NumericalError("path: non-finite point");
    }
  }

  //! Linear interpolation at time t (clamped to [0, horizon]).
  Eigen::VectorXd at_time(double t) const {
    const double h = spacing();
    if (t <= 0.0) return points.row(0);
    if (t >= horizon) return points.row(points.rows() - 1);
    const double s = t / h;
    const auto i = static_cast<Eigen::Index>(s);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * points.row(i).transpose() + w * points.row(i + 1).transpose();
  }
};

}  // namespace exitlab
