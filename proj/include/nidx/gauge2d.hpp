#pragma once

#include "nidx/types.hpp"

#include <functional>
#include <vector>

namespace nidx {

/// Absolute norm on R^2 given by its unit sphere in the closed positive
/// quadrant, a convex polygonal arc from (1,0) to (0,1). The full sphere is
/// obtained by reflection in both axes.
///
/// Tables loaded from disk are radii on a uniform angular grid over
/// [0, pi/2]; the arc through those boundary points is the unit sphere.
/// Duals are represented exactly: the dual arc has the edge normals of the
/// primal arc as vertices, so they generally do not sit on a uniform grid.
class Gauge2d {
 public:
  /// Default table resolution (512 intervals, so pi/4 is a grid angle).
  static constexpr int kDefaultSamples = 513;

  static Gauge2d from_radii(std::vector<double> radii);
  /// Samples the boundary of `norm` at `samples` uniform angles.
  static Gauge2d from_function(const std::function<double(double, double)>& norm,
                               int samples = kDefaultSamples);
  /// Arbitrary convex arc; vertices must start at (1,0), end at (0,1) and be
  /// ordered by increasing angle.
  static Gauge2d from_vertices(std::vector<Eigen::Vector2d> vertices);

  double norm(double s, double t) const;
  /// A norming functional direction at (s,t) != 0. `smooth` reports whether
  /// the norm is differentiable there.
  Eigen::Vector2d subgradient(double s, double t, bool* smooth = nullptr) const;
  /// Support function of the unit ball, i.e. the dual norm.
  double dual_norm(double a, double b) const;
  Gauge2d dual() const;

  bool uniform_grid() const { return uniform_; }
  /// Radii at the vertices (the `samples` table when the grid is uniform).
  std::vector<double> radii() const;
  std::vector<double> angles() const { return angles_; }
  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }

 private:
  Gauge2d() = default;
  int edge_for(double a, double b) const;

  std::vector<Eigen::Vector2d> vertices_;
  std::vector<double> angles_;
  std::vector<Eigen::Vector2d> normals_;  // one per edge, n . v = 1 on the edge
  bool uniform_ = false;
};

}  // namespace nidx
