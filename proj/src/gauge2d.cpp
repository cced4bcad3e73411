#include "nidx/gauge2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nidx {

namespace {

constexpr double kTableTol = 1e-9;

}  // namespace

Gauge2d Gauge2d::from_radii(std::vector<double> radii) {
  const int m = static_cast<int>(radii.size());
  require(m >= 2, "gauge2d: samples table needs at least 2 radii");
  for (int k = 0; k < m; ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) {
      std::ostringstream os;
      os << "gauge2d: samples[" << k << "] must be a positive finite radius";
      throw ValidationError(os.str());
    }
  }
  if (std::abs(radii.front() - 1.0) > kTableTol || std::abs(radii.back() - 1.0) > kTableTol)
    throw ValidationError("gauge2d: table not normalized, need radius 1 at angles 0 and pi/2");
  std::vector<Eigen::Vector2d> verts(m);
  const double step = (std::numbers::pi / 2.0) / (m - 1);
  for (int k = 0; k < m; ++k) {
    double th = k * step;
    verts[k] = radii[k] * Eigen::Vector2d(std::cos(th), std::sin(th));
  }
  verts.front() = {1.0, 0.0};
  verts.back() = {0.0, 1.0};
  Gauge2d g = from_vertices(std::move(verts));
  g.uniform_ = static_cast<int>(g.vertices_.size()) == m;
  return g;
}

Gauge2d Gauge2d::from_function(const std::function<double(double, double)>& norm, int samples) {
  require(samples >= 2, "gauge2d: need at least 2 samples");
  std::vector<double> radii(samples);
  const double step = (std::numbers::pi / 2.0) / (samples - 1);
  for (int k = 0; k < samples; ++k) {
    double th = k * step;
    double c = k == samples - 1 ? 0.0 : std::cos(th);
    double s = k == 0 ? 0.0 : std::sin(th);
    radii[k] = 1.0 / norm(c, s);
  }
  radii.front() = 1.0 / norm(1.0, 0.0);
  radii.back() = 1.0 / norm(0.0, 1.0);
  return from_radii(std::move(radii));
}

Gauge2d Gauge2d::from_vertices(std::vector<Eigen::Vector2d> vertices) {
  require(vertices.size() >= 2, "gauge2d: need at least 2 vertices");
  if ((vertices.front() - Eigen::Vector2d(1, 0)).norm() > kTableTol ||
      (vertices.back() - Eigen::Vector2d(0, 1)).norm() > kTableTol)
    throw ValidationError("gauge2d: table not normalized, need |e1| = |e2| = 1");
  vertices.front() = {1.0, 0.0};
  vertices.back() = {0.0, 1.0};

  Gauge2d g;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const auto& v = vertices[k];
    if (v.x() < -kTableTol || v.y() < -kTableTol)
      throw ValidationError("gauge2d: boundary point outside the positive quadrant");
    // near-duplicates arise from collinear edges; keep the endpoints exact
    if (!g.vertices_.empty() && (v - g.vertices_.back()).norm() < 1e-10) {
      if (k + 1 == vertices.size()) g.vertices_.back() = v;
      continue;
    }
    g.vertices_.push_back(v.cwiseMax(0.0));
  }
  for (const auto& v : g.vertices_) g.angles_.push_back(std::atan2(v.y(), v.x()));
  for (std::size_t k = 1; k < g.angles_.size(); ++k)
    if (!(g.angles_[k] > g.angles_[k - 1]))
      throw ValidationError("gauge2d: boundary angles must be strictly increasing");

  for (std::size_t k = 0; k + 1 < g.vertices_.size(); ++k) {
    const auto& p = g.vertices_[k];
    const auto& q = g.vertices_[k + 1];
    double det = p.x() * q.y() - p.y() * q.x();
    Eigen::Vector2d n((q.y() - p.y()) / det, (p.x() - q.x()) / det);
    if (n.x() < -1e-9 || n.y() < -1e-9) {
      std::ostringstream os;
      os << "gauge2d: boundary not monotone near vertex " << k
         << " (the reflected norm would not be absolute)";
      throw ValidationError(os.str());
    }
    g.normals_.push_back(n.cwiseMax(0.0));
  }
  for (std::size_t k = 0; k + 2 < g.vertices_.size(); ++k) {
    Eigen::Vector2d e1 = g.vertices_[k + 1] - g.vertices_[k];
    Eigen::Vector2d e2 = g.vertices_[k + 2] - g.vertices_[k + 1];
    double cross = e1.x() * e2.y() - e1.y() * e2.x();
    if (cross < -1e-12 * e1.norm() * e2.norm() - 1e-15) {
      std::ostringstream os;
      os << "gauge2d: boundary not convex at vertex " << k + 1 << " (not a norm)";
      throw ValidationError(os.str());
    }
  }
  return g;
}

int Gauge2d::edge_for(double a, double b) const {
  double phi = std::atan2(b, a);
  auto it = std::upper_bound(angles_.begin(), angles_.end(), phi);
  int k = static_cast<int>(it - angles_.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(normals_.size()) - 1);
}

double Gauge2d::norm(double s, double t) const {
  double a = std::abs(s), b = std::abs(t);
  if (a == 0.0 && b == 0.0) return 0.0;
  int k = edge_for(a, b);
  // the norm is the max over all edge functionals; neighbours absorb
  // rounding in the angle lookup
  double best = normals_[k].dot(Eigen::Vector2d(a, b));
  if (k > 0) best = std::max(best, normals_[k - 1].dot(Eigen::Vector2d(a, b)));
  if (k + 1 < static_cast<int>(normals_.size()))
    best = std::max(best, normals_[k + 1].dot(Eigen::Vector2d(a, b)));
  return best;
}

Eigen::Vector2d Gauge2d::subgradient(double s, double t, bool* smooth) const {
  double a = std::abs(s), b = std::abs(t);
  bool ok = true;
  int k = edge_for(a, b);
  Eigen::Vector2d ab(a, b);
  int best = k;
  for (int j : {k - 1, k + 1}) {
    if (j < 0 || j >= static_cast<int>(normals_.size())) continue;
    if (normals_[j].dot(ab) > normals_[best].dot(ab)) best = j;
  }
  double val = normals_[best].dot(ab);
  for (int j : {best - 1, best + 1}) {
    if (j < 0 || j >= static_cast<int>(normals_.size())) continue;
    if (normals_[j].dot(ab) >= val * (1.0 - 1e-13) &&
        (normals_[j] - normals_[best]).norm() > 1e-7)
      ok = false;
  }
  Eigen::Vector2d n = normals_[best];
  Eigen::Vector2d g(s > 0 ? n.x() : (s < 0 ? -n.x() : 0.0),
                    t > 0 ? n.y() : (t < 0 ? -n.y() : 0.0));
  if ((s == 0.0 && n.x() > 1e-12) || (t == 0.0 && n.y() > 1e-12)) ok = false;
  if (smooth) *smooth = ok;
  return g;
}

double Gauge2d::dual_norm(double a, double b) const {
  Eigen::Vector2d ab(std::abs(a), std::abs(b));
  double best = 0.0;
  for (const auto& v : vertices_) best = std::max(best, v.dot(ab));
  return best;
}

Gauge2d Gauge2d::dual() const {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(normals_.size() + 2);
  pts.emplace_back(1.0, 0.0);
  for (const auto& n : normals_) pts.push_back(n);
  pts.emplace_back(0.0, 1.0);
  // Normals of very short edges carry rounding noise; keep only strict hull
  // vertices. The support function, hence the dual norm, is unchanged.
  std::vector<Eigen::Vector2d> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      Eigen::Vector2d e1 = hull.back() - hull[hull.size() - 2];
      Eigen::Vector2d e2 = p - hull.back();
      if (e1.x() * e2.y() - e1.y() * e2.x() > 1e-12 * e1.norm() * e2.norm()) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return from_vertices(std::move(hull));
}

std::vector<double> Gauge2d::radii() const {
  std::vector<double> r;
  r.reserve(vertices_.size());
  for (const auto& v : vertices_) r.push_back(v.norm());
  return r;
}

}  // namespace nidx
