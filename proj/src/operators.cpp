#include "nidx/operators.hpp"

#include "nidx/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nidx {

Operator::Operator(Mat matrix, Space space) : matrix_(std::move(matrix)), space_(std::move(space)) {
  require(matrix_.rows() == matrix_.cols(), "operator: matrix must be square");
  require(matrix_.rows() == space_.dim(), "operator: matrix side does not match space dim");
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::lower:
      return "lower";
    case Direction::upper:
      return "upper";
    case Direction::two_sided:
      return "two_sided";
  }
  return "?";
}

namespace {

bool contains_gauge(const Space& s) {
  switch (s.kind()) {
    case Space::Kind::gauge2d:
      return true;
    case Space::Kind::lp:
      return false;
    case Space::Kind::dual:
      return contains_gauge(s.of());
    default:
      if (contains_gauge(s.outer())) return true;
      for (const auto& b : s.blocks())
        if (contains_gauge(b)) return true;
      return false;
  }
}

std::vector<std::size_t> top_indices(const std::vector<double>& v, std::size_t k) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](auto a, auto b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
  idx.resize(k);
  return idx;
}

}  // namespace

double default_delta(const Space& space) { return contains_gauge(space) ? 1e-3 : 1e-6; }

std::optional<double> op_norm_closed(const Operator& T) {
  auto p = T.space().lp_exponent();
  if (!p) return std::nullopt;
  const Mat& A = T.matrix();
  if (*p == 2.0) return Eigen::JacobiSVD<Mat>(A).singularValues()(0);
  if (std::isinf(*p)) return A.cwiseAbs().rowwise().sum().maxCoeff();
  if (*p == 1.0) return A.cwiseAbs().colwise().sum().maxCoeff();
  return std::nullopt;
}

Estimate op_norm(const Operator& T, long budget, std::uint64_t seed, const AscentOptions& asc, bool closed_forms) {
  require(budget >= 1, "op_norm: budget must be >= 1");
  const Space& X = T.space();
  const Mat& A = T.matrix();
  Estimate e;
  e.budget = budget;
  e.seed = seed;

  if (auto p = X.lp_exponent(); closed_forms && p && (*p == 1.0 || *p == 2.0 || std::isinf(*p))) {
    const int n = X.dim();
    Vec w = Vec::Zero(n);
    if (*p == 2.0) {
      Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
      w = svd.matrixV().col(0);
    } else if (std::isinf(*p)) {
      Eigen::Index r = 0;
      A.cwiseAbs().rowwise().sum().maxCoeff(&r);
      for (int j = 0; j < n; ++j) w[j] = A(r, j) >= 0 ? 1.0 : -1.0;
    } else {
      Eigen::Index c = 0;
      A.cwiseAbs().colwise().sum().maxCoeff(&c);
      w[c] = 1.0;
    }
    w /= X.norm(w);
    e.value = *op_norm_closed(T);
    e.direction = Direction::two_sided;
    e.witness_x = w;
    return e;
  }

  auto project = [&](const Vec& x) -> Vec { return x / X.norm(x); };
  auto objective = [&](const Vec& x) { return X.norm(A * x); };
  std::vector<Vec> pts = sample_sphere_two_sided(X, static_cast<int>(std::min<long>(budget, 1L << 30)), seed);
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = objective(pts[i]);
  e.direction = Direction::lower;
  e.value = -1.0;
  for (std::size_t i : top_indices(vals, static_cast<std::size_t>(asc.starts))) {
    AscentResult r = sphere_ascent(objective, project, pts[i], asc.steps, asc.fd_step);
    if (r.f > e.value) {
      e.value = r.f;
      e.witness_x = r.x;
    }
  }
  e.witness_x = sphere_polish(objective, project, *e.witness_x, e.value).x;
  e.value = X.norm(A * *e.witness_x);
  return e;
}

std::optional<double> numerical_radius_closed(const Operator& T) {
  auto p = T.space().lp_exponent();
  if (!p) return std::nullopt;
  const Mat& A = T.matrix();
  const Eigen::Index n = A.rows();
  if (*p == 2.0) {
    Mat sym = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (std::isinf(*p) || *p == 1.0) {
    const bool rows = std::isinf(*p);
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = std::abs(A(i, i));
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) s += rows ? std::abs(A(i, j)) : std::abs(A(j, i));
      best = std::max(best, s);
    }
    return best;
  }
  return std::nullopt;
}

Estimate numerical_radius(const Operator& T, long budget, std::uint64_t seed, double delta,
                          const AscentOptions& asc) {
  require(budget >= 1, "numerical_radius: budget must be >= 1");
  require(delta >= 0.0 && delta <= 0.1, "numerical_radius: delta must lie in [0, 0.1]");
  const Space& X = T.space();
  const Mat& A = T.matrix();
  Rng rng(derive_seed(seed, 1));

  // Best |x*(Ax)| over norming functionals of x. Besides the subgradient at x
  // this tries the subgradients at x +- s Ax, which pick the extreme
  // functionals of the subdifferential in the direction of Ax; they norm x up
  // to a gap of order s.
  auto best_functional = [&](const Vec& x, Vec* xstar) {
    const Vec y = A * x;
    double best = -1.0;
    auto consider = [&](const Vec& z) {
      Vec g = X.subgradient(z);
      if (!(1.0 - g.dot(x) <= delta)) return;
      const double v = std::abs(g.dot(y));
      if (v > best) {
        best = v;
        if (xstar) *xstar = std::move(g);
      }
    };
    consider(x);
    const double ny = y.norm();
    if (ny > 0.0) {
      const double s = 1e-9 * x.norm() / ny;
      consider(x + s * y);
      consider(x - s * y);
    }
    return best;
  };

  const int total = static_cast<int>(std::min<long>(budget, 1L << 30));
  std::vector<Vec> dual_side = sample_sphere_two_sided(X, total, seed);
  const auto split = dual_side.begin() + static_cast<std::ptrdiff_t>(total - total / 2);
  std::vector<Vec> primal(std::make_move_iterator(dual_side.begin()), std::make_move_iterator(split));
  dual_side.erase(dual_side.begin(), split);
  std::vector<Vec> pts;
  std::vector<double> vals;
  pts.reserve(static_cast<std::size_t>(total));
  long failures = 0;
  for (const Vec& x : primal) {
    try {
      DualityPair pr = norming_functional_retry(X, x, rng);
      if (pr.gap > delta) {
        ++failures;
        continue;
      }
      vals.push_back(best_functional(pr.x, nullptr));
      pts.push_back(std::move(pr.x));
    } catch (const NonSmoothPoint&) {
      ++failures;
    }
  }
  if (2 * failures > static_cast<long>(primal.size()))
    throw NumericalDiagnostic("numerical_radius: norm is non-smooth at most sampled points (" +
                              std::to_string(failures) + "/" + std::to_string(primal.size()) +
                              "); the norm is likely degenerate");
  for (Vec& x : dual_side) {
    const double v = best_functional(x, nullptr);
    if (v < 0.0) continue;
    vals.push_back(v);
    pts.push_back(std::move(x));
  }

  auto project = [&](const Vec& x) -> Vec { return x / X.norm(x); };
  auto objective = [&](const Vec& x) { return std::max(0.0, best_functional(x, nullptr)); };

  Estimate e;
  e.direction = Direction::lower;
  e.budget = budget;
  e.seed = seed;
  e.value = -1.0;
  for (std::size_t i : top_indices(vals, static_cast<std::size_t>(asc.starts))) {
    AscentResult r = sphere_ascent(objective, project, pts[i], asc.steps, asc.fd_step);
    if (r.f > e.value) {
      e.value = r.f;
      e.witness_x = r.x;
    }
  }
  if (!e.witness_x) {
    e.value = 0.0;
    return e;
  }
  e.witness_x = sphere_polish(objective, project, *e.witness_x, e.value).x;
  Vec xs;
  e.value = std::max(0.0, best_functional(*e.witness_x, &xs));
  if (xs.size() == 0) xs = X.subgradient(*e.witness_x);
  e.witness_xstar = xs;
  return e;
}

Operator adjoint(const Operator& T) { return Operator(T.matrix().transpose(), build_dual(T.space())); }

}  // namespace nidx
