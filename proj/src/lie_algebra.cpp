#include "nidx/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace nidx {

namespace {

Mat unvec(const Vec& v, int n) {
  Mat m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = v[a * n + b];
  return m;
}

/// Canonical orthonormal basis of span(N): repeatedly project the standard
/// basis matrices onto the remaining subspace and take the largest (first on
/// ties), so the result does not depend on the SVD's internal rotation.
std::vector<Vec> canonical_basis(const Mat& N) {
  const Eigen::Index m = N.rows();
  Mat P = N * N.transpose();
  std::vector<Vec> out;
  for (Eigen::Index k = 0; k < N.cols(); ++k) {
    Vec diag = P.diagonal();
    double best = diag.maxCoeff();
    if (!(best > 1e-12)) break;
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (diag[i] >= best * (1.0 - 1e-9)) {
        pick = i;
        break;
      }
    Vec b = P.col(pick) / std::sqrt(diag[pick]);
    // sign: positive at the pivot
    if (b[pick] < 0) b = -b;
    P -= b * b.transpose();
    out.push_back(b);
  }
  return out;
}

}  // namespace

double verify_skew(const Operator& S, long budget, std::uint64_t seed) {
  if (auto c = numerical_radius_closed(S)) return *c;
  return numerical_radius(S, budget, seed, default_delta(S.space())).value;
}

LieBasis lie_basis(const Space& space, std::uint64_t seed, const LieOptions& opt) {
  const int n = space.dim();
  const int n2 = n * n;
  const int rows = opt.constraints > 0 ? opt.constraints : 40 * n2;
  require(rows >= 10 * n2, "lie_basis: budget must be at least 10 * dim^2 constraints");

  LieBasis out{space, {}, {}, rows, 0.0, {}, 0};
  std::vector<Vec> pts = sample_sphere(space, rows, seed);
  Rng rng(derive_seed(seed, 7));
  Mat A(rows, n2);
  for (int r = 0; r < rows; ++r) {
    DualityPair pr;
    for (Vec x = pts[r];;) {
      try {
        pr = norming_functional_retry(space, x, rng);
        break;
      } catch (const NonSmoothPoint&) {
        x = gaussian_vector(rng, n);
        x /= space.norm(x);
      }
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) A(r, a * n + b) = pr.xstar[a] * pr.x[b];
  }

  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinV);
  Vec sv = svd.singularValues();  // descending
  const double smax = sv[0];
  const double thr = opt.keep_threshold * smax;
  int kept = 0;
  while (kept < n2 && sv[kept] >= thr) ++kept;
  for (int i = n2 - 1; i >= 0; --i) out.singular_values.push_back(sv[i]);
  if (kept == n2)
    out.svd_gap = sv[n2 - 1] / thr;
  else if (kept == 0)
    out.svd_gap = kInf;
  else
    out.svd_gap = sv[kept] > 0 ? sv[kept - 1] / sv[kept] : kInf;
  if (out.svd_gap < opt.min_gap)
    throw NumericalDiagnostic("lie_basis: ambiguous null space (svd_gap " + std::to_string(out.svd_gap) +
                              " < " + std::to_string(opt.min_gap) + "); increase the constraint budget");
  if (kept == n2) return out;

  Mat N = svd.matrixV().rightCols(n2 - kept);
  for (const Vec& b : canonical_basis(N)) {
    Mat S = unvec(b, n);
    Operator op(S, space);
    double scale = op_norm(op, 2000, derive_seed(seed, 11)).value;
    double res = verify_skew(op, opt.verify_budget, derive_seed(seed, 13));
    if (res <= opt.verify_tol * std::max(scale, 1e-300)) {
      out.elements.push_back(S);
      out.residuals.push_back(res);
    } else {
      ++out.rejected;
    }
  }
  return out;
}

std::vector<std::vector<int>> detect_components(const Space& space, const LieBasis& basis, double tol) {
  const int n = space.dim();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const Mat& S : basis.elements) {
    require(S.rows() == n, "detect_components: basis does not match space");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && std::abs(S(i, j)) > tol) parent[find(i)] = find(j);
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nidx
