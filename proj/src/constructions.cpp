#include "nidx/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nidx {

Space absolute_sum(const Space& left, const Space& right, const Space& outer) {
  return Space::absolute_sum(outer, left, right);
}

Space esum(const Space& E, std::vector<Space> summands) { return Space::esum(E, std::move(summands)); }

namespace {

void require_sum(const Space& sum) { require(sum.is_sum(), "expected an absolute_sum or esum space"); }

bool euclidean_outer(const Space& sum) {
  auto p = sum.outer().lp_exponent();
  return p && *p == 2.0;
}

}  // namespace

Operator lift_operator(const Operator& T, const Space& sum, std::size_t block) {
  require_sum(sum);
  require(block < sum.blocks().size(), "lift_operator: block index out of range");
  const Space& Y = sum.blocks()[block];
  require(Y.dim() == T.dim() && Y.to_string() == T.space().to_string(),
          "lift_operator: operator space does not match the summand");
  require(!euclidean_outer(sum), "lift_operator: outer norm is Euclidean; Z(X) need not be diagonal");
  Mat M = Mat::Zero(sum.dim(), sum.dim());
  const int off = sum.block_offset(block);
  M.block(off, off, Y.dim(), Y.dim()) = T.matrix();
  return Operator(std::move(M), sum);
}

Operator example_T1(const Space& sum, const Vec& y1, const Vec& y2, const Vec& w1star) {
  require(sum.kind() == Space::Kind::absolute_sum, "example_T1: expected H (+)_a W");
  const Space& H = sum.blocks()[0];
  const Space& W = sum.blocks()[1];
  require(H.is_hilbert() && H.dim() >= 2, "example_T1: H must be Euclidean with dim >= 2");
  require(y1.size() == H.dim() && y2.size() == H.dim() && w1star.size() == W.dim(),
          "example_T1: vector sizes do not match the summands");
  const int h = H.dim();
  Mat M = Mat::Zero(sum.dim(), sum.dim());
  M.block(0, 0, h, h) = y1 * y1.transpose();
  M.block(0, h, h, W.dim()) = std::sqrt(2.0) * y2 * w1star.transpose();
  return Operator(std::move(M), sum);
}

Operator example_T1(const Space& sum) {
  require(sum.kind() == Space::Kind::absolute_sum, "example_T1: expected H (+)_a W");
  const int h = sum.blocks()[0].dim(), w = sum.blocks()[1].dim();
  return example_T1(sum, Vec::Unit(h, 0), Vec::Unit(h, 1), Vec::Unit(w, 0));
}

Operator example_T2(const Space& sum, const Vec& y1, const Vec& y2, const Vec& w1) {
  require(sum.kind() == Space::Kind::absolute_sum, "example_T2: expected H (+)_a W");
  const Space& H = sum.blocks()[0];
  const Space& W = sum.blocks()[1];
  require(H.is_hilbert() && H.dim() >= 2, "example_T2: H must be Euclidean with dim >= 2");
  require(y1.size() == H.dim() && y2.size() == H.dim() && w1.size() == W.dim(),
          "example_T2: vector sizes do not match the summands");
  const int h = H.dim();
  Mat M = Mat::Zero(sum.dim(), sum.dim());
  M.block(0, 0, h, h) = y1 * y1.transpose();
  M.block(h, 0, W.dim(), h) = std::sqrt(2.0) * w1 * y2.transpose();
  return Operator(std::move(M), sum);
}

Operator example_T2(const Space& sum) {
  require(sum.kind() == Space::Kind::absolute_sum, "example_T2: expected H (+)_a W");
  const int h = sum.blocks()[0].dim(), w = sum.blocks()[1].dim();
  return example_T2(sum, Vec::Unit(h, 0), Vec::Unit(h, 1), Vec::Unit(w, 0));
}

Mat t1_block_matrix(const Space& sum, std::size_t h, std::size_t w) {
  require_sum(sum);
  require(h != w && h < sum.blocks().size() && w < sum.blocks().size(), "t1_block_matrix: bad blocks");
  require(sum.blocks()[h].is_hilbert() && sum.blocks()[h].dim() >= 2,
          "t1_block_matrix: block h must be Euclidean with dim >= 2");
  Mat M = Mat::Zero(sum.dim(), sum.dim());
  const int oh = sum.block_offset(h), ow = sum.block_offset(w);
  M(oh, oh) = 1.0;
  M(oh + 1, ow) = std::sqrt(2.0);
  return M;
}

Mat t2_block_matrix(const Space& sum, std::size_t h, std::size_t w) {
  require_sum(sum);
  require(h != w && h < sum.blocks().size() && w < sum.blocks().size(), "t2_block_matrix: bad blocks");
  require(sum.blocks()[h].is_hilbert() && sum.blocks()[h].dim() >= 2,
          "t2_block_matrix: block h must be Euclidean with dim >= 2");
  Mat M = Mat::Zero(sum.dim(), sum.dim());
  const int oh = sum.block_offset(h), ow = sum.block_offset(w);
  M(oh, oh) = 1.0;
  M(ow, oh + 1) = std::sqrt(2.0);
  return M;
}

ShiftOperator shift_operator(const Space& E, ShiftDirection d) {
  require(E.dim() == 2, "shift_operator: E must have dim 2");
  require(E.is_absolute(), "shift_operator: E must be absolute");
  ShiftOperator s{E, 0, 0, Mat::Zero(2, 2)};
  if (d == ShiftDirection::u12) {
    s.source = 1;
    s.target = 0;
  } else {
    s.source = 0;
    s.target = 1;
  }
  s.matrix(s.target, s.source) = 1.0;
  return s;
}

Operator lift_positive_operator(const Mat& U, const Space& sum) {
  require_sum(sum);
  const auto m = static_cast<Eigen::Index>(sum.blocks().size());
  require(U.rows() == m && U.cols() == m, "lift_positive_operator: U must act on the outer space");
  Mat M = Mat::Zero(sum.dim(), sum.dim());
  for (Eigen::Index l = 0; l < m; ++l)
    for (Eigen::Index k = 0; k < m; ++k)
      M(sum.block_offset(static_cast<std::size_t>(l)), sum.block_offset(static_cast<std::size_t>(k))) = U(l, k);
  return Operator(std::move(M), sum);
}

ShiftBoundReport shift_bound_check(const Space& E, long budget, std::uint64_t seed, double tol) {
  require(E.dim() == 2 && E.is_absolute(), "shift_bound_check: E must be a 2-D absolute norm");
  ShiftBoundReport r;
  const double delta = default_delta(E);
  r.v_u1 = numerical_radius(shift_operator(E, ShiftDirection::u12).op(), budget, derive_seed(seed, 1), delta).value;
  r.v_u2 = numerical_radius(shift_operator(E, ShiftDirection::u21).op(), budget, derive_seed(seed, 2), delta).value;
  r.k = std::clamp(std::min(r.v_u1, r.v_u2), 0.0, 1.0);
  Vec ones = Vec::Ones(2);
  r.norm_e1_plus_e2 = E.norm(ones);
  r.dual_norm_e1_plus_e2 = dual_norm(E, ones);
  r.lhs = std::max(r.norm_e1_plus_e2, r.dual_norm_e1_plus_e2);
  r.rhs = 1.0 - std::sqrt(1.0 - r.k * r.k) + r.k;
  r.margin_shift = r.lhs - r.rhs;

  const double xi = r.norm_e1_plus_e2;
  r.margin_l1_factor = kInf;
  r.margin_l1_lower = kInf;
  for (const Vec& x : sample_sphere(E, static_cast<int>(std::clamp<long>(budget, 1, 100000)), derive_seed(seed, 3))) {
    double l1 = x.lpNorm<1>();
    r.margin_l1_factor = std::min(r.margin_l1_factor, (3.0 - xi) - l1);
    r.margin_l1_lower = std::min(r.margin_l1_lower, l1 - 1.0);
  }
  r.pass = r.margin_shift >= -tol && r.margin_l1_factor >= -tol && r.margin_l1_lower >= -tol;
  return r;
}

Space ck_space(int m) {
  require(m >= 2, "ck_space: need at least 2 points");
  return Space::esum(Space::lp(m, kInf), std::vector<Space>(static_cast<std::size_t>(m), Space::lp(2, 2.0)));
}

Operator ck_operator(int m) {
  Space X = ck_space(m);
  Mat M = Mat::Zero(2 * m, 2 * m);
  const double r2 = std::sqrt(2.0);
  for (int t = 0; t < m; ++t) {
    M(2 * t, 2 * t) = 1.0;   // f component kept
    M(2 * t + 1, 2) = r2;    // g := sqrt(2) f(t2)
  }
  return Operator(std::move(M), X);
}

Gauge2d random_gauge(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x6a));
  auto draw_p = [&] {
    double u = uniform(rng, 0.0, 1.0);
    if (u < 0.15) return kInf;
    return 1.0 + std::pow(uniform(rng, 0.0, 1.0), 2.0) * 7.0;
  };
  auto lpn = [](double s, double t, double p) {
    s = std::abs(s);
    t = std::abs(t);
    if (std::isinf(p)) return std::max(s, t);
    double m = std::max(s, t);
    if (m == 0.0) return 0.0;
    return m * std::pow(std::pow(s / m, p) + std::pow(t / m, p), 1.0 / p);
  };
  const int type = static_cast<int>(uniform(rng, 0.0, 2.0));
  const double p = draw_p(), q = draw_p();
  if (type == 0) {
    const double a = uniform(rng, 0.1, 0.9);
    return Gauge2d::from_function([=](double s, double t) { return a * lpn(s, t, p) + (1 - a) * lpn(s, t, q); });
  }
  const double c = uniform(rng, 0.4, 1.0), d = uniform(rng, 0.4, 1.0);
  return Gauge2d::from_function(
      [=](double s, double t) { return std::max(lpn(s, t, p), c * std::abs(s) + d * std::abs(t)); });
}

double gauge_distance(const Space& a, const Space& b, int samples) {
  require(a.dim() == 2 && b.dim() == 2, "gauge_distance: 2-D spaces expected");
  double best = 0.0;
  const double step = (std::numbers::pi / 2.0) / (samples - 1);
  for (int k = 0; k < samples; ++k) {
    Vec u(2);
    u << std::cos(k * step), std::sin(k * step);
    best = std::max(best, std::abs(1.0 / a.norm(u) - 1.0 / b.norm(u)));
  }
  return best;
}

double distance_to_classical(const Space& E2) {
  double d = kInf;
  for (double p : {1.0, 2.0, kInf}) d = std::min(d, gauge_distance(E2, Space::lp(2, p)));
  return d;
}

}  // namespace nidx
