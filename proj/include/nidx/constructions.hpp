#pragma once

#include "nidx/operators.hpp"
#include "nidx/space.hpp"

#include <vector>

namespace nidx {

Space absolute_sum(const Space& left, const Space& right, const Space& outer);
Space esum(const Space& E, std::vector<Space> summands);

/// Block-diagonal extension of T (acting on summand `block` of `sum`) by zero.
/// Refused when the outer norm is Euclidean, where Z(sum) need not be
/// block-diagonal.
Operator lift_operator(const Operator& T, const Space& sum, std::size_t block = 0);

/// T1(y, w) = ((y1|y) y1 + sqrt(2) w1*(w) y2, 0) on H (+)_inf W.
Operator example_T1(const Space& sum, const Vec& y1, const Vec& y2, const Vec& w1star);
/// Standard-basis choice: y1 = e1, y2 = e2 in H, w1* the first coordinate functional of W.
Operator example_T1(const Space& sum);
/// T2(y, w) = ((y1|y) y1, sqrt(2) (y2|y) w1) on H (+)_1 W.
Operator example_T2(const Space& sum, const Vec& y1, const Vec& y2, const Vec& w1);
Operator example_T2(const Space& sum);

/// Same operators between block `h` (Euclidean, dim >= 2) and block `w` of a
/// sum with any number of blocks, built from coordinate vectors.
Mat t1_block_matrix(const Space& sum, std::size_t h, std::size_t w);
Mat t2_block_matrix(const Space& sum, std::size_t h, std::size_t w);

/// Entry (1,2) = 1 (U1 = e2* (x) e1) or entry (2,1) = 1 (U2 = e1* (x) e2).
enum class ShiftDirection { u12, u21 };

struct ShiftOperator {
  Space E;
  int source = 0;  // mu, 0-based
  int target = 0;  // nu, 0-based
  Mat matrix;
  Operator op() const { return Operator(matrix, E); }
};

ShiftOperator shift_operator(const Space& E, ShiftDirection d);

/// Positive operator U on the outer space of a sum lifted to the sum:
/// T(x)(l) = [U a_x](l) y_l with y_l the first coordinate vector of block l
/// and a_x(l) its coordinate functional applied to x(l).
Operator lift_positive_operator(const Mat& U, const Space& sum);

struct ShiftBoundReport {
  double v_u1 = 0.0;
  double v_u2 = 0.0;
  double k = 0.0;
  double norm_e1_plus_e2 = 0.0;       // xi = |e1 + e2|
  double dual_norm_e1_plus_e2 = 0.0;  // |e1* + e2*|
  double lhs = 0.0;
  double rhs = 0.0;  // 1 - sqrt(1 - k^2) + k
  double margin_shift = 0.0;
  double margin_l1_factor = 0.0;  // min over sampled unit (a,b) of (3 - xi) - ||(a,b)||_1
  double margin_l1_lower = 0.0;   // min of ||(a,b)||_1 - |(a,b)|
  bool pass = false;
};

ShiftBoundReport shift_bound_check(const Space& E, long budget, std::uint64_t seed, double tol = 2e-2);

/// E-sum of m copies of l2^2 over l_inf^m: C(K, l2^2) for a K of m points.
Space ck_space(int m);
/// T(f, g) = (f, sqrt(2) f(t2)) with t2 the second point.
Operator ck_operator(int m);

/// Random absolute normalized norm on R^2 (mixtures / maxima of lp norms).
Gauge2d random_gauge(std::uint64_t seed);
/// Sup distance between boundary radii on the uniform grid.
double gauge_distance(const Space& a, const Space& b, int samples = Gauge2d::kDefaultSamples);
/// Distance to the nearest of l1^2, l2^2, l_inf^2.
double distance_to_classical(const Space& E2);

}  // namespace nidx
