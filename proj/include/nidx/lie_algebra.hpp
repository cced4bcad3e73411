#pragma once

#include "nidx/operators.hpp"
#include "nidx/space.hpp"

#include <vector>

namespace nidx {

/// Basis of the skew-hermitian operators Z(X) = {S : v(S) = 0}, orthonormal
/// in the Frobenius inner product.
struct LieBasis {
  Space space;
  std::vector<Mat> elements;
  std::vector<double> residuals;  // sampled radius of each element
  int constraint_count = 0;
  /// First kept singular value over first dropped one (relative to the
  /// threshold when nothing is dropped). Large means an unambiguous split.
  double svd_gap = 0.0;
  std::vector<double> singular_values;  // ascending
  int rejected = 0;                     // null directions failing verification

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
};

struct LieOptions {
  int constraints = 0;         // 0: 40 * dim^2
  double keep_threshold = 1e-8;  // sigma < threshold * sigma_max marks a null direction
  double min_gap = 10.0;
  double verify_tol = 1e-4;      // residual <= verify_tol * ||S||
  long verify_budget = 4000;
};

/// Samples duality pairs, stacks the linear constraints x*(S x) = 0 and keeps
/// the verified null space. Throws NumericalDiagnostic when the singular
/// value gap is below opt.min_gap.
LieBasis lie_basis(const Space& space, std::uint64_t seed, const LieOptions& opt = {});

/// Sampled numerical radius of S; about 0 for members of Z(X).
double verify_skew(const Operator& S, long budget, std::uint64_t seed);

/// Connected components of the coupling graph (i ~ j when some basis element
/// has |S_ij| > tol). Components of size >= 2 are candidate Hilbert parts.
std::vector<std::vector<int>> detect_components(const Space& space, const LieBasis& basis,
                                                double tol = 1e-6);

}  // namespace nidx
