#pragma once

#include "nidx/space.hpp"
#include "nidx/types.hpp"

#include <optional>
#include <string>

namespace nidx {

/// Dense matrix acting on column vectors of `space`.
class Operator {
 public:
  Operator(Mat matrix, Space space);

  const Mat& matrix() const { return matrix_; }
  const Space& space() const { return space_; }
  int dim() const { return space_.dim(); }

 private:
  Mat matrix_;
  Space space_;
};

enum class Direction { lower, upper, two_sided };
std::string to_string(Direction d);

struct Estimate {
  double value = 0.0;
  Direction direction = Direction::lower;
  std::optional<Vec> witness_x;      // unit vector achieving the value
  std::optional<Vec> witness_xstar;  // paired functional (radius estimates)
  std::optional<Mat> witness_matrix;
  /// Bracket for values that are only bracketed (quotient norms).
  std::optional<double> bracket_lower;
  std::optional<double> bracket_upper;
  long budget = 0;
  std::uint64_t seed = 0;
};

struct AscentOptions {
  int starts = 16;
  int steps = 200;
  double fd_step = 1e-5;
};

/// sup ||Tx|| over the unit sphere. Exact (two-sided) for l1, l2, l_inf;
/// otherwise a lower estimate from `budget` sphere samples plus local ascent.
Estimate op_norm(const Operator& T, long budget, std::uint64_t seed, const AscentOptions& asc = {},
                 bool closed_forms = true);
/// Exact operator norm when the space is l1, l2 or l_inf in its coordinates.
std::optional<double> op_norm_closed(const Operator& T);

/// Lower estimate of the numerical radius sup |x*(Tx)| over duality pairs
/// with gap <= delta, from sampled smooth points refined by ascent.
Estimate numerical_radius(const Operator& T, long budget, std::uint64_t seed, double delta = 1e-6,
                          const AscentOptions& asc = {});
/// Exact numerical radius for l1, l2 and l_inf; nullopt otherwise.
std::optional<double> numerical_radius_closed(const Operator& T);

/// Transpose acting on the dual space.
Operator adjoint(const Operator& T);

/// Delta default per space family (tighter for smooth families).
double default_delta(const Space& space);

}  // namespace nidx
