#pragma once

#include "nidx/lie_algebra.hpp"
#include "nidx/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nidx {

struct QuotientOptions {
  int restarts = 20;
  int iterations = 400;
  long inner_budget = 20000;
  int max_rounds = 30;
  bool closed_forms = true;  // false forces the optimization route on Hilbert spaces
};

/// ||T + Z(X)|| = inf_S ||T - S||. Hilbert spaces use ||(T + T^t)/2||_2;
/// otherwise a convex minimax over the basis coefficients solved by simplex
/// descent against a growing set of active sphere points. `value` is the
/// sampled operator norm at the final coefficients; bracket_lower is the
/// active-set minimum. witness_matrix holds the minimizing T - S.
Estimate quotient_norm(const Operator& T, const LieBasis& basis, std::uint64_t seed,
                       const QuotientOptions& opt = {});

struct CandidateRecord {
  std::string label;
  double proxy = 0.0;  // pooled ratio used during search
  double radius = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  bool evaluated = false;
};

/// Upper estimate of n(X) or n'(X) with the operator that achieves it.
struct IndexEstimate {
  double value = 0.0;
  Direction direction = Direction::upper;
  Mat witness;
  std::string witness_label;
  double witness_radius = 0.0;
  double witness_denominator = 0.0;
  int restarts = 0;
  long inner_budget = 0;
  std::uint64_t seed = 0;
  bool exact = false;  // known closed-form value substituted
  std::size_t lie_dimension = 0;
  std::vector<CandidateRecord> candidates;
};

struct IndexOptions {
  int restarts = 2;
  long budget = 20000;  // sampling budget of each full evaluation
  std::uint64_t seed = 0;
  int search_iterations = 500;
  int full_candidates = 6;  // best proxy candidates promoted to full evaluation
  bool structured = true;   // coordinate shifts, rotations, T1/T2 blocks, Lie elements
  std::vector<Mat> seeds;   // extra candidates, always fully evaluated
  QuotientOptions quotient{};
  bool closed_forms = true;  // Hilbert shortcuts and exact l1/l2/l_inf evaluation
};

struct RatioEvaluation {
  double radius = 0.0;
  double denominator = 0.0;
  double ratio = kInf;  // inf when the denominator vanishes (T inside Z(X))
};

/// v(T)/||T|| (basis == nullptr) or v(T)/||T + Z(X)||, evaluated with the
/// same estimators the index search uses; deterministic in (T, budget, seed).
RatioEvaluation evaluate_ratio(const Operator& T, const LieBasis* basis, long budget, std::uint64_t seed,
                               const QuotientOptions& qopt = {}, bool closed_forms = true);

IndexEstimate estimate_index(const Space& space, const IndexOptions& opt = {});
/// `basis` may be supplied to avoid recomputing Z(X).
IndexEstimate estimate_second_index(const Space& space, const IndexOptions& opt = {},
                                    const LieBasis* basis = nullptr);

}  // namespace nidx
