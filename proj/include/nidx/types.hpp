#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nidx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Malformed input: bad dimensions, invalid norm tables, unknown ids.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation finished but its result cannot be trusted
/// (ambiguous null space, persistent non-smoothness, ...).
class NumericalDiagnostic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a norming functional is requested at a point where the norm
/// is not differentiable. Callers are expected to perturb and retry.
class NonSmoothPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace nidx
