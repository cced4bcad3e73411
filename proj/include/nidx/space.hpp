#pragma once

#include "nidx/gauge2d.hpp"
#include "nidx/rng.hpp"
#include "nidx/types.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nidx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A finite-dimensional real normed space in coordinates. Immutable; copies
/// share structure and are safe to use from several threads.
class Space {
 public:
  enum class Kind { lp, gauge2d, absolute_sum, esum, dual };

  static Space lp(int dim, double p);
  static Space gauge2d(Gauge2d gauge);
  /// Y (+)_a W, normed by |(||y||, ||w||)|_a with `outer` a 2-D absolute norm.
  static Space absolute_sum(Space outer, Space left, Space right);
  /// [(+) X_l]_E with E an absolute norm on R^{#summands}.
  static Space esum(Space E, std::vector<Space> summands);
  static Space dual_of(Space of);

  Kind kind() const;
  int dim() const;
  /// Exponent of an lp space.
  double p() const;
  const Gauge2d& gauge() const;
  /// Outer norm of a sum (E for an esum).
  const Space& outer() const;
  /// Summands of a sum: {left, right} for absolute_sum.
  const std::vector<Space>& blocks() const;
  /// Coordinate offset of block i.
  int block_offset(std::size_t i) const;
  const Space& of() const;
  /// The concrete space a dual node evaluates through.
  const Space& resolved() const;

  bool is_sum() const { return kind() == Kind::absolute_sum || kind() == Kind::esum; }
  bool is_absolute() const;
  bool is_hilbert() const;
  /// lp exponent if the space is isometrically a plain lp in its coordinates.
  std::optional<double> lp_exponent() const;

  double norm(Eigen::Ref<const Vec> x) const;
  /// A norming direction g with g.x = norm(x) and dual_norm(g) = 1.
  /// `smooth` reports whether the norm is differentiable at x.
  Vec subgradient(Eigen::Ref<const Vec> x, bool* smooth = nullptr) const;

  std::string to_string() const;

 private:
  struct Node;
  explicit Space(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct DualityPair {
  Vec x;
  Vec xstar;
  double gap = 0.0;
};

double norm(const Space& space, Eigen::Ref<const Vec> x);
double dual_norm(const Space& space, const Vec& f);
/// Norming functional from the analytic (sub)gradient. Throws NonSmoothPoint
/// if x is a kink of the norm and ValidationError if x is off the sphere.
DualityPair norming_functional(const Space& space, const Vec& x);
/// Perturbs x by 1e-7 Gaussian noise up to `retries` times until a smooth
/// point is found. The returned pair is at the perturbed point.
DualityPair norming_functional_retry(const Space& space, const Vec& x, Rng& rng,
                                     int retries = 8);
/// Central-difference gradient of the norm. Throws NonSmoothPoint when the
/// estimates for step h and h/10 disagree.
Vec fd_gradient(const Space& space, const Vec& x, double h = 1e-6);
std::vector<Vec> sample_sphere(const Space& space, int count, std::uint64_t seed);
/// Half Gaussian directions, half norming points of Gaussian dual functionals.
/// For polyhedral norms the second half lands on vertices of the unit ball.
std::vector<Vec> sample_sphere_two_sided(const Space& space, int count, std::uint64_t seed);
Space build_dual(const Space& space);

}  // namespace nidx
