#pragma once

#include "nidx/types.hpp"

#include <functional>

namespace nidx {

using Objective = std::function<double(const Vec&)>;

struct NelderMeadOptions {
  int max_iterations = 400;
  double initial_step = 1.0;  // edge length of the starting simplex
  double ftol = 1e-12;        // relative spread of simplex values
  double xtol = 1e-10;        // simplex diameter
  int polish_restarts = 4;    // rebuild the simplex at the best point this many times
};

struct MinResult {
  Vec x;
  double f = 0.0;
  int evaluations = 0;
};

/// Derivative-free simplex descent. After convergence the simplex is rebuilt
/// around the incumbent (half the previous step) until a restart stops improving.
MinResult nelder_mead(const Objective& f, const Vec& x0, const NelderMeadOptions& opt = {});

struct AscentResult {
  Vec x;
  double f = 0.0;
};

/// Maximizes f over a unit sphere by central-difference gradient steps with
/// re-projection; steps grow on success and halve on failure, so the value
/// never decreases.
AscentResult sphere_ascent(const Objective& f, const std::function<Vec(const Vec&)>& project,
                           const Vec& x0, int steps = 200, double fd_step = 1e-5);

/// Simplex search for a better maximizer in the chart z -> project(x + z).
/// Follows ridges between smooth pieces where coordinate moves stall.
AscentResult sphere_polish(const Objective& f, const std::function<Vec(const Vec&)>& project, const Vec& x,
                           double fx, double step = 0.02);

}  // namespace nidx
