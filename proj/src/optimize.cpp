#include "nidx/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nidx {

namespace {

MinResult simplex_run(const Objective& f, const Vec& x0, double step, const NelderMeadOptions& opt) {
  const auto n = x0.size();
  std::vector<Vec> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> val(static_cast<std::size_t>(n + 1));
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)][i] += step;
  for (std::size_t i = 0; i < pts.size(); ++i) val[i] = eval(pts[i]);

  std::vector<std::size_t> order(pts.size());
  for (int it = 0; it < opt.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

    double spread = std::abs(val[worst] - val[best]);
    double diam = 0.0;
    for (const auto& p : pts) diam = std::max(diam, (p - pts[best]).lpNorm<Eigen::Infinity>());
    if (spread <= opt.ftol * (std::abs(val[best]) + 1e-300) || diam <= opt.xtol) break;

    Vec centroid = Vec::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    Vec xr = centroid + (centroid - pts[worst]);
    double fr = eval(xr);
    if (fr < val[best]) {
      Vec xe = centroid + 2.0 * (centroid - pts[worst]);
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    bool outside = fr < val[worst];
    Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (pts[worst] - centroid));
    double fc = eval(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      val[i] = eval(pts[i]);
    }
  }
  std::size_t b = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
  return {pts[b], val[b], evals};
}

}  // namespace

MinResult nelder_mead(const Objective& f, const Vec& x0, const NelderMeadOptions& opt) {
  MinResult best = simplex_run(f, x0, opt.initial_step, opt);
  double step = opt.initial_step;
  for (int r = 0; r < opt.polish_restarts; ++r) {
    step *= 0.5;
    MinResult next = simplex_run(f, best.x, step, opt);
    next.evaluations += best.evaluations;
    bool improved = next.f < best.f - 1e-14 * std::abs(best.f);
    if (next.f <= best.f) best = next;
    else best.evaluations = next.evaluations;
    if (!improved) break;
  }
  return best;
}

AscentResult sphere_ascent(const Objective& f, const std::function<Vec(const Vec&)>& project,
                           const Vec& x0, int steps, double fd_step) {
  Vec x = project(x0);
  double fx = f(x);
  double eta = 0.05;
  const auto n = x.size();
  Vec grad(n);
  for (int s = 0; s < steps; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Vec xp = x, xm = x;
      xp[i] += fd_step;
      xm[i] -= fd_step;
      grad[i] = (f(project(xp)) - f(project(xm))) / (2 * fd_step);
    }
    double gn = grad.norm();
    if (!(gn > 0.0) || !std::isfinite(gn)) break;
    Vec dir = grad / gn;
    bool moved = false;
    while (eta > 1e-12) {
      Vec y = project(x + eta * dir);
      double fy = f(y);
      if (fy > fx) {
        x = y;
        fx = fy;
        eta = std::min(eta * 1.5, 0.5);
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) {
      // central differences straddle kinks; fall back to a compass search
      double h = 0.05;
      while (h > 1e-9 && !moved) {
        for (Eigen::Index i = 0; i < n && !moved; ++i)
          for (double sgn : {1.0, -1.0}) {
            Vec y = x;
            y[i] += sgn * h;
            y = project(y);
            double fy = f(y);
            if (fy > fx) {
              x = y;
              fx = fy;
              moved = true;
              break;
            }
          }
        if (!moved) h *= 0.5;
      }
      if (!moved) break;
      eta = h;
    }
  }
  return {x, fx};
}

AscentResult sphere_polish(const Objective& f, const std::function<Vec(const Vec&)>& project, const Vec& x,
                           double fx, double step) {
  NelderMeadOptions o;
  o.initial_step = step;
  o.max_iterations = 150 * static_cast<int>(x.size());
  o.polish_restarts = 2;
  o.ftol = 1e-14;
  MinResult m = nelder_mead([&](const Vec& z) { return -f(project(x + z)); }, Vec::Zero(x.size()), o);
  if (-m.f > fx) return {project(x + m.x), -m.f};
  return {x, fx};
}

}  // namespace nidx
