#include "nidx/space.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace nidx {

struct Space::Node {
  Kind kind = Kind::lp;
  int dim = 0;
  double p = 2.0;
  std::optional<Gauge2d> gauge;
  std::vector<Space> outer;  // 0 or 1 element; vector breaks the type cycle
  std::vector<Space> blocks;
  std::vector<int> offsets;
  std::vector<Space> of;        // dual: the original space
  std::vector<Space> resolved;  // dual: concrete evaluation route
};

Space Space::lp(int dim, double p) {
  require(dim >= 1, "lp: dim must be >= 1");
  require(p >= 1.0 && !std::isnan(p), "lp: p must lie in [1, inf]");
  auto n = std::make_shared<Node>();
  n->kind = Kind::lp;
  n->dim = dim;
  n->p = p;
  return Space(std::move(n));
}

Space Space::gauge2d(Gauge2d gauge) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::gauge2d;
  n->dim = 2;
  n->gauge = std::move(gauge);
  return Space(std::move(n));
}

Space Space::absolute_sum(Space outer, Space left, Space right) {
  require(outer.dim() == 2, "absolute_sum: outer norm must have dim 2");
  require(outer.is_absolute(), "absolute_sum: outer norm is not absolute");
  auto n = std::make_shared<Node>();
  n->kind = Kind::absolute_sum;
  n->dim = left.dim() + right.dim();
  n->outer = {std::move(outer)};
  n->offsets = {0, left.dim()};
  n->blocks = {std::move(left), std::move(right)};
  return Space(std::move(n));
}

Space Space::esum(Space E, std::vector<Space> summands) {
  require(!summands.empty(), "esum: need at least one summand");
  require(summands.size() <= 64, "esum: at most 64 summands");
  require(static_cast<int>(summands.size()) == E.dim(),
          "esum: number of summands must equal E.dim");
  require(E.is_absolute(), "esum: E is not an absolute norm");
  auto n = std::make_shared<Node>();
  n->kind = Kind::esum;
  int off = 0;
  for (const auto& s : summands) {
    n->offsets.push_back(off);
    off += s.dim();
  }
  n->dim = off;
  n->outer = {std::move(E)};
  n->blocks = std::move(summands);
  return Space(std::move(n));
}

Space Space::dual_of(Space of) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::dual;
  n->dim = of.dim();
  n->resolved = {build_dual(of)};
  n->of = {std::move(of)};
  return Space(std::move(n));
}

Space::Kind Space::kind() const { return node_->kind; }
int Space::dim() const { return node_->dim; }

double Space::p() const {
  require(kind() == Kind::lp, "p(): not an lp space");
  return node_->p;
}

const Gauge2d& Space::gauge() const {
  require(kind() == Kind::gauge2d, "gauge(): not a gauge2d space");
  return *node_->gauge;
}

const Space& Space::outer() const {
  require(is_sum(), "outer(): not a sum");
  return node_->outer.front();
}

const std::vector<Space>& Space::blocks() const { return node_->blocks; }

int Space::block_offset(std::size_t i) const { return node_->offsets.at(i); }

const Space& Space::of() const {
  require(kind() == Kind::dual, "of(): not a dual space");
  return node_->of.front();
}

const Space& Space::resolved() const {
  require(kind() == Kind::dual, "resolved(): not a dual space");
  return node_->resolved.front();
}

bool Space::is_absolute() const {
  switch (kind()) {
    case Kind::lp:
    case Kind::gauge2d:
      return true;
    case Kind::absolute_sum:
    case Kind::esum:
      return outer().is_absolute() &&
             std::all_of(blocks().begin(), blocks().end(),
                         [](const Space& s) { return s.is_absolute(); });
    case Kind::dual:
      return of().is_absolute();
  }
  return false;
}

bool Space::is_hilbert() const {
  switch (kind()) {
    case Kind::lp:
      return p() == 2.0 || dim() == 1;
    case Kind::gauge2d:
      return false;
    case Kind::absolute_sum:
    case Kind::esum:
      return outer().is_hilbert() &&
             std::all_of(blocks().begin(), blocks().end(),
                         [](const Space& s) { return s.is_hilbert(); });
    case Kind::dual:
      return of().is_hilbert();
  }
  return false;
}

std::optional<double> Space::lp_exponent() const {
  switch (kind()) {
    case Kind::lp:
      return dim() == 1 ? 2.0 : p();
    case Kind::dual:
      return resolved().lp_exponent();
    case Kind::absolute_sum:
    case Kind::esum: {
      auto po = outer().lp_exponent();
      if (!po) return std::nullopt;
      for (const auto& b : blocks()) {
        auto pb = b.lp_exponent();
        if (!pb) return std::nullopt;
        if (b.dim() > 1 && *pb != *po) return std::nullopt;
      }
      if (outer().dim() == 1) {
        // a single summand: the space is that summand
        return blocks().front().lp_exponent();
      }
      return po;
    }
    case Kind::gauge2d:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

double lp_norm(Eigen::Ref<const Vec> x, double p) {
  if (p == 1.0) return x.lpNorm<1>();
  if (std::isinf(p)) return x.lpNorm<Eigen::Infinity>();
  if (p == 2.0) return x.norm();
  double m = x.lpNorm<Eigen::Infinity>();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

Vec lp_subgradient(Eigen::Ref<const Vec> x, double p, bool& smooth) {
  const Eigen::Index n = x.size();
  Vec g = Vec::Zero(n);
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      g[i] = sgn(x[i]);
      if (x[i] == 0.0) smooth = false;
    }
    return g;
  }
  if (std::isinf(p)) {
    Eigen::Index arg = 0;
    double m = x.cwiseAbs().maxCoeff(&arg);
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != arg && std::abs(x[i]) >= m * (1.0 - 1e-14)) smooth = false;
    g[arg] = sgn(x[arg]);
    return g;
  }
  double nrm = lp_norm(x, p);
  if (nrm == 0.0) {
    smooth = false;
    return g;
  }
  if (p == 2.0) return x / nrm;
  for (Eigen::Index i = 0; i < n; ++i)
    g[i] = sgn(x[i]) * std::pow(std::abs(x[i]) / nrm, p - 1.0);
  if (p < 2.0)
    for (Eigen::Index i = 0; i < n; ++i)
      if (x[i] == 0.0) smooth = false;  // derivative of |t|^(p-1) blows up
  return g;
}

// stack storage for the tuple of summand norms
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 64, 1>;

std::string fmt_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

double Space::norm(Eigen::Ref<const Vec> x) const {
  require(x.size() == dim(), "norm: dimension mismatch");
  switch (kind()) {
    case Kind::lp:
      return lp_norm(x, p());
    case Kind::gauge2d:
      return gauge().norm(x[0], x[1]);
    case Kind::absolute_sum:
    case Kind::esum: {
      const auto& bs = blocks();
      SmallVec t(static_cast<Eigen::Index>(bs.size()));
      for (std::size_t i = 0; i < bs.size(); ++i)
        t[static_cast<Eigen::Index>(i)] = bs[i].norm(x.segment(block_offset(i), bs[i].dim()));
      return outer().norm(t);
    }
    case Kind::dual:
      return resolved().norm(x);
  }
  return 0.0;
}

Vec Space::subgradient(Eigen::Ref<const Vec> x, bool* smooth) const {
  require(x.size() == dim(), "subgradient: dimension mismatch");
  bool ok = true;
  Vec g;
  switch (kind()) {
    case Kind::lp:
      g = lp_subgradient(x, p(), ok);
      break;
    case Kind::gauge2d: {
      Eigen::Vector2d gg = gauge().subgradient(x[0], x[1], &ok);
      g = Vec(2);
      g << gg.x(), gg.y();
      break;
    }
    case Kind::absolute_sum:
    case Kind::esum: {
      const auto& bs = blocks();
      Vec t(bs.size());
      for (std::size_t i = 0; i < bs.size(); ++i)
        t[static_cast<Eigen::Index>(i)] = bs[i].norm(x.segment(block_offset(i), bs[i].dim()));
      bool outer_ok = true;
      Vec go = outer().subgradient(t, &outer_ok);
      ok = outer_ok;
      g = Vec::Zero(dim());
      for (std::size_t i = 0; i < bs.size(); ++i) {
        double w = go[static_cast<Eigen::Index>(i)];
        if (w == 0.0) continue;
        if (t[static_cast<Eigen::Index>(i)] == 0.0) {
          // zero block with positive weight: any functional of dual norm <= 1
          // on that block norms x; we pick 0 and flag the kink
          ok = false;
          continue;
        }
        bool block_ok = true;
        Vec gb = bs[i].subgradient(x.segment(block_offset(i), bs[i].dim()), &block_ok);
        ok = ok && block_ok;
        g.segment(block_offset(i), bs[i].dim()) = w * gb;
      }
      break;
    }
    case Kind::dual:
      g = resolved().subgradient(x, &ok);
      break;
  }
  if (smooth) *smooth = ok;
  return g;
}

std::string Space::to_string() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::lp:
      os << "l" << fmt_p(p()) << "^" << dim();
      break;
    case Kind::gauge2d:
      os << "gauge2d[" << gauge().vertices().size() << "]";
      break;
    case Kind::absolute_sum:
      os << "(" << blocks()[0].to_string() << " (+)_" << outer().to_string() << " "
         << blocks()[1].to_string() << ")";
      break;
    case Kind::esum: {
      os << "[";
      for (std::size_t i = 0; i < blocks().size(); ++i)
        os << (i ? ", " : "") << blocks()[i].to_string();
      os << "]_" << outer().to_string();
      break;
    }
    case Kind::dual:
      os << "(" << of().to_string() << ")*";
      break;
  }
  return os.str();
}

double norm(const Space& space, Eigen::Ref<const Vec> x) { return space.norm(x); }

double dual_norm(const Space& space, const Vec& f) {
  require(f.size() == space.dim(), "dual_norm: dimension mismatch");
  if (space.kind() == Space::Kind::dual) return space.of().norm(f);
  return build_dual(space).norm(f);
}

DualityPair norming_functional(const Space& space, const Vec& x) {
  require(x.size() == space.dim(), "norming_functional: dimension mismatch");
  double nx = space.norm(x);
  require(std::abs(nx - 1.0) <= 1e-9, "norming_functional: x is not on the unit sphere");
  bool smooth = true;
  Vec g = space.subgradient(x, &smooth);
  if (!smooth) throw NonSmoothPoint("norming_functional: norm is not differentiable at x");
  DualityPair pr{x, g, 0.0};
  pr.gap = std::max(0.0, 1.0 - g.dot(x));
  return pr;
}

DualityPair norming_functional_retry(const Space& space, const Vec& x, Rng& rng, int retries) {
  Vec y = x;
  for (int attempt = 0;; ++attempt) {
    try {
      return norming_functional(space, y);
    } catch (const NonSmoothPoint&) {
      if (attempt >= retries) throw;
      y = x + 1e-7 * gaussian_vector(rng, space.dim());
      y /= space.norm(y);
    }
  }
}

Vec fd_gradient(const Space& space, const Vec& x, double h) {
  auto central = [&](double step) {
    Vec g(x.size());
    Vec xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      xp[i] += step;
      xm[i] -= step;
      g[i] = (space.norm(xp) - space.norm(xm)) / (2 * step);
      xp[i] = x[i];
      xm[i] = x[i];
    }
    return g;
  };
  // One-sided slopes differ by the jump at a kink; central differences alone
  // miss kinks that are symmetric in the step.
  auto jump = [&](double step) {
    Vec j(x.size());
    Vec xp = x, xm = x;
    const double f0 = space.norm(x);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      xp[i] += step;
      xm[i] -= step;
      j[i] = (space.norm(xp) - f0) / step - (f0 - space.norm(xm)) / step;
      xp[i] = x[i];
      xm[i] = x[i];
    }
    return j;
  };
  Vec g1 = central(h);
  Vec g2 = central(h / 10);
  const double scale = std::max(1.0, g1.lpNorm<Eigen::Infinity>());
  if ((g1 - g2).lpNorm<Eigen::Infinity>() > 1e-4 * scale || jump(h).lpNorm<Eigen::Infinity>() > 1e-3 * scale)
    throw NonSmoothPoint("fd_gradient: estimates disagree across step sizes");
  return g2;
}

std::vector<Vec> sample_sphere(const Space& space, int count, std::uint64_t seed) {
  require(count >= 1, "sample_sphere: count must be >= 1");
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Vec g = gaussian_vector(rng, space.dim());
    double n = space.norm(g);
    if (n == 0.0) continue;
    out.push_back(g / n);
  }
  return out;
}

std::vector<Vec> sample_sphere_two_sided(const Space& space, int count, std::uint64_t seed) {
  require(count >= 1, "sample_sphere_two_sided: count must be >= 1");
  std::vector<Vec> out = sample_sphere(space, count - count / 2, seed);
  if (count / 2 == 0) return out;
  Space D = build_dual(space);
  for (const Vec& f : sample_sphere(D, count / 2, derive_seed(seed, 0x5eed))) {
    Vec x = D.subgradient(f);
    const double n = space.norm(x);
    if (n > 0.0 && std::isfinite(n)) out.push_back(x / n);
  }
  return out;
}

Space build_dual(const Space& space) {
  switch (space.kind()) {
    case Space::Kind::lp: {
      double p = space.p();
      double q = p == 1.0 ? kInf : (std::isinf(p) ? 1.0 : p / (p - 1.0));
      return Space::lp(space.dim(), q);
    }
    case Space::Kind::gauge2d:
      return Space::gauge2d(space.gauge().dual());
    case Space::Kind::absolute_sum:
      return Space::absolute_sum(build_dual(space.outer()), build_dual(space.blocks()[0]),
                                 build_dual(space.blocks()[1]));
    case Space::Kind::esum: {
      std::vector<Space> ds;
      for (const auto& b : space.blocks()) ds.push_back(build_dual(b));
      return Space::esum(build_dual(space.outer()), std::move(ds));
    }
    case Space::Kind::dual:
      return space.of();
  }
  return space;
}

}  // namespace nidx
