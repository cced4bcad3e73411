#include "nidx/quotient_index.hpp"

#include "nidx/constructions.hpp"
#include "nidx/optimize.hpp"
#include "nidx/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nidx {

namespace {

void check_basis(const Space& X, const LieBasis& basis) {
  require(basis.space.dim() == X.dim() && basis.space.to_string() == X.to_string(),
          "quotient: Lie basis was computed for a different space");
}

/// Row-wise norms of the columns of Y in X, maximum only.
double max_col_norm(const Space& X, const Mat& Y, Eigen::Index* arg = nullptr) {
  double best = -1.0;
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    double v = X.norm(Y.col(j));
    if (v > best) {
      best = v;
      if (arg) *arg = j;
    }
  }
  return best;
}

Mat stack_columns(const std::vector<Vec>& v, int n) {
  Mat M(n, static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = v[j];
  return M;
}

Mat combine(const Mat& A, const std::vector<Mat>& S, const Vec& c) {
  Mat M = A;
  for (std::size_t k = 0; k < S.size(); ++k) M -= c[static_cast<Eigen::Index>(k)] * S[k];
  return M;
}

}  // namespace

Estimate quotient_norm(const Operator& T, const LieBasis& basis, std::uint64_t seed, const QuotientOptions& opt) {
  const Space& X = T.space();
  check_basis(X, basis);
  const Mat& A = T.matrix();
  const int n = X.dim();

  if (X.is_hilbert() && opt.closed_forms) {
    Mat sym = 0.5 * (A + A.transpose());
    Estimate e;
    e.value = n > 0 ? Eigen::JacobiSVD<Mat>(sym).singularValues()(0) : 0.0;
    e.direction = Direction::two_sided;
    e.witness_matrix = sym;
    e.bracket_lower = e.bracket_upper = e.value;
    e.seed = seed;
    return e;
  }
  if (basis.empty()) {
    Estimate e = op_norm(T, opt.inner_budget, seed, {}, opt.closed_forms);
    e.witness_matrix = A;
    e.bracket_lower = e.bracket_upper = e.value;
    return e;
  }

  const std::vector<Mat>& S = basis.elements;
  const auto k = static_cast<Eigen::Index>(S.size());
  const Mat pool = stack_columns(sample_sphere_two_sided(X, static_cast<int>(opt.inner_budget), seed), n);
  auto project = [&](const Vec& x) -> Vec { return x / X.norm(x); };

  // sampled op norm of A - sum c S with ascent from the best pool points
  auto full = [&](const Vec& c, Vec& argmax, std::vector<Eigen::Index>& top) {
    Mat M = combine(A, S, c);
    Mat Y = M * pool;
    std::vector<double> vals(static_cast<std::size_t>(Y.cols()));
    for (Eigen::Index j = 0; j < Y.cols(); ++j) vals[static_cast<std::size_t>(j)] = X.norm(Y.col(j));
    std::vector<Eigen::Index> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::size_t keep = std::min<std::size_t>(8, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                      [&](auto a, auto b) { return vals[static_cast<std::size_t>(a)] > vals[static_cast<std::size_t>(b)]; });
    idx.resize(keep);
    top = idx;
    auto obj = [&](const Vec& x) { return X.norm(M * x); };
    double best = -1.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(4, idx.size()); ++i) {
      AscentResult r = sphere_ascent(obj, project, pool.col(idx[i]));
      if (r.f > best) {
        best = r.f;
        argmax = r.x;
      }
    }
    AscentResult p = sphere_polish(obj, project, argmax, best);
    argmax = p.x;
    return p.f;
  };

  std::vector<Vec> active;
  Vec xbest;
  std::vector<Eigen::Index> top;
  const Vec zero = Vec::Zero(k);
  const double scale = std::max(full(zero, xbest, top), 1e-12);
  active.push_back(xbest);
  {
    Mat Y = A * pool;
    std::vector<double> vals(static_cast<std::size_t>(Y.cols()));
    for (Eigen::Index j = 0; j < Y.cols(); ++j) vals[static_cast<std::size_t>(j)] = X.norm(Y.col(j));
    std::vector<Eigen::Index> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::size_t keep = std::min<std::size_t>(32, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                      [&](auto a, auto b) { return vals[static_cast<std::size_t>(a)] > vals[static_cast<std::size_t>(b)]; });
    for (std::size_t i = 0; i < keep; ++i) active.push_back(pool.col(idx[i]));
  }

  Rng rng(derive_seed(seed, 21));
  Vec cstar = zero;
  double best_full = kInf, lower = 0.0;
  Vec best_c = zero;
  for (int round = 0; round < opt.max_rounds; ++round) {
    const Mat act = stack_columns(active, n);
    const Mat AY = A * act;
    std::vector<Mat> SY;
    for (const auto& s : S) SY.push_back(s * act);
    auto F = [&](const Vec& c) {
      Mat Y = AY;
      for (Eigen::Index i = 0; i < k; ++i) Y -= c[i] * SY[static_cast<std::size_t>(i)];
      return max_col_norm(X, Y);
    };
    NelderMeadOptions nm;
    nm.max_iterations = opt.iterations;
    const int starts = round == 0 ? std::max(1, opt.restarts) : 2;
    MinResult best{cstar, F(cstar), 0};
    for (int r = 0; r < starts; ++r) {
      Vec c0 = cstar;
      if (round == 0 && r > 0) c0 = gaussian_vector(rng, static_cast<int>(k)) * scale;
      if (round > 0 && r > 0) c0 = cstar + 0.1 * scale * gaussian_vector(rng, static_cast<int>(k));
      nm.initial_step = (round == 0 ? 0.5 : 0.05) * scale;
      MinResult m = nelder_mead(F, c0, nm);
      if (m.f < best.f) best = m;
    }
    cstar = best.x;
    lower = best.f;
    double fv = full(cstar, xbest, top);
    if (fv < best_full) {
      best_full = fv;
      best_c = cstar;
    }
    if (fv <= lower + 1e-9 * std::max(1.0, fv)) break;
    active.push_back(xbest);
    for (Eigen::Index j : top) active.push_back(pool.col(j));
  }

  Estimate e;
  e.value = best_full;
  e.direction = Direction::two_sided;
  e.bracket_lower = std::min(lower, best_full);
  e.bracket_upper = best_full;
  e.witness_matrix = combine(A, S, best_c);
  e.budget = opt.inner_budget;
  e.seed = seed;
  return e;
}

RatioEvaluation evaluate_ratio(const Operator& T, const LieBasis* basis, long budget, std::uint64_t seed,
                               const QuotientOptions& qopt, bool closed_forms) {
  RatioEvaluation r;
  const Space& X = T.space();
  std::optional<double> vc = closed_forms ? numerical_radius_closed(T) : std::nullopt;
  if (vc)
    r.radius = *vc;
  else
    r.radius = numerical_radius(T, budget, derive_seed(seed, 1), default_delta(X)).value;
  if (basis) {
    QuotientOptions q = qopt;
    q.inner_budget = budget;
    q.closed_forms = q.closed_forms && closed_forms;
    r.denominator = quotient_norm(T, *basis, derive_seed(seed, 2), q).value;
  } else if (auto c = closed_forms ? op_norm_closed(T) : std::nullopt) {
    r.denominator = *c;
  } else {
    r.denominator = op_norm(T, budget, derive_seed(seed, 2), {}, closed_forms).value;
  }
  const double scale = T.matrix().norm();
  if (r.denominator > 1e-6 * std::max(scale, 1e-300)) r.ratio = r.radius / r.denominator;
  return r;
}

namespace {

struct Candidate {
  std::string label;
  Mat m;
  bool always_full = false;
};

Mat project_off(const Mat& A, const LieBasis* basis) {
  if (!basis) return A;
  Mat P = A;
  for (const auto& s : basis->elements) P -= (P.cwiseProduct(s).sum()) * s;
  return P;
}

/// Pooled lower-estimate ratio used to steer the search cheaply.
class Proxy {
 public:
  Proxy(const Space& X, const LieBasis* basis, long budget, std::uint64_t seed, bool closed_forms)
      : X_(X), basis_(basis), n_(X.dim()) {
    if (auto p = X.lp_exponent(); closed_forms && p && (*p == 1.0 || *p == 2.0 || std::isinf(*p))) closed_ = true;
    if (closed_) return;
    const int npairs = static_cast<int>(std::clamp<long>(budget / 4, 200, 3000));
    Rng rng(derive_seed(seed, 3));
    std::vector<Vec> xs, fs;
    for (const Vec& x : sample_sphere(X, npairs, derive_seed(seed, 4))) {
      try {
        DualityPair pr = norming_functional_retry(X, x, rng);
        xs.push_back(pr.x);
        fs.push_back(pr.xstar);
      } catch (const NonSmoothPoint&) {
      }
    }
    px_ = stack_columns(xs, n_);
    pxs_ = stack_columns(fs, n_);
    const bool inner = basis_ && !basis_->empty();
    const int npts = static_cast<int>(std::clamp<long>(budget / 8, 128, inner ? 160 : 1500));
    q_ = stack_columns(sample_sphere_two_sided(X, npts, derive_seed(seed, 5)), n_);
    if (inner)
      for (const auto& s : basis_->elements) sq_.push_back(s * q_);
  }

  /// Ratio for A; `c` carries the warm start of the quotient coefficients.
  double operator()(const Mat& A0, Vec& c) const {
    // v and the quotient only see the class of A modulo Z(X)
    const Mat A = project_off(A0, basis_);
    const double fro = A.norm();
    if (!(fro > 1e-12) || fro < 1e-6 * A0.norm()) return kInf;
    double v, d;
    if (closed_) {
      Operator op(A, X_);
      v = *numerical_radius_closed(op);
      if (basis_ && X_.is_hilbert()) {
        d = Eigen::JacobiSVD<Mat>(0.5 * (A + A.transpose())).singularValues()(0);
      } else {
        d = *op_norm_closed(op);
      }
    } else {
      v = (pxs_.cwiseProduct(A * px_)).colwise().sum().cwiseAbs().maxCoeff();
      const Mat AQ = A * q_;
      if (sq_.empty()) {
        d = max_col_norm(X_, AQ);
      } else {
        const auto k = static_cast<Eigen::Index>(sq_.size());
        if (c.size() != k) c = Vec::Zero(k);
        auto F = [&](const Vec& cc) {
          Mat Y = AQ;
          for (Eigen::Index i = 0; i < k; ++i) Y -= cc[i] * sq_[static_cast<std::size_t>(i)];
          return max_col_norm(X_, Y);
        };
        NelderMeadOptions nm;
        nm.max_iterations = 40;
        nm.initial_step = 0.1 * fro;
        nm.polish_restarts = 0;
        MinResult m = nelder_mead(F, c, nm);
        c = m.x;
        d = m.f;
      }
    }
    if (!(d > 1e-6 * fro)) return kInf;
    return v / d;
  }

 private:
  Space X_;
  const LieBasis* basis_;
  int n_;
  bool closed_ = false;
  Mat px_, pxs_, q_;
  std::vector<Mat> sq_;
};

Mat unflatten(const Vec& v, int n) {
  Mat m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = v[a * n + b];
  return m;
}

Vec flatten(const Mat& m) {
  const auto n = m.rows();
  Vec v(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) v[a * n + b] = m(a, b);
  return v;
}

std::vector<Candidate> structured_candidates(const Space& X, bool second, const LieBasis* lie) {
  std::vector<Candidate> out;
  const int n = X.dim();
  out.push_back({"identity", Mat::Identity(n, n)});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Mat m = Mat::Zero(n, n);
      m(i, j) = 1.0;
      out.push_back({"shift(" + std::to_string(i) + "," + std::to_string(j) + ")", m});
      if (i < j) {
        m(j, i) = -1.0;
        out.push_back({"rotation(" + std::to_string(i) + "," + std::to_string(j) + ")", m});
      }
    }
  if (X.is_sum()) {
    auto po = X.outer().lp_exponent();
    const auto& bs = X.blocks();
    for (std::size_t h = 0; h < bs.size(); ++h) {
      if (!(bs[h].is_hilbert() && bs[h].dim() >= 2)) continue;
      for (std::size_t w = 0; w < bs.size(); ++w) {
        if (w == h) continue;
        const std::string tag = "(" + std::to_string(h) + "," + std::to_string(w) + ")";
        if (po && std::isinf(*po)) out.push_back({"T1" + tag, t1_block_matrix(X, h, w), true});
        if (po && *po == 1.0) out.push_back({"T2" + tag, t2_block_matrix(X, h, w), true});
      }
    }
  }
  if (!second && lie)
    for (std::size_t i = 0; i < lie->size(); ++i)
      out.push_back({"lie[" + std::to_string(i) + "]", lie->elements[i], true});
  return out;
}

IndexEstimate run_search(const Space& X, bool second, const IndexOptions& opt, const LieBasis* lie) {
  const int n = X.dim();
  IndexEstimate est;
  est.restarts = opt.restarts;
  est.inner_budget = opt.budget;
  est.seed = opt.seed;
  est.lie_dimension = lie ? lie->size() : 0;

  const LieBasis* qbasis = second ? lie : nullptr;
  Proxy proxy(X, qbasis, opt.budget, opt.seed, opt.closed_forms);

  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < opt.seeds.size(); ++i) {
    require(opt.seeds[i].rows() == n && opt.seeds[i].cols() == n, "index: seed matrix has the wrong size");
    cands.push_back({"seed[" + std::to_string(i) + "]", opt.seeds[i], true});
  }
  if (opt.structured)
    for (auto& c : structured_candidates(X, second, lie)) cands.push_back(std::move(c));

  std::vector<double> proxies(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    Vec c;
    proxies[i] = proxy(cands[i].m, c);
  }
  std::size_t best_struct = cands.size();
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (std::isfinite(proxies[i]) && (best_struct == cands.size() || proxies[i] < proxies[best_struct]))
      best_struct = i;

  // simplex search over matrix entries, one restart per worker
  const auto restarts = static_cast<std::size_t>(std::max(0, opt.restarts));
  std::function<Candidate(std::size_t)> search = [&](std::size_t r) {
    Rng rng(derive_seed(opt.seed, 1000 + r));
    Mat A0;
    if (r == 0 && best_struct < cands.size())
      A0 = cands[best_struct].m;
    else
      A0 = project_off(gaussian_matrix(rng, n, n), qbasis);
    A0 /= std::max(A0.norm(), 1e-300);
    Vec warm;
    auto f = [&](const Vec& v) { return proxy(unflatten(v, n), warm); };
    NelderMeadOptions nm;
    nm.max_iterations = opt.search_iterations;
    nm.initial_step = 0.25;
    nm.polish_restarts = 1;
    MinResult m = nelder_mead(f, flatten(A0), nm);
    Mat A = project_off(unflatten(m.x, n), qbasis);
    A /= std::max(A.norm(), 1e-300);
    return Candidate{"search[" + std::to_string(r) + "]", A, true};
  };
  std::vector<Candidate> found = parallel_map<Candidate>(restarts, search);
  for (auto& c : found) {
    Vec w;
    proxies.push_back(proxy(c.m, w));
    cands.push_back(std::move(c));
  }

  // promote: forced candidates plus the best few by proxy
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return proxies[a] < proxies[b]; });
  std::vector<bool> promote(cands.size(), false);
  int extra = 0;
  for (std::size_t i : order) {
    if (cands[i].always_full) promote[i] = true;
    else if (extra < opt.full_candidates && std::isfinite(proxies[i])) {
      promote[i] = true;
      ++extra;
    }
  }

  const std::uint64_t eval_seed = derive_seed(opt.seed, 500);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (promote[i]) idx.push_back(i);
  std::function<RatioEvaluation(std::size_t)> eval = [&](std::size_t t) {
    return evaluate_ratio(Operator(cands[idx[t]].m, X), qbasis, opt.budget, eval_seed, opt.quotient,
                          opt.closed_forms);
  };
  std::vector<RatioEvaluation> evals = parallel_map<RatioEvaluation>(idx.size(), eval);

  for (std::size_t i = 0; i < cands.size(); ++i)
    est.candidates.push_back({cands[i].label, proxies[i], 0.0, 0.0, 0.0, false});
  est.value = kInf;
  for (std::size_t t = 0; t < idx.size(); ++t) {
    CandidateRecord& rec = est.candidates[idx[t]];
    rec.evaluated = true;
    rec.radius = evals[t].radius;
    rec.denominator = evals[t].denominator;
    rec.ratio = evals[t].ratio;
    if (evals[t].ratio < est.value) {
      est.value = evals[t].ratio;
      est.witness = cands[idx[t]].m;
      est.witness_label = cands[idx[t]].label;
      est.witness_radius = evals[t].radius;
      est.witness_denominator = evals[t].denominator;
    }
  }
  if (!std::isfinite(est.value))
    throw NumericalDiagnostic("index: every candidate was numerically inside Z(X)");
  return est;
}

}  // namespace

IndexEstimate estimate_index(const Space& space, const IndexOptions& opt) {
  require(opt.restarts >= 1, "estimate_index: restarts must be >= 1");
  const int n = space.dim();
  if (space.is_hilbert() && n >= 2 && opt.closed_forms) {
    IndexEstimate e;
    e.value = 0.0;
    e.exact = true;
    e.witness = Mat::Zero(n, n);
    e.witness(0, 1) = 1.0;
    e.witness(1, 0) = -1.0;
    e.witness_label = "rotation(0,1)";
    e.witness_denominator = 1.0;
    e.restarts = opt.restarts;
    e.inner_budget = opt.budget;
    e.seed = opt.seed;
    e.lie_dimension = static_cast<std::size_t>(n * (n - 1) / 2);
    return e;
  }
  std::optional<LieBasis> lie;
  if (opt.structured) lie = lie_basis(space, derive_seed(opt.seed, 100));
  return run_search(space, false, opt, lie ? &*lie : nullptr);
}

IndexEstimate estimate_second_index(const Space& space, const IndexOptions& opt, const LieBasis* basis) {
  require(opt.restarts >= 1, "estimate_second_index: restarts must be >= 1");
  const int n = space.dim();
  if (space.is_hilbert() && opt.closed_forms) {
    IndexEstimate e;
    e.value = 1.0;
    e.exact = true;
    e.witness = Mat::Zero(n, n);
    e.witness(0, 0) = 1.0;
    e.witness_label = "symmetric";
    e.witness_radius = 1.0;
    e.witness_denominator = 1.0;
    e.restarts = opt.restarts;
    e.inner_budget = opt.budget;
    e.seed = opt.seed;
    e.lie_dimension = static_cast<std::size_t>(n * (n - 1) / 2);
    return e;
  }
  std::optional<LieBasis> own;
  if (!basis) {
    own = lie_basis(space, derive_seed(opt.seed, 100));
    basis = &*own;
  } else {
    check_basis(space, *basis);
  }
  return run_search(space, true, opt, basis);
}

}  // namespace nidx
