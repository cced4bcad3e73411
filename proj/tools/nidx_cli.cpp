#include "nidx/constructions.hpp"
#include "nidx/io.hpp"
#include "nidx/lie_algebra.hpp"
#include "nidx/paper_suite.hpp"
#include "nidx/quotient_index.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace nidx;

namespace {

struct Config {
  std::string space_path;
  std::string matrix_path;
  std::uint64_t seed = 0;
  std::optional<long> budget;
  std::optional<int> restarts;
  std::optional<double> tol;
  std::optional<double> delta;
  std::string format = "json";
  std::string out;
  // construct
  std::string what;
  std::string outer = "inf";
  std::string left_path, right_path;
  int m = 2;
  std::string direction = "12";
  // paper-suite
  double scale = 1.0;
  std::string filter;
};

Json estimate_json(const Estimate& e) {
  Json j{{"value", e.value}, {"direction", to_string(e.direction)}, {"budget", e.budget}, {"seed", e.seed}};
  if (e.witness_x) j["witness_x"] = vec_to_json(*e.witness_x);
  if (e.witness_xstar) j["witness_xstar"] = vec_to_json(*e.witness_xstar);
  if (e.witness_matrix) j["witness_matrix"] = matrix_to_json(*e.witness_matrix);
  if (e.bracket_lower) j["bracket_lower"] = *e.bracket_lower;
  if (e.bracket_upper) j["bracket_upper"] = *e.bracket_upper;
  return j;
}

Json basis_json(const LieBasis& b, const Space& X) {
  Json els = Json::array();
  for (const Mat& S : b.elements) els.push_back(matrix_to_json(S));
  return {{"dimension", b.size()},
          {"elements", els},
          {"residuals", b.residuals},
          {"constraint_count", b.constraint_count},
          {"svd_gap", b.svd_gap},
          {"singular_values", b.singular_values},
          {"rejected", b.rejected},
          {"components", detect_components(X, b)}};
}

Json index_json(const IndexEstimate& e) {
  Json cands = Json::array();
  for (const auto& c : e.candidates) {
    Json cj{{"label", c.label}, {"proxy", c.proxy}, {"evaluated", c.evaluated}};
    if (c.evaluated) {
      cj["radius"] = c.radius;
      cj["denominator"] = c.denominator;
      cj["ratio"] = std::isfinite(c.ratio) ? Json(c.ratio) : Json(nullptr);
    }
    if (!std::isfinite(c.proxy)) cj["proxy"] = nullptr;
    cands.push_back(cj);
  }
  return {{"value", e.value},
          {"direction", to_string(e.direction)},
          {"exact", e.exact},
          {"witness", matrix_to_json(e.witness)},
          {"witness_label", e.witness_label},
          {"witness_radius", e.witness_radius},
          {"witness_denominator", e.witness_denominator},
          {"lie_dimension", e.lie_dimension},
          {"restarts", e.restarts},
          {"inner_budget", e.inner_budget},
          {"seed", e.seed},
          {"candidates", cands}};
}

Space require_space(const Config& c) {
  if (c.space_path.empty()) throw ValidationError("--space is required");
  return load_space(c.space_path);
}

Operator load_operator(const Config& c) {
  if (c.matrix_path.empty()) throw ValidationError("--matrix is required");
  Mat m;
  std::optional<Space> embedded;
  std::ifstream in(c.matrix_path);
  if (!in) throw ValidationError("cannot open matrix file '" + c.matrix_path + "'");
  if (std::filesystem::path(c.matrix_path).extension() == ".csv") {
    m = matrix_from_csv(in);
  } else {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ValidationError(std::string("matrix file: ") + e.what());
    }
    OperatorData d = operator_from_json(j);
    m = std::move(d.matrix);
    embedded = std::move(d.space);
  }
  if (!c.space_path.empty()) return Operator(m, load_space(c.space_path));
  if (!embedded) throw ValidationError("no space: pass --space or embed \"space\" in the matrix JSON");
  return Operator(m, *embedded);
}

Space parse_outer(const std::string& s) {
  if (s == "inf") return Space::lp(2, kInf);
  if (s == "1") return Space::lp(2, 1.0);
  return load_space(s);
}

/// Flattens scalar fields to key,value rows; matrices and vectors are emitted
/// as semicolon-joined rows.
void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    std::string v = j.dump();
    if (v.find(',') != std::string::npos) {
      std::string q;
      for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      v = "\"" + q + "\"";
    }
    os << prefix << "," << v << "\n";
  }
}

void emit(const Config& c, const Json& report) {
  std::ostringstream os;
  if (c.format == "csv") {
    os << "key,value\n";
    flatten(report, "", os);
  } else {
    os << report.dump(2) << "\n";
  }
  if (c.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(c.out);
    if (!f) throw ValidationError("cannot write '" + c.out + "'");
    f << os.str();
  }
}

Json base_report(const std::string& command, const Config& c, Json config) {
  config["seed"] = c.seed;
  if (!c.space_path.empty()) config["space_file"] = c.space_path;
  if (!c.matrix_path.empty()) config["matrix_file"] = c.matrix_path;
  return {{"schema", "1"}, {"command", command}, {"config", config}};
}

int run_space(const Config& c) {
  Space X = require_space(c);
  Json r = base_report("space", c, {});
  r["space"] = space_to_json(X);
  r["description"] = X.to_string();
  r["dim"] = X.dim();
  r["absolute"] = X.is_absolute();
  r["hilbert"] = X.is_hilbert();
  r["dual"] = space_to_json(build_dual(X));
  emit(c, r);
  return 0;
}

int run_opnorm(const Config& c) {
  Operator T = load_operator(c);
  const long budget = c.budget.value_or(100000);
  Estimate e = op_norm(T, budget, c.seed);
  Json r = base_report("opnorm", c, {{"budget", budget}});
  r["space"] = space_to_json(T.space());
  r["result"] = estimate_json(e);
  emit(c, r);
  return 0;
}

int run_radius(const Config& c) {
  Operator T = load_operator(c);
  const long budget = c.budget.value_or(100000);
  const double delta = c.delta.value_or(default_delta(T.space()));
  Estimate e = numerical_radius(T, budget, c.seed, delta);
  Json r = base_report("radius", c, {{"budget", budget}, {"delta", delta}});
  r["space"] = space_to_json(T.space());
  r["result"] = estimate_json(e);
  if (auto cl = numerical_radius_closed(T)) r["closed_form"] = *cl;
  emit(c, r);
  return 0;
}

LieOptions lie_opts(const Config& c) {
  LieOptions o;
  if (c.budget) o.constraints = static_cast<int>(*c.budget);
  if (c.tol) o.keep_threshold = *c.tol;
  return o;
}

Json lie_config(const LieOptions& o) {
  return {{"constraints", o.constraints}, {"keep_threshold", o.keep_threshold}, {"min_gap", o.min_gap}};
}

int run_lie(const Config& c) {
  Space X = require_space(c);
  LieOptions o = lie_opts(c);
  LieBasis b = lie_basis(X, c.seed, o);
  Json r = base_report("lie", c, lie_config(o));
  r["space"] = space_to_json(X);
  r["basis"] = basis_json(b, X);
  emit(c, r);
  return 0;
}

int run_quotient(const Config& c) {
  Operator T = load_operator(c);
  LieOptions lo;
  if (c.tol) lo.keep_threshold = *c.tol;
  QuotientOptions q;
  if (c.restarts) q.restarts = *c.restarts;
  if (c.budget) q.inner_budget = *c.budget;
  require(q.restarts >= 1, "--restarts must be >= 1");
  LieBasis b = lie_basis(T.space(), c.seed, lo);
  Estimate e = quotient_norm(T, b, c.seed, q);
  Json cfg = lie_config(lo);
  cfg["restarts"] = q.restarts;
  cfg["iterations"] = q.iterations;
  cfg["inner_budget"] = q.inner_budget;
  Json r = base_report("quotient", c, cfg);
  r["space"] = space_to_json(T.space());
  r["lie_dimension"] = b.size();
  r["result"] = estimate_json(e);
  emit(c, r);
  return 0;
}

int run_index(const Config& c, bool second) {
  Space X = require_space(c);
  IndexOptions o;
  o.seed = c.seed;
  if (c.restarts) o.restarts = *c.restarts;
  if (c.budget) o.budget = *c.budget;
  o.quotient.inner_budget = o.budget;
  require(o.restarts >= 1, "--restarts must be >= 1");
  const double tol = c.tol.value_or(3e-2);
  IndexEstimate e = second ? estimate_second_index(X, o) : estimate_index(X, o);

  // re-evaluate the witness with an independent seed
  Json check;
  if (!e.exact) {
    std::optional<LieBasis> b;
    if (second) b = lie_basis(X, derive_seed(c.seed, 7));
    RatioEvaluation re = evaluate_ratio(Operator(e.witness, X), b ? &*b : nullptr, o.budget,
                                        derive_seed(c.seed, 8), o.quotient);
    check = {{"ratio", re.ratio}, {"deviation", std::abs(re.ratio - e.value)}, {"tol", tol},
             {"pass", std::abs(re.ratio - e.value) <= tol}};
  }
  Json r = base_report(second ? "index2" : "index", c,
                       {{"restarts", o.restarts},
                        {"budget", o.budget},
                        {"search_iterations", o.search_iterations},
                        {"full_candidates", o.full_candidates},
                        {"tol", tol}});
  r["space"] = space_to_json(X);
  r["result"] = index_json(e);
  if (!check.is_null()) r["witness_check"] = check;
  emit(c, r);
  return 0;
}

int run_construct(const Config& c) {
  Json r = base_report("construct", c, {{"what", c.what}});
  auto put_op = [&](const Operator& T) {
    r["matrix"] = matrix_to_json(T.matrix());
    r["space"] = space_to_json(T.space());
  };
  const Space line = Space::lp(1, 2.0), plane = Space::lp(2, 2.0);
  if (c.what == "t1") {
    put_op(example_T1(absolute_sum(plane, line, Space::lp(2, kInf))));
  } else if (c.what == "t2") {
    put_op(example_T2(absolute_sum(plane, line, Space::lp(2, 1.0))));
  } else if (c.what == "ck") {
    put_op(ck_operator(c.m));
  } else if (c.what == "ck-space") {
    r = space_to_json(ck_space(c.m));
    r["schema"] = "1";
  } else if (c.what == "shift") {
    require(c.direction == "12" || c.direction == "21", "--direction must be 12 or 21");
    put_op(shift_operator(require_space(c), c.direction == "12" ? ShiftDirection::u12 : ShiftDirection::u21).op());
  } else if (c.what == "sum") {
    if (c.left_path.empty() || c.right_path.empty()) throw ValidationError("sum needs --left and --right");
    r = space_to_json(absolute_sum(load_space(c.left_path), load_space(c.right_path), parse_outer(c.outer)));
    r["schema"] = "1";
  } else if (c.what == "lift") {
    if (c.matrix_path.empty()) throw ValidationError("lift needs --matrix (operator on the left summand)");
    Config inner = c;
    inner.space_path.clear();
    Operator T = load_operator(inner);
    Space W = c.right_path.empty() ? line : load_space(c.right_path);
    put_op(lift_operator(T, absolute_sum(T.space(), W, parse_outer(c.outer))));
  } else if (c.what == "dual") {
    r = space_to_json(build_dual(require_space(c)));
    r["schema"] = "1";
  } else {
    throw ValidationError("construct: unknown object '" + c.what + "' (t1, t2, ck, ck-space, shift, sum, lift, dual)");
  }
  emit(c, r);
  return 0;
}

int run_shift_check(const Config& c) {
  Space E = require_space(c);
  const long budget = c.budget.value_or(50000);
  const double tol = c.tol.value_or(2e-2);
  ShiftBoundReport s = shift_bound_check(E, budget, c.seed, tol);
  Json r = base_report("shift-check", c, {{"budget", budget}, {"tol", tol}});
  r["space"] = space_to_json(E);
  r["result"] = {{"v_u1", s.v_u1},
                 {"v_u2", s.v_u2},
                 {"k", s.k},
                 {"norm_e1_plus_e2", s.norm_e1_plus_e2},
                 {"dual_norm_e1_plus_e2", s.dual_norm_e1_plus_e2},
                 {"lhs", s.lhs},
                 {"rhs", s.rhs},
                 {"margin_shift", s.margin_shift},
                 {"margin_l1_factor", s.margin_l1_factor},
                 {"margin_l1_lower", s.margin_l1_lower},
                 {"pass", s.pass}};
  emit(c, r);
  return s.pass ? 0 : 1;
}

int run_paper_suite(const Config& c) {
  SuiteConfig cfg;
  cfg.seed = c.seed;
  cfg.budget_scale = c.scale;
  cfg.filter = c.filter;
  auto results = run_suite(cfg);
  const std::string json = suite_to_json(cfg, results).dump(2) + "\n";
  const std::string csv = suite_to_csv(results);
  if (!c.out.empty()) {
    std::filesystem::create_directories(c.out);
    std::ofstream(std::filesystem::path(c.out) / "report.json") << json;
    std::ofstream(std::filesystem::path(c.out) / "report.csv") << csv;
  }
  std::cout << (c.format == "csv" ? csv : json);
  return suite_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical radius, skew-hermitian Lie algebras and numerical indices of finite-dimensional spaces"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "random seed")->capture_default_str();
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", c.out, "output file (directory for paper-suite)");
  };
  auto with_space = [&](CLI::App* s) { s->add_option("--space", c.space_path, "space spec JSON file, '-' for stdin"); };
  auto with_matrix = [&](CLI::App* s) {
    s->add_option("--matrix", c.matrix_path, "operator as JSON ({matrix, space}) or CSV");
  };
  auto with_budget = [&](CLI::App* s) { s->add_option("--budget", c.budget, "sampling budget"); };

  auto* sp = app.add_subcommand("space", "validate a space spec and print its resolved form and dual");
  auto* on = app.add_subcommand("opnorm", "operator norm");
  auto* ra = app.add_subcommand("radius", "numerical radius");
  auto* li = app.add_subcommand("lie", "basis of the Lie algebra of skew-hermitian operators");
  auto* qu = app.add_subcommand("quotient", "quotient norm modulo the Lie algebra");
  auto* ix = app.add_subcommand("index", "upper estimate of the numerical index");
  auto* i2 = app.add_subcommand("index2", "upper estimate of the second numerical index");
  auto* co = app.add_subcommand("construct", "emit a built-in operator or space as JSON");
  auto* sc = app.add_subcommand("shift-check", "shift-operator inequality on a 2-D absolute norm");
  auto* ps = app.add_subcommand("paper-suite", "run the registered claim checks");

  for (auto* s : {sp, on, ra, li, qu, ix, i2, co, sc, ps}) common(s);
  for (auto* s : {sp, on, ra, li, qu, ix, i2, co, sc}) with_space(s);
  for (auto* s : {on, ra, qu, co}) with_matrix(s);
  for (auto* s : {on, ra, li, qu, ix, i2, sc}) with_budget(s);
  for (auto* s : {qu, ix, i2}) s->add_option("--restarts", c.restarts, "optimizer restarts");
  for (auto* s : {li, qu, ix, i2, sc}) s->add_option("--tol", c.tol, "tolerance");
  ra->add_option("--delta", c.delta, "duality gap accepted for sampled pairs");

  co->add_option("what", c.what, "t1, t2, ck, ck-space, shift, sum, lift, dual")->required();
  co->add_option("--outer", c.outer, "outer norm: inf, 1 or a 2-D space file");
  co->add_option("--left", c.left_path, "left summand space file");
  co->add_option("--right", c.right_path, "right summand space file");
  co->add_option("--m", c.m, "number of points for ck");
  co->add_option("--direction", c.direction, "shift direction 12 or 21");

  ps->add_option("--scale", c.scale, "budget multiplier")->capture_default_str();
  ps->add_option("--filter", c.filter, "comma-separated claim id prefixes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sp) return run_space(c);
    if (*on) return run_opnorm(c);
    if (*ra) return run_radius(c);
    if (*li) return run_lie(c);
    if (*qu) return run_quotient(c);
    if (*ix) return run_index(c, false);
    if (*i2) return run_index(c, true);
    if (*co) return run_construct(c);
    if (*sc) return run_shift_check(c);
    if (*ps) return run_paper_suite(c);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalDiagnostic& e) {
    std::cerr << "numerical diagnostic: " << e.what() << "\n";
    return 3;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
