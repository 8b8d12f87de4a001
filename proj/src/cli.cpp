#include "robustsum/cli.hpp"

#include "robustsum/oracle.hpp"
#include "robustsum/problem_io.hpp"
#include "robustsum/reports.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace rsum::cli {

namespace {

using report::Json;

struct Flags {
  std::string command;
  std::string problem;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::size_t cap = 20;
  bool oracle = false;
  std::string out = "json";
  std::string norm = "linf";
};

struct Outcome {
  Json body;
  int code = kOk;
  std::optional<Vector> point;  // for CSV residual tables
};

class OracleLog {
 public:
  void check(const std::string& name, bool passed, const std::string& detail = "") {
    Json c{{"name", name}, {"passed", passed}};
    if (!detail.empty()) c["detail"] = detail;
    checks_.push_back(c);
    agree_ = agree_ && passed;
  }
  void skip(const std::string& name, const std::string& why) {
    checks_.push_back(Json{{"name", name}, {"skipped", why}});
  }
  bool agree() const { return agree_; }
  Json json() const { return Json{{"agree", agree_}, {"checks", checks_}}; }

 private:
  Json checks_ = Json::array();
  bool agree_ = true;
};

std::string num(double v) {
  if (is_pos_inf(v)) return "+inf";
  if (is_neg_inf(v)) return "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const Vector& need_vec(const std::optional<Vector>& v, const char* field, const std::string& cmd) {
  if (!v) throw DomainError("command '" + cmd + "' needs '" + field + "' in the problem file");
  return *v;
}

std::optional<oracle::GridSpec> oracle_grid(Eigen::Index n) {
  if (n > 3) return std::nullopt;
  const int res = n == 1 ? 2001 : (n == 2 ? 201 : 41);
  return oracle::GridSpec(Vector::Constant(n, -10.0), Vector::Constant(n, 10.0), res);
}

double oracle_robust_sum(const FunctionFamily& fam, const Vector& x) {
  if (fam.size() <= 12) return oracle::brute_robust_sum(fam, x);
  return robust_sum_eval(fam, x);
}

// Grid minimum of f - <xbar*, .>, an upper bound on the primal infimum.
std::optional<double> grid_primal(const FunctionFamily& fam, const Vector& xbar_star) {
  const auto grid = oracle_grid(fam.dim());
  if (!grid || fam.size() > 12) return std::nullopt;
  return oracle::brute_minimize(
             [&](const Vector& x) { return oracle::brute_robust_sum(fam, x) - xbar_star.dot(x); }, *grid)
      .value;
}

Outcome cmd_eval(const ProblemFile& p, const Flags& f, OracleLog& log) {
  const auto& fam = p.family;
  const Vector& x = need_vec(p.x, "x", f.command);
  Outcome o;
  o.point = x;
  const auto v = member_values(fam, x);
  Json members = Json::array();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    members.push_back(Json{{"label", fam[i].label},
                           {"value", report::ext(v[i])},
                           {"positive_part", report::ext(std::max(v[i], 0.0))}});
  }
  const ExtReal fx = robust_sum_eval(fam, x);
  const auto canon = canonical_S_f(fam, x, f.tol);
  Json sets = Json::array();
  for (const auto& j : canon.sets) sets.push_back(report::labels(fam, j));
  o.body["x"] = report::vec(x);
  o.body["f0"] = report::ext(sup_function_eval(fam, x));
  o.body["robust_sum"] = report::ext(fx);
  o.body["members"] = members;
  o.body["S_f"] = sets;
  o.body["S_f_minimal"] = canon.minimal.empty() ? Json(nullptr) : report::labels(fam, canon.minimal);
  o.body["S_f_complete"] = canon.complete;
  if (p.generator) {
    Json bounds = Json::array();
    const auto gen = p.generator->generator();
    for (std::size_t n = 1; n <= p.generator->truncation; ++n) {
      bounds.push_back(report::ext(truncated_lower_bound(gen, x, n)));
    }
    o.body["truncated_lower_bounds"] = bounds;
  }
  if (f.oracle) {
    if (fam.size() <= 12) {
      const double b = oracle::brute_robust_sum(fam, x);
      log.check("robust_sum_vs_subset_enumeration", std::abs(b - fx) <= 1e-12 * std::max(1.0, std::abs(b)),
                num(b));
      log.check("S_f_vs_definition", oracle::brute_S_f(fam, x, f.tol) == canon.sets || !canon.complete);
    } else {
      log.skip("robust_sum_vs_subset_enumeration", "more than 12 members");
    }
  }
  return o;
}

DualityOptions duality_options(const Flags& f) {
  DualityOptions d;
  d.cap = f.cap;
  d.value = f.tol;
  return d;
}

Outcome cmd_dual(const ProblemFile& p, const Flags& f, OracleLog& log) {
  const auto& fam = p.family;
  const Vector& xs = need_vec(p.xbar_star, "xbar_star", f.command);
  Outcome o;
  o.point = p.x;
  const auto d = solve_dual(fam, xs, duality_options(f));
  o.body["xbar_star"] = report::vec(xs);
  o.body["dual"] = report::to_json(fam, d);
  if (p.candidate) {
    const auto cv = evaluate_dual_candidate(fam, xs, *p.candidate, 1e-9);
    o.body["candidate"] = Json{{"feasible", cv.feasible},
                               {"objective", report::ext(cv.objective)},
                               {"residual", cv.residual}};
  }
  if (f.oracle) {
    if (const auto g = grid_primal(fam, xs)) {
      log.check("dual_below_grid_primal", d.value <= *g + 1e-6, num(*g));
    } else {
      log.skip("dual_below_grid_primal", "grid oracle needs n <= 3 and at most 12 members");
    }
  }
  return o;
}

Outcome cmd_gap(const ProblemFile& p, const Flags& f, OracleLog& log) {
  const auto& fam = p.family;
  const Vector& xs = need_vec(p.xbar_star, "xbar_star", f.command);
  Outcome o;
  const auto g = gap_report(fam, xs, duality_options(f));
  o.point = g.primal_witness;
  o.body["xbar_star"] = report::vec(xs);
  o.body["gap"] = report::to_json(fam, g);
  o.code = g.strong_duality ? kOk : kConditionFailed;
  if (f.oracle) {
    if (const auto m = grid_primal(fam, xs)) {
      log.check("primal_below_grid_minimum", g.primal_value <= *m + 1e-6, num(*m));
      log.check("dual_below_grid_minimum", g.dual_value <= *m + 1e-6, num(*m));
    } else {
      log.skip("grid_minimum", "grid oracle needs n <= 3 and at most 12 members");
    }
  }
  return o;
}

Outcome cmd_condition(const ProblemFile& p, const Flags& f, OracleLog& log) {
  const auto& fam = p.family;
  const Vector& xs = need_vec(p.xbar_star, "xbar_star", f.command);
  const auto opts = duality_options(f);
  Outcome o;
  o.body["xbar_star"] = report::vec(xs);
  const bool ri = ri_condition(fam, xs, opts);
  o.body["ri_condition"] = ri;
  bool ok = ri;
  if (fam.all_polyhedral()) {
    const auto s = a_line_section(fam, xs, opts);
    o.body["line_section"] = report::to_json(s);
    ok = s.closed_convex_regarding;
  } else {
    o.body["line_section"] = nullptr;
  }
  const bool all_sub = std::all_of(fam.members().begin(), fam.members().end(),
                                   [](const Member& m) { return m.f.kind() == FunctionKind::SubAffine; });
  if (all_sub) {
    std::vector<SubaffineEntry> es;
    for (const auto& m : fam.members()) {
      const auto& s = std::get<SubAffine>(m.f.variant());
      es.push_back({s.set, s.t});
    }
    o.body["subaffine_conditions"] = report::to_json(check_prop_conditions(SubaffineFamily(es), xs, f.cap));
  }
  o.code = ok ? kOk : kConditionFailed;
  if (f.oracle) log.skip("condition", "no brute-force reference for closedness");
  return o;
}

Outcome cmd_certify(const ProblemFile& p, const Flags& f, OracleLog& log) {
  const auto& fam = p.family;
  const Vector& xs = need_vec(p.xbar_star, "xbar_star", f.command);
  const Vector& x = need_vec(p.x, "x", f.command);
  if (!p.candidate) throw DomainError("command 'certify' needs 'candidate' in the problem file");
  OptimalityOptions opts;
  opts.tol = f.tol;
  opts.duality = duality_options(f);
  Outcome o;
  o.point = x;
  const auto gap = gap_report(fam, xs, opts.duality);
  const auto r = certify_pair(fam, xs, x, *p.candidate, gap, opts);
  o.body["xbar_star"] = report::vec(xs);
  o.body["x"] = report::vec(x);
  o.body["candidate"] = report::candidate(fam, *p.candidate);
  o.body["optimality"] = report::to_json(r);
  o.body["gap"] = report::to_json(fam, gap);
  try {
    o.body["primal_solution_set"] = report::to_json(primal_solset_from_dual(fam, xs, *p.candidate, opts));
  } catch (const PreconditionError& e) {
    o.body["primal_solution_set"] = Json{{"refused", e.what()}};
  }
  try {
    o.body["dual_solution_set"] = report::to_json(fam, dual_solset_from_primal(fam, xs, x, opts));
  } catch (const PreconditionError& e) {
    o.body["dual_solution_set"] = Json{{"refused", e.what()}};
  }
  o.code = r.conclusion ? kOk : kConditionFailed;
  if (f.oracle) {
    if (const auto m = grid_primal(fam, xs); m && r.conclusion) {
      log.check("x_matches_grid_minimum", oracle_robust_sum(fam, x) - xs.dot(x) <= *m + 1e-6, num(*m));
    } else {
      log.skip("x_matches_grid_minimum", "no certified pair or grid unavailable");
    }
  }
  return o;
}

Outcome cmd_subdiff(const ProblemFile& p, const Flags& f, OracleLog& log) {
  const auto& fam = p.family;
  const Vector& x = need_vec(p.x, "x", f.command);
  SubdiffOptions opts;
  opts.seed = f.seed;
  opts.duality = duality_options(f);
  Outcome o;
  o.point = x;
  const auto s = robust_subdifferential(fam, x, opts);
  o.body["x"] = report::vec(x);
  o.body["subdifferential"] = report::to_json(fam, s);
  o.code = s.validity ? kOk : kConditionFailed;
  if (f.oracle) {
    if (fam.dim() == 1 && s.hull_interval) {
      const double x0 = x(0);
      const auto iv = oracle::brute_subdiff_1d(
          [&](double t) { return oracle_robust_sum(fam, Vector::Constant(1, t)); }, x0);
      const auto [lo, hi] = *s.hull_interval;
      log.check("formula_inside_oracle", iv.lower <= lo + 1e-6 && hi <= iv.upper + 1e-6,
                "[" + num(iv.lower) + ", " + num(iv.upper) + "]");
      if (s.validity) {
        log.check("formula_equals_oracle", std::abs(iv.lower - lo) <= 1e-6 && std::abs(iv.upper - hi) <= 1e-6);
      }
    } else {
      log.skip("directional_derivative", "one-dimensional problems only");
    }
  }
  return o;
}

Outcome cmd_approx(const ProblemFile& p, const Flags& f, OracleLog& log) {
  const auto& fam = p.family;
  InequalitySystem sys{fam};
  ApproxOptions opts;
  opts.tol = f.tol;
  opts.duality = duality_options(f);
  const bool linf = f.norm == "linf";
  Outcome o;
  const auto r = linf ? linf_solve(sys, opts) : l1_solve(sys, opts);
  o.point = r.solution;
  o.body["approx"] = report::to_json(fam, r);
  o.code = r.strong_duality ? kOk : kConditionFailed;
  if (f.oracle) {
    const auto grid = oracle_grid(fam.dim());
    if (grid && std::isfinite(r.value)) {
      const auto m = oracle::brute_minimize(
          [&](const Vector& x) {
            double s = linf ? -kInf : 0.0;
            for (const auto& mem : fam.members()) {
              const double v = oracle::member_value(mem.f, x);
              s = linf ? std::max(s, v) : s + std::max(v, 0.0);
            }
            return s;
          },
          *grid);
      log.check("value_below_grid_minimum", r.value <= m.value + 1e-6, num(m.value));
    } else {
      log.skip("value_below_grid_minimum", "grid oracle needs n <= 3 and a finite value");
    }
  }
  return o;
}

void write_csv(const FunctionFamily& fam, const Vector& x, std::ostream& out) {
  out << "index,label,f_i(x),f_i+(x)\n";
  const auto v = member_values(fam, x);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    out << (i + 1) << ',' << fam[i].label << ',' << num(v[i]) << ',' << num(std::max(v[i], 0.0)) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Robust sums of convex functions: evaluation, duality and certificates", "robustsum"};
  app.add_option("command", f.command, "eval | dual | gap | condition | certify | subdiff | approx")
      ->required()
      ->check(CLI::IsMember({"eval", "dual", "gap", "condition", "certify", "subdiff", "approx"}));
  app.add_option("problem", f.problem, "problem JSON file")->required();
  app.add_option("--tol", f.tol, "value comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "seed for sampled checks");
  app.add_option("--cap", f.cap, "subset enumeration cap on |I|")->check(CLI::PositiveNumber);
  app.add_flag("--oracle", f.oracle, "re-verify with brute-force oracles");
  app.add_option("--out", f.out, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--norm", f.norm, "linf | l1 (approx)")->check(CLI::IsMember({"linf", "l1"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    const auto p = parse_problem_file(f.problem);
    OracleLog log;
    Outcome o;
    if (f.command == "eval") o = cmd_eval(p, f, log);
    else if (f.command == "dual") o = cmd_dual(p, f, log);
    else if (f.command == "gap") o = cmd_gap(p, f, log);
    else if (f.command == "condition") o = cmd_condition(p, f, log);
    else if (f.command == "certify") o = cmd_certify(p, f, log);
    else if (f.command == "subdiff") o = cmd_subdiff(p, f, log);
    else o = cmd_approx(p, f, log);

    if (f.oracle && !log.agree()) o.code = kOracleDisagrees;
    if (f.out == "csv") {
      if (!o.point) throw DomainError("no point available for a CSV residual table");
      write_csv(p.family, *o.point, out);
    } else {
      Json root;
      root["command"] = f.command;
      if (f.command == "approx") root["norm"] = f.norm;
      root["tol"] = f.tol;
      root["seed"] = f.seed;
      root["cap"] = f.cap;
      root["labels"] = Json::array();
      for (const auto& m : p.family.members()) root["labels"].push_back(m.label);
      for (auto& [k, v] : o.body.items()) root[k] = v;
      if (f.oracle) root["oracle"] = log.json();
      root["exit_code"] = o.code;
      out << root.dump(2) << '\n';
    }
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace rsum::cli
