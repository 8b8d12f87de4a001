#include "robustsum/approx.hpp"

#include "robustsum/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsum {

namespace {

struct Piece {
  std::size_t member;
  Vector g;
  double cost;
};

std::vector<Piece> all_pieces(const FunctionFamily& fam) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto ps = fam.f(i).pieces();
    for (std::size_t k = 0; k < ps->slopes.size(); ++k) out.push_back({i, ps->slopes[k], ps->costs[k]});
  }
  return out;
}

// Variables (x, s): rows <g, x> - s <= cost.
LinearProgram chebyshev_lp(const FunctionFamily& fam, const std::vector<Piece>& pieces) {
  const Eigen::Index n = fam.dim();
  LinearProgram lp(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) lp.set_free(k);
  for (const auto& p : pieces) {
    Vector row(n + 1);
    row.head(n) = p.g;
    row(n) = -1.0;
    lp.add(std::move(row), Relation::LessEqual, p.cost);
  }
  return lp;
}

// Variables (x, s_1..s_m), s_i >= 0: rows <g, x> - s_i <= cost.
LinearProgram residual_lp(const FunctionFamily& fam, const std::vector<Piece>& pieces) {
  const Eigen::Index n = fam.dim();
  const auto m = static_cast<Eigen::Index>(fam.size());
  LinearProgram lp(n + m);
  for (Eigen::Index k = 0; k < n; ++k) lp.set_free(k);
  for (const auto& p : pieces) {
    Vector row = Vector::Zero(n + m);
    row.head(n) = p.g;
    row(n + static_cast<Eigen::Index>(p.member)) = -1.0;
    lp.add(std::move(row), Relation::LessEqual, p.cost);
  }
  return lp;
}

LpSolution solve_or_throw(const LinearProgram& lp, const char* what) {
  const auto sol = lp_solve(lp);
  if (sol.status == LpStatus::ToleranceFailure) {
    throw SolverError(std::string(what) + ": " + sol.message);
  }
  return sol;
}

// Null space of all piece slopes, confirmed as two-sided recession
// directions of the optimal face.
void detect_lineality(const FunctionFamily& fam, const std::vector<Piece>& pieces,
                      const LinearProgram& face, ApproxReport& rep) {
  const Eigen::Index n = fam.dim();
  Matrix g(static_cast<Eigen::Index>(pieces.size()), n);
  for (std::size_t k = 0; k < pieces.size(); ++k) g.row(static_cast<Eigen::Index>(k)) = pieces[k].g.transpose();
  Eigen::FullPivLU<Matrix> lu(g);
  lu.setThreshold(1e-10);
  std::vector<Vector> basis;
  if (lu.rank() < n) {
    const Matrix ker = lu.kernel();
    for (Eigen::Index c = 0; c < ker.cols(); ++c) {
      Vector d = ker.col(c).normalized();
      Eigen::Index lead = 0;
      d.cwiseAbs().maxCoeff(&lead);
      if (d(lead) < 0.0) d = -d;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(d(k)) < 1e-14) d(k) = 0.0;
      }
      basis.push_back(std::move(d));
    }
  }

  const Eigen::Index vars = face.num_vars();
  for (const auto& d : basis) {
    bool both = true;
    for (double sign : {1.0, -1.0}) {
      auto lp = face;
      lp.objective.setZero();
      lp.objective.head(n) = sign * d;
      both = both && solve_or_throw(lp, "lineality LP").status == LpStatus::Unbounded;
    }
    if (both) rep.lineality_directions.push_back(d);
  }

  auto reduced = face;
  for (const auto& d : rep.lineality_directions) {
    Vector row = Vector::Zero(vars);
    row.head(n) = d;
    reduced.add(std::move(row), Relation::Equal, 0.0);
  }
  rep.face_bounded_mod_lineality = true;
  for (Eigen::Index k = 0; k < n && rep.face_bounded_mod_lineality; ++k) {
    for (double sign : {1.0, -1.0}) {
      auto lp = reduced;
      lp.objective.setZero();
      lp.objective(k) = sign;
      if (!solve_or_throw(lp, "face bound LP").optimal()) rep.face_bounded_mod_lineality = false;
    }
  }
}

Vector project_simplex(const Vector& v) {
  Vector u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    cum += u(k);
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u(k) - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

// inf_x sum_k w_k f_{s_k}(x) and a minimizer.
std::pair<double, Vector> weighted_inf(const FunctionFamily& fam, const std::vector<std::size_t>& s,
                                       const Vector& w, const SubgradientOptions& sg) {
  const Eigen::Index n = fam.dim();
  bool quadratic_only = true;
  for (auto i : s) quadratic_only = quadratic_only && fam.f(i).kind() == FunctionKind::Quadratic;
  if (quadratic_only) {
    Matrix q = Matrix::Zero(n, n);
    Vector a = Vector::Zero(n);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto& f = std::get<Quadratic>(fam.f(s[k]).variant());
      q += w(static_cast<Eigen::Index>(k)) * f.q;
      a += w(static_cast<Eigen::Index>(k)) * f.a;
    }
    const Vector x = -q.llt().solve(a);
    double v = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) v += w(static_cast<Eigen::Index>(k)) * eval(fam.f(s[k]), x);
    return {v, x};
  }
  auto oracle = [&](const Vector& x) {
    ValueAndSubgradient r{0.0, Vector::Zero(n)};
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double wk = w(static_cast<Eigen::Index>(k));
      if (wk == 0.0) continue;
      r.value += wk * eval(fam.f(s[k]), x);
      r.subgradient += wk * some_subgradient(fam.f(s[k]), x);
    }
    return r;
  };
  const auto res = subgradient_minimize(oracle, Vector::Zero(n), sg);
  return {res.value, res.x};
}

}  // namespace

SimplexWeights::SimplexWeights(std::map<std::size_t, double> weights, double tol) {
  double total = 0.0;
  for (const auto& [i, w] : weights) {
    if (!(w >= -tol)) throw DomainError("simplex weight for position " + std::to_string(i) + " is negative");
    total += w;
    if (w > 0.0) weights_[i] = w;
  }
  if (std::abs(total - 1.0) > tol * std::max<std::size_t>(1, weights.size())) {
    throw DomainError("simplex weights must sum to 1");
  }
}

double SimplexWeights::operator()(std::size_t i) const {
  const auto it = weights_.find(i);
  return it == weights_.end() ? 0.0 : it->second;
}

std::vector<std::size_t> SimplexWeights::support() const {
  std::vector<std::size_t> s;
  for (const auto& [i, w] : weights_) s.push_back(i);
  return s;
}

std::string to_string(ApproxNorm n) { return n == ApproxNorm::Linf ? "linf" : "l1"; }

InconsistencyCheck check_inconsistent(const InequalitySystem& sys, const ApproxOptions& opts) {
  const auto& fam = sys.constraints;
  InconsistencyCheck c;
  if (fam.all_polyhedral()) {
    auto lp = chebyshev_lp(fam, all_pieces(fam));
    lp.objective(fam.dim()) = 1.0;
    const auto sol = solve_or_throw(lp, "inconsistency LP");
    if (sol.status == LpStatus::Unbounded) {
      c.inf_f0 = -kInf;
    } else {
      c.inf_f0 = sol.value;
      c.witness = Vector(sol.x.head(fam.dim()));
    }
    c.inconsistent = c.inf_f0 > opts.tol;
    return c;
  }
  auto oracle = [&](const Vector& x) {
    const auto v = member_values(fam, x);
    const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    return ValueAndSubgradient{v[best], some_subgradient(fam.f(best), x)};
  };
  const auto res = subgradient_minimize(oracle, Vector::Zero(fam.dim()), opts.duality.subgradient);
  c.exact = false;
  c.inf_f0 = res.value;
  c.witness = res.x;
  c.decided = std::abs(res.value) > 1e-6;
  c.inconsistent = res.value > 1e-6;
  return c;
}

ApproxReport linf_solve(const InequalitySystem& sys, const ApproxOptions& opts) {
  const auto& fam = sys.constraints;
  ApproxReport rep;
  rep.norm = ApproxNorm::Linf;
  rep.consistency = check_inconsistent(sys, opts);
  rep.value = rep.consistency.inf_f0;
  rep.solution = rep.consistency.witness;
  rep.exact = rep.consistency.exact;

  if (fam.all_polyhedral() && std::isfinite(rep.value)) {
    const auto pieces = all_pieces(fam);
    auto face = chebyshev_lp(fam, pieces);
    face.upper(fam.dim()) = rep.value + opts.tol * std::max(1.0, std::abs(rep.value));
    detect_lineality(fam, pieces, face, rep);
  }

  const auto dual = linf_dual_solve(sys, opts);
  rep.dual_value = dual.value;
  rep.dual_weights = dual.weights;
  rep.dual_exact = dual.exact;
  const double tol = (rep.exact && dual.exact ? opts.tol : 1e-5) *
                     (std::isfinite(rep.value) ? std::max(1.0, std::abs(rep.value)) : 1.0);
  rep.strong_duality = std::isfinite(rep.value) ? std::abs(rep.value - dual.value) <= tol
                                                : rep.value == dual.value;
  if (fam.all_polyhedral()) rep.diagnosis = strong_duality_report(sys, ApproxNorm::Linf, opts);
  return rep;
}

LinfDual linf_dual_solve(const InequalitySystem& sys, const ApproxOptions& opts) {
  const auto& fam = sys.constraints;
  const Eigen::Index n = fam.dim();
  LinfDual out;
  if (fam.all_polyhedral()) {
    // max -sum mu_k cost_k  s.t.  sum mu_k g_k = 0, mu in the simplex.
    const auto pieces = all_pieces(fam);
    const auto count = static_cast<Eigen::Index>(pieces.size());
    LinearProgram lp(count);
    for (Eigen::Index k = 0; k < count; ++k) lp.objective(k) = pieces[static_cast<std::size_t>(k)].cost;
    for (Eigen::Index r = 0; r < n; ++r) {
      Vector row(count);
      for (Eigen::Index k = 0; k < count; ++k) row(k) = pieces[static_cast<std::size_t>(k)].g(r);
      lp.add(std::move(row), Relation::Equal, 0.0);
    }
    lp.add(Vector::Ones(count), Relation::Equal, 1.0);
    const auto sol = solve_or_throw(lp, "linf dual LP");
    if (!sol.optimal()) {
      out.value = -kInf;
      return out;
    }
    std::map<std::size_t, double> w;
    for (Eigen::Index k = 0; k < count; ++k) {
      const double v = std::max(0.0, sol.x(k));
      if (v > 0.0) w[pieces[static_cast<std::size_t>(k)].member] += v;
    }
    double total = 0.0;
    for (const auto& [i, v] : w) total += v;
    for (auto& [i, v] : w) v /= total;
    out.value = -sol.value;
    out.weights = SimplexWeights(std::move(w), 1e-7);
    return out;
  }

  if (fam.size() > opts.duality.cap) throw CapExceeded("linf_dual_solve: family exceeds cap");
  const std::size_t max_support = std::min<std::size_t>(fam.size(), static_cast<std::size_t>(n) + 1);
  std::vector<SubsetJ> supports;
  for (auto& j : all_subsets(fam.size())) {
    if (j.size() <= max_support) supports.push_back(std::move(j));
  }
  if (supports.size() > 5000) throw CapExceeded("linf_dual_solve: too many supports");

  SubgradientOptions inner = opts.duality.subgradient;
  inner.steps_per_epoch = 200;
  inner.max_epochs = 10;
  out.exact = false;
  for (const auto& s : supports) {
    const auto k = static_cast<Eigen::Index>(s.size());
    Vector w = Vector::Constant(k, 1.0 / static_cast<double>(k));
    double best = -kInf;
    Vector best_w = w;
    for (int it = 1; it <= opts.ascent_iterations; ++it) {
      const auto [value, x] = weighted_inf(fam, s, w, inner);
      if (value > best) {
        best = value;
        best_w = w;
      }
      if (k == 1) break;
      Vector grad(k);
      for (Eigen::Index q = 0; q < k; ++q) grad(q) = eval(fam.f(s[static_cast<std::size_t>(q)]), x);
      grad.array() -= grad.mean();
      const double norm = grad.norm();
      if (norm < 1e-12) break;
      w = project_simplex(w + grad / (norm * std::sqrt(static_cast<double>(it))));
    }
    if (best > out.value + 1e-12) {
      out.value = best;
      std::map<std::size_t, double> m;
      for (Eigen::Index q = 0; q < k; ++q) m[s[static_cast<std::size_t>(q)]] = best_w(q);
      out.weights = SimplexWeights(std::move(m), 1e-7);
    }
  }
  return out;
}

ApproxReport l1_solve(const InequalitySystem& sys, const ApproxOptions& opts) {
  const auto& fam = sys.constraints;
  const Eigen::Index n = fam.dim();
  ApproxReport rep;
  rep.norm = ApproxNorm::L1;
  rep.consistency = check_inconsistent(sys, opts);

  if (fam.all_polyhedral()) {
    const auto pieces = all_pieces(fam);
    auto lp = residual_lp(fam, pieces);
    lp.objective.tail(static_cast<Eigen::Index>(fam.size())).setOnes();
    const auto sol = solve_or_throw(lp, "l1 LP");
    if (sol.status == LpStatus::Unbounded) throw SolverError("l1 LP unbounded");
    rep.value = sol.value;
    rep.solution = Vector(sol.x.head(n));
    auto face = residual_lp(fam, pieces);
    Vector cap_row = Vector::Zero(face.num_vars());
    cap_row.tail(static_cast<Eigen::Index>(fam.size())).setOnes();
    face.add(std::move(cap_row), Relation::LessEqual, rep.value + opts.tol * std::max(1.0, std::abs(rep.value)));
    detect_lineality(fam, pieces, face, rep);
  } else {
    auto oracle = [&](const Vector& x) {
      ValueAndSubgradient r{0.0, Vector::Zero(n)};
      for (std::size_t i = 0; i < fam.size(); ++i) {
        const double v = eval(fam.f(i), x);
        if (v > 0.0) {
          r.value += v;
          r.subgradient += some_subgradient(fam.f(i), x);
        }
      }
      return r;
    };
    const auto res = subgradient_minimize(oracle, Vector::Zero(n), opts.duality.subgradient);
    rep.value = res.value;
    rep.solution = res.x;
    rep.exact = false;
  }

  const auto dual = l1_dual_solve(sys, opts);
  rep.dual_value = dual.value;
  rep.dual_candidate = dual.best;
  rep.dual_exact = dual.exact;
  const double tol = (rep.exact && dual.exact ? opts.tol : 1e-5) * std::max(1.0, std::abs(rep.value));
  rep.strong_duality = dual.best.has_value() && std::abs(rep.value - dual.value) <= tol;
  if (fam.all_polyhedral()) rep.diagnosis = strong_duality_report(sys, ApproxNorm::L1, opts);
  return rep;
}

DualSolution l1_dual_solve(const InequalitySystem& sys, const ApproxOptions& opts) {
  return solve_dual(sys.constraints, Vector::Zero(sys.constraints.dim()), opts.duality);
}

Diagnosis strong_duality_report(const InequalitySystem& sys, ApproxNorm norm,
                                const ApproxOptions& opts) {
  const auto& fam = sys.constraints;
  if (!fam.all_polyhedral()) {
    throw UnsupportedVariant("strong_duality_report: quadratic constraints have no finite certificate");
  }
  Diagnosis d;
  if (norm == ApproxNorm::L1) {
    const auto sec = a_line_section(fam, Vector::Zero(fam.dim()), opts.duality);
    const auto dual = l1_dual_solve(sys, opts);
    d.condition_holds = sec.closed_convex_regarding;
    d.dual_attained = dual.best.has_value();
    d.statement = std::string("union over J of sums of conjugate epigraphs is ") +
                  (d.condition_holds ? "" : "not ") + "closed convex regarding {0} x R";
    return d;
  }
  // Polyhedral linf: LP duality is tight whenever the primal is bounded.
  auto lp = chebyshev_lp(fam, all_pieces(fam));
  lp.objective(fam.dim()) = 1.0;
  const auto primal = solve_or_throw(lp, "linf LP");
  const auto dual = linf_dual_solve(sys, opts);
  d.dual_attained = std::isfinite(dual.value);
  d.condition_holds = primal.optimal() && d.dual_attained &&
                      std::abs(primal.value - dual.value) <= opts.tol * std::max(1.0, std::abs(primal.value));
  d.statement = std::string("union over the simplex of conjugate epigraphs of weighted sums is ") +
                (d.condition_holds ? "" : "not ") + "closed regarding {0} x R";
  return d;
}

double lagrangian_eval(const InequalitySystem& sys, const Vector& x, const SimplexWeights& lambda) {
  const auto& fam = sys.constraints;
  require_dim(x, fam.dim(), "lagrangian_eval");
  double v = 0.0;
  for (const auto& [i, w] : lambda.weights()) {
    if (i >= fam.size()) throw DomainError("lagrangian_eval: weight outside index set");
    v += w * eval(fam.f(i), x);
  }
  return v;
}

}  // namespace rsum
