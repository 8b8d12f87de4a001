#include "robustsum/optimality.hpp"

#include "robustsum/lp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rsum {

namespace {

double scale_of(ExtReal v) { return std::isfinite(v) ? std::max(1.0, std::abs(v)) : 1.0; }

bool contains_subset(const std::vector<SubsetJ>& sets, const SubsetJ& j) {
  return std::find(sets.begin(), sets.end(), j) != sets.end();
}

SubsetJ sorted_copy(const SubsetJ& j) {
  SubsetJ s = j;
  std::sort(s.begin(), s.end());
  return s;
}

// A split y_j in factor_j with sum y_j = target, or nothing.
std::optional<std::vector<Vector>> split_in_factors(const std::vector<Polytope>& factors,
                                                    const Vector& target, double tol) {
  const Eigen::Index n = target.size();
  Eigen::Index count = 0;
  for (const auto& p : factors) count += static_cast<Eigen::Index>(p.vertices.size());
  LinearProgram lp(count);
  Matrix g(n, count);
  Eigen::Index col = 0;
  for (const auto& p : factors) {
    for (const auto& v : p.vertices) g.col(col++) = v;
  }
  for (Eigen::Index r = 0; r < n; ++r) lp.add(Vector(g.row(r).transpose()), Relation::Equal, target(r));
  col = 0;
  for (const auto& p : factors) {
    Vector row = Vector::Zero(count);
    row.segment(col, static_cast<Eigen::Index>(p.vertices.size())).setOnes();
    col += static_cast<Eigen::Index>(p.vertices.size());
    lp.add(std::move(row), Relation::Equal, 1.0);
  }
  LpOptions lo;
  lo.feasibility_tol = tol;
  const auto sol = lp_solve(lp, lo);
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  if (!sol.optimal()) throw SolverError("factor split LP: " + sol.message);
  std::vector<Vector> out;
  col = 0;
  for (const auto& p : factors) {
    Vector y = Vector::Zero(n);
    for (const auto& v : p.vertices) y += sol.x(col++) * v;
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace

OptimalityReport certify_pair(const FunctionFamily& fam, const Vector& xbar_star,
                              const Vector& x, const DualCandidate& cand,
                              const OptimalityOptions& opts) {
  return certify_pair(fam, xbar_star, x, cand, gap_report(fam, xbar_star, opts.duality), opts);
}

OptimalityReport certify_pair(const FunctionFamily& fam, const Vector& xbar_star,
                              const Vector& x, const DualCandidate& cand, const GapReport& gap,
                              const OptimalityOptions& opts) {
  require_dim(x, fam.dim(), "certify_pair");
  OptimalityReport r;
  const double tol = opts.tol;
  const auto cv = evaluate_dual_candidate(fam, xbar_star, cand, tol);
  r.candidate_feasible = cv.feasible;
  const ExtReal fx = robust_sum_eval(fam, x);
  if (!cv.feasible) {
    r.reason = "candidate does not split xbar* (residual " + std::to_string(cv.residual) + ")";
    r.consistent = true;
    return r;
  }
  if (!std::isfinite(fx)) {
    r.reason = "x is outside dom f";
    r.consistent = true;
    return r;
  }

  // (i) through the optimal values.
  const ExtReal px = fx - xbar_star.dot(x);
  const double p_res = std::isfinite(gap.primal_value) ? px - gap.primal_value : kInf;
  const double d_res = std::isfinite(gap.dual_value) ? gap.dual_value - cv.objective : kInf;
  const double gap_tol = (gap.exact ? tol : 1e-5) * scale_of(gap.primal_value);
  r.statement_i.residual = std::max({p_res, d_res, std::abs(gap.gap)});
  r.statement_i.holds = gap.zero_gap && p_res <= gap_tol && d_res <= gap_tol;

  // (ii) definitional S_f membership and Fenchel-Young per member.
  double fy_worst = 0.0;
  bool all_fy = true;
  double jsum = 0.0;
  for (std::size_t k = 0; k < cand.J.size(); ++k) {
    const auto& fj = fam.f(cand.J[k]);
    const double v = eval(fj, x);
    jsum += v;
    const double fy = v + conjugate_eval(fj, cand.slopes[k], tol) - cand.slopes[k].dot(x);
    fy_worst = std::max(fy_worst, fy);
    all_fy = all_fy && subdiff_contains(fj, x, cand.slopes[k], tol * std::max(1.0, std::abs(v)));
  }
  const bool in_s = in_S_f(fam, x, sorted_copy(cand.J), tol * scale_of(fx));
  r.statement_ii.holds = in_s && all_fy;
  r.statement_ii.residual = std::max(std::abs(jsum - fx), fy_worst);

  // (iii) case-formula T_f and subdifferential polytopes.
  const auto canon = canonical_S_f(fam, x, tol * scale_of(fx), 20);
  const bool in_t = contains_subset(canon.sets, sorted_copy(cand.J));
  bool all_m = true;
  for (std::size_t k = 0; k < cand.J.size(); ++k) {
    all_m = all_m && polytope_contains(subdiff(fam.f(cand.J[k]), x), cand.slopes[k], tol);
  }
  r.statement_iii.holds = in_t && all_m;
  r.statement_iii.residual = r.statement_ii.residual;

  // (iv) conjugate subdifferentials.
  bool all_c = true;
  for (std::size_t k = 0; k < cand.J.size(); ++k) {
    all_c = all_c && conjugate_subdiff_contains(fam.f(cand.J[k]), cand.slopes[k], x, tol);
  }
  r.statement_iv.holds = in_t && all_c;
  r.statement_iv.residual = r.statement_ii.residual;

  r.conclusion = r.statement_i.holds;
  r.consistent = r.statement_i.holds == r.statement_ii.holds &&
                 r.statement_ii.holds == r.statement_iii.holds &&
                 r.statement_iii.holds == r.statement_iv.holds;
  if (!r.statement_ii.holds) {
    r.reason = !in_s ? "J is not in S_f(x)" : "some x*_j is not a subgradient of f_j at x";
  } else if (!r.consistent) {
    r.reason = "statements disagree within tolerance";
  }
  return r;
}

PrimalSolutionSet primal_solset_from_dual(const FunctionFamily& fam, const Vector& xbar_star,
                                          const DualCandidate& cand,
                                          const OptimalityOptions& opts) {
  const auto gap = gap_report(fam, xbar_star, opts.duality);
  if (!gap.strong_duality || !std::isfinite(gap.dual_value)) {
    throw PreconditionError("primal_solset_from_dual: strong duality does not hold at xbar*");
  }
  const auto cv = evaluate_dual_candidate(fam, xbar_star, cand, opts.tol);
  if (!cv.feasible || cv.objective < gap.dual_value - opts.tol * scale_of(gap.dual_value)) {
    throw PreconditionError("primal_solset_from_dual: candidate is not dual optimal");
  }

  const SubsetJ j = sorted_copy(cand.J);
  const Eigen::Index n = fam.dim();
  const double tol = opts.tol;
  auto member = [fam, cand, j, tol](const Vector& x, double t) {
    const double eps = std::max(t, tol);
    if (!in_S_f(fam, x, j, eps * scale_of(robust_sum_eval(fam, x)))) return false;
    for (std::size_t k = 0; k < cand.J.size(); ++k) {
      if (!subdiff_contains(fam.f(cand.J[k]), x, cand.slopes[k], eps)) return false;
    }
    return true;
  };

  PrimalSolutionSet out{SetExpr::predicate(n, "T_f(J) and M_{f_j}(x*_j) membership", member), {}, {}};
  if (!fam.all_affine() || fam.size() > opts.duality.cap) return out;

  // x in T_f(J) iff sum_K f_k(x) <= sum_J f_j(x) for every K; the
  // M_{f_j}(x*_j) are the whole space once x*_j is the slope of f_j.
  Vector aj = Vector::Zero(n);
  double cj = 0.0;
  for (auto i : j) {
    const auto& a = std::get<Affine>(fam.f(i).variant());
    aj += a.a;
    cj += a.c;
  }
  HPolyhedron h;
  bool empty = false;
  for (const auto& k : all_subsets(fam.size())) {
    Vector ak = Vector::Zero(n);
    double ck = 0.0;
    for (auto i : k) {
      const auto& a = std::get<Affine>(fam.f(i).variant());
      ak += a.a;
      ck += a.c;
    }
    HPolyhedron::Row row{ak - aj, cj - ck};
    if (row.normal.cwiseAbs().maxCoeff() <= tol) {
      empty = empty || row.rhs < -tol;
      continue;
    }
    h.rows.push_back(std::move(row));
  }
  if (empty) {
    out.set = SetExpr::empty(n);
    return out;
  }
  out.set = SetExpr::cut(SetExpr::whole(n), h);
  if (n == 1) {
    ExtReal lo = -kInf;
    ExtReal hi = kInf;
    for (const auto& row : h.rows) {
      const double bound = row.rhs / row.normal(0);
      if (row.normal(0) > 0.0) hi = std::min(hi, bound);
      else lo = std::max(lo, bound);
    }
    out.interval = std::make_pair(lo, hi);
  }
  out.explicit_form = std::move(h);
  return out;
}

DualSolutionSet dual_solset_from_primal(const FunctionFamily& fam, const Vector& xbar_star,
                                        const Vector& x, const OptimalityOptions& opts) {
  require_dim(x, fam.dim(), "dual_solset_from_primal");
  const auto gap = gap_report(fam, xbar_star, opts.duality);
  if (!gap.zero_gap || !std::isfinite(gap.primal_value)) {
    throw PreconditionError("dual_solset_from_primal: min(RP) = sup(RD) is not verified");
  }
  const ExtReal fx = robust_sum_eval(fam, x);
  const double tol = opts.tol;
  const double gap_tol = (gap.exact ? tol : 1e-5) * scale_of(gap.primal_value);
  const bool x_optimal = std::isfinite(fx) && fx - xbar_star.dot(x) <= gap.primal_value + gap_tol;

  DualSolutionSet out;
  const auto canon = canonical_S_f(fam, x, tol * scale_of(fx), 20);
  for (const auto& j : canon.sets) {
    DualSolsetEntry e;
    e.J = j;
    for (auto i : j) e.factors.push_back(subdiff(fam.f(i), x));
    if (auto split = split_in_factors(e.factors, xbar_star, tol)) {
      DualCandidate c{j, std::move(*split)};
      out.candidates.push_back(c);
      e.representative = std::move(c);
    }
    out.entries.push_back(std::move(e));
  }
  if (x_optimal) {
    out.witness_path = "iii";
  } else if (!out.candidates.empty()) {
    out.witness_path = "iv";
  } else {
    throw PreconditionError("dual_solset_from_primal: x is not a primal solution");
  }
  return out;
}

RobustSubdifferential robust_subdifferential(const FunctionFamily& fam, const Vector& x,
                                             const SubdiffOptions& opts) {
  require_dim(x, fam.dim(), "robust_subdifferential");
  const Eigen::Index n = fam.dim();
  RobustSubdifferential out{SetExpr::empty(n), {}, false, 0, 0, {}, {}};
  const ExtReal fx = robust_sum_eval(fam, x);
  if (!std::isfinite(fx)) return out;

  const auto canon = canonical_S_f(fam, x, 1e-9 * scale_of(fx), 12);
  std::vector<SetExpr> parts;
  std::vector<std::vector<Vector>> blocks;
  for (const auto& j : canon.sets) {
    std::vector<SetExpr> terms;
    for (auto i : j) terms.push_back(SetExpr::poly(subdiff(fam.f(i), x)));
    parts.push_back(SetExpr::mink_sum(std::move(terms)));
    blocks.push_back(parts.back().generators());
  }
  out.subsets = canon.sets;
  out.set = SetExpr::union_of(std::move(parts), n);

  // Sample points of the convex hull of the formula set.
  std::vector<Vector> samples;
  std::vector<Vector> gens;
  for (const auto& b : blocks) gens.insert(gens.end(), b.begin(), b.end());
  auto push_unique = [&](const Vector& p) {
    for (const auto& q : samples) {
      if ((q - p).cwiseAbs().maxCoeff() <= 1e-12) return;
    }
    samples.push_back(p);
  };
  for (const auto& g : gens) push_unique(g);
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < blocks.size(); ++b) {
      push_unique(0.5 * (blocks[a].front() + blocks[b].front()));
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t s = 0; s < opts.random_samples && gens.size() > 1; ++s) {
    Vector p = Vector::Zero(n);
    double total = 0.0;
    for (const auto& g : gens) {
      const double w = expo(rng);
      p += w * g;
      total += w;
    }
    push_unique(p / total);
  }

  out.validity = true;
  for (const auto& p : samples) {
    ++out.samples_checked;
    const auto gap = gap_report(fam, p, opts.duality);
    if (!gap.strong_duality) {
      ++out.samples_failed;
      if (!out.first_failure) out.first_failure = p;
      out.validity = false;
    }
  }

  if (n == 1) {
    const Vector e = Vector::Ones(1);
    out.hull_interval = std::make_pair(-out.set.support(-e), out.set.support(e));
  }
  return out;
}

}  // namespace rsum
