#include "robustsum/duality.hpp"

#include "robustsum/lp.hpp"

#include <algorithm>
#include <cmath>

namespace rsum {

namespace {

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

bool better_candidate(ExtReal value, const SubsetJ& j, ExtReal best, const SubsetJ* best_j) {
  if (best_j == nullptr) return value > -kInf;
  if (value > best + 1e-12) return true;
  return value >= best - 1e-12 && shortlex_less(j, *best_j);
}

// Generator points (sum of slopes, sum of costs) of sum_{j in J} epi f*_j.
struct GeneratorPoints {
  std::vector<Vector> slopes;
  std::vector<double> costs;
};

GeneratorPoints cross_sums(const FunctionFamily& fam, const SubsetJ& j, std::size_t max_points) {
  GeneratorPoints acc;
  acc.slopes.push_back(Vector::Zero(fam.dim()));
  acc.costs.push_back(0.0);
  for (auto i : j) {
    const auto ps = fam.f(i).pieces();
    if (!ps) throw UnsupportedVariant("generator points need polyhedral members");
    if (acc.slopes.size() * ps->slopes.size() > max_points) {
      throw CapExceeded("too many generator points for subset enumeration");
    }
    GeneratorPoints next;
    for (std::size_t a = 0; a < acc.slopes.size(); ++a) {
      for (std::size_t k = 0; k < ps->slopes.size(); ++k) {
        next.slopes.push_back(acc.slopes[a] + ps->slopes[k]);
        next.costs.push_back(acc.costs[a] + ps->costs[k]);
      }
    }
    acc = std::move(next);
  }
  return acc;
}

SplitResult split_polyhedral(const FunctionFamily& fam, const SubsetJ& j, const Vector& target,
                             const DualityOptions& opts) {
  const Eigen::Index n = fam.dim();
  std::vector<PieceSet> sets;
  std::vector<Eigen::Index> offset;
  Eigen::Index count = 0;
  bool single = true;
  for (auto i : j) {
    sets.push_back(*fam.f(i).pieces());
    offset.push_back(count);
    count += static_cast<Eigen::Index>(sets.back().slopes.size());
    single = single && sets.back().slopes.size() == 1;
  }

  SplitResult out;
  if (single) {
    // Every conjugate is a point indicator: the split is forced.
    Vector sum = Vector::Zero(n);
    double cost = 0.0;
    for (const auto& s : sets) {
      sum += s.slopes.front();
      cost += s.costs.front();
    }
    if (max_abs(sum - target) > opts.feasibility) return out;
    out.value = cost;
    for (const auto& s : sets) out.slopes.push_back(s.slopes.front());
    return out;
  }

  LinearProgram lp(count);
  for (std::size_t b = 0; b < sets.size(); ++b) {
    for (std::size_t k = 0; k < sets[b].costs.size(); ++k) {
      lp.objective(offset[b] + static_cast<Eigen::Index>(k)) = sets[b].costs[k];
    }
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    Vector row(count);
    for (std::size_t b = 0; b < sets.size(); ++b) {
      for (std::size_t k = 0; k < sets[b].slopes.size(); ++k) {
        row(offset[b] + static_cast<Eigen::Index>(k)) = sets[b].slopes[k](r);
      }
    }
    lp.add(std::move(row), Relation::Equal, target(r));
  }
  for (std::size_t b = 0; b < sets.size(); ++b) {
    Vector row = Vector::Zero(count);
    row.segment(offset[b], static_cast<Eigen::Index>(sets[b].slopes.size())).setOnes();
    lp.add(std::move(row), Relation::Equal, 1.0);
  }
  LpOptions lo;
  lo.feasibility_tol = opts.feasibility;
  const auto sol = lp_solve(lp, lo);
  if (sol.status == LpStatus::Infeasible) return out;
  if (!sol.optimal()) throw SolverError("split LP: " + to_string(sol.status) + " " + sol.message);
  out.value = sol.value;
  for (std::size_t b = 0; b < sets.size(); ++b) {
    Vector y = Vector::Zero(n);
    for (std::size_t k = 0; k < sets[b].slopes.size(); ++k) {
      y += sol.x(offset[b] + static_cast<Eigen::Index>(k)) * sets[b].slopes[k];
    }
    out.slopes.push_back(std::move(y));
  }
  return out;
}

SplitResult split_with_quadratics(const FunctionFamily& fam, const SubsetJ& j,
                                  const Vector& target, const DualityOptions& opts) {
  const Eigen::Index n = fam.dim();
  std::vector<std::size_t> poly_pos;  // positions inside J
  std::vector<std::size_t> quad_pos;
  for (std::size_t p = 0; p < j.size(); ++p) {
    (fam.f(j[p]).is_polyhedral() ? poly_pos : quad_pos).push_back(p);
  }

  Matrix s_sum = Matrix::Zero(n, n);
  Vector a_sum = Vector::Zero(n);
  double c_sum = 0.0;
  for (auto p : quad_pos) {
    const auto& q = std::get<Quadratic>(fam.f(j[p]).variant());
    s_sum += q.q;
    a_sum += q.a;
    c_sum += q.c;
  }
  const Eigen::LLT<Matrix> s_llt(s_sum);

  // Polyhedral weights: one simplex block per polyhedral member.
  std::vector<PieceSet> sets;
  std::vector<Eigen::Index> offset;
  Eigen::Index count = 0;
  for (auto p : poly_pos) {
    sets.push_back(*fam.f(j[p]).pieces());
    offset.push_back(count);
    count += static_cast<Eigen::Index>(sets.back().slopes.size());
  }
  Matrix g(n, count);
  Vector cost(count);
  for (std::size_t b = 0; b < sets.size(); ++b) {
    for (std::size_t k = 0; k < sets[b].slopes.size(); ++k) {
      g.col(offset[b] + static_cast<Eigen::Index>(k)) = sets[b].slopes[k];
      cost(offset[b] + static_cast<Eigen::Index>(k)) = sets[b].costs[k];
    }
  }
  const Vector r = target - a_sum;

  auto objective = [&](const Vector& mu) {
    const Vector z = r - g * mu;
    return cost.dot(mu) + 0.5 * z.dot(s_llt.solve(z)) - c_sum;
  };

  Vector mu = Vector::Zero(count);
  for (std::size_t b = 0; b < sets.size(); ++b) mu(offset[b]) = 1.0;

  bool exact = sets.empty();
  double value = objective(mu);
  for (int it = 0; it < opts.frank_wolfe_iterations && !sets.empty(); ++it) {
    const Vector w = s_llt.solve(Vector(r - g * mu));
    const Vector grad = cost - g.transpose() * w;
    Vector d = -mu;
    double gap = 0.0;
    for (std::size_t b = 0; b < sets.size(); ++b) {
      const auto len = static_cast<Eigen::Index>(sets[b].slopes.size());
      Eigen::Index arg = 0;
      grad.segment(offset[b], len).minCoeff(&arg);
      d(offset[b] + arg) += 1.0;
      gap += grad.segment(offset[b], len).dot(mu.segment(offset[b], len)) -
             grad(offset[b] + arg);
    }
    if (gap <= 0.1 * opts.value * std::max(1.0, std::abs(value))) {
      exact = true;
      break;
    }
    const Vector gd = g * d;
    const double curv = gd.dot(s_llt.solve(gd));
    const double step = curv > 0.0 ? std::min(1.0, gap / curv) : 1.0;
    mu += step * d;
    value = objective(mu);
  }

  SplitResult out;
  out.exact = exact;
  out.value = value;
  out.slopes.assign(j.size(), Vector::Zero(n));
  Vector poly_total = Vector::Zero(n);
  for (std::size_t b = 0; b < sets.size(); ++b) {
    Vector y = Vector::Zero(n);
    for (std::size_t k = 0; k < sets[b].slopes.size(); ++k) {
      y += mu(offset[b] + static_cast<Eigen::Index>(k)) * sets[b].slopes[k];
    }
    poly_total += y;
    out.slopes[poly_pos[b]] = std::move(y);
  }
  const Vector w = s_llt.solve(Vector(target - poly_total - a_sum));
  for (auto p : quad_pos) {
    const auto& q = std::get<Quadratic>(fam.f(j[p]).variant());
    out.slopes[p] = q.a + q.q * w;
  }
  return out;
}

}  // namespace

CandidateValue evaluate_dual_candidate(const FunctionFamily& fam, const Vector& xbar_star,
                                       const DualCandidate& cand, double tol) {
  require_dim(xbar_star, fam.dim(), "evaluate_dual_candidate");
  if (cand.J.empty() || cand.J.size() != cand.slopes.size()) {
    throw DomainError("dual candidate: J and assignment must match and be nonempty");
  }
  CandidateValue out;
  Vector sum = Vector::Zero(fam.dim());
  double conj = 0.0;
  for (std::size_t k = 0; k < cand.J.size(); ++k) {
    if (cand.J[k] >= fam.size()) throw DomainError("dual candidate: index outside family");
    require_dim(cand.slopes[k], fam.dim(), "dual candidate slope");
    sum += cand.slopes[k];
    conj += conjugate_eval(fam.f(cand.J[k]), cand.slopes[k], tol);
  }
  out.residual = max_abs(sum - xbar_star);
  out.feasible = out.residual <= tol;
  out.objective = -conj;
  return out;
}

SplitResult min_split(const FunctionFamily& fam, const SubsetJ& j, const Vector& target,
                      const DualityOptions& opts) {
  require_dim(target, fam.dim(), "min_split");
  const bool poly = std::all_of(j.begin(), j.end(),
                                [&](std::size_t i) { return fam.f(i).is_polyhedral(); });
  return poly ? split_polyhedral(fam, j, target, opts)
              : split_with_quadratics(fam, j, target, opts);
}

DualSolution solve_dual(const FunctionFamily& fam, const Vector& xbar_star,
                        const DualityOptions& opts) {
  require_dim(xbar_star, fam.dim(), "solve_dual");
  if (fam.size() > opts.cap) {
    throw CapExceeded("solve_dual: |I| = " + std::to_string(fam.size()) +
                      " exceeds enumeration cap " + std::to_string(opts.cap));
  }
  DualSolution out;
  const std::size_t m = fam.size();

  if (fam.all_affine()) {
    // Partial sums of slopes decide feasibility without any LP.
    std::vector<Vector> slope(m);
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& a = std::get<Affine>(fam.f(i).variant());
      slope[i] = a.a;
      c[i] = a.c;
    }
    SubsetJ best_j;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      Vector sum = -xbar_star;
      double value = 0.0;
      SubsetJ jset;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (std::uint64_t{1} << i)) {
          sum += slope[i];
          value += c[i];
          jset.push_back(i);
        }
      }
      if (max_abs(sum) > opts.feasibility) continue;
      ++out.feasible_subsets;
      if (better_candidate(value, jset, out.value, out.best ? &best_j : nullptr)) {
        out.value = value;
        best_j = jset;
        DualCandidate cand{jset, {}};
        for (auto i : jset) cand.slopes.push_back(slope[i]);
        out.best = std::move(cand);
      }
    }
    return out;
  }

  for (const auto& jset : all_subsets(m)) {
    const auto split = min_split(fam, jset, xbar_star, opts);
    if (!std::isfinite(split.value)) continue;
    ++out.feasible_subsets;
    out.exact = out.exact && split.exact;
    const ExtReal value = -split.value;
    if (better_candidate(value, jset, out.value, out.best ? &out.best->J : nullptr)) {
      out.value = value;
      out.best = DualCandidate{jset, split.slopes};
    }
  }
  return out;
}

PhiValue phi_eval(const FunctionFamily& fam, const Vector& xbar_star, const Vector& x_star,
                  const DualityOptions& opts) {
  require_dim(x_star, fam.dim(), "phi_eval");
  const auto d = solve_dual(fam, xbar_star + x_star, opts);
  return {-d.value, d.exact};
}

PrimalSolution solve_primal(const FunctionFamily& fam, const Vector& xbar_star,
                            const DualityOptions& opts) {
  require_dim(xbar_star, fam.dim(), "solve_primal");
  const Eigen::Index n = fam.dim();
  PrimalSolution out;

  if (!fam.all_polyhedral()) {
    auto oracle = [&](const Vector& x) {
      return ValueAndSubgradient{robust_sum_eval(fam, x) - xbar_star.dot(x),
                                 robust_sum_subgradient(fam, x) - xbar_star};
    };
    const auto res = subgradient_minimize(oracle, Vector::Zero(n), opts.subgradient);
    out.method = "subgradient";
    out.exact = false;
    out.converged = res.converged;
    out.value = res.value;
    out.x = res.x;
    out.attained = res.converged;
    return out;
  }

  std::vector<PieceSet> sets;
  for (const auto& m : fam.members()) sets.push_back(*m.f.pieces());
  const auto m = static_cast<Eigen::Index>(sets.size());

  // Region f_0 <= 0: variables (x, s), min s - <xbar*, x>.
  LinearProgram below(n + 1);
  for (Eigen::Index k = 0; k < n; ++k) below.set_free(k);
  below.lower(n) = -kInf;
  below.upper(n) = 0.0;
  below.objective.head(n) = -xbar_star;
  below.objective(n) = 1.0;
  for (const auto& s : sets) {
    for (std::size_t k = 0; k < s.slopes.size(); ++k) {
      Vector row(n + 1);
      row.head(n) = s.slopes[k];
      row(n) = -1.0;
      below.add(std::move(row), Relation::LessEqual, s.costs[k]);
    }
  }

  // Sum of positive parts: variables (x, s_1..s_m), s_i >= 0.
  LinearProgram above(n + m);
  for (Eigen::Index k = 0; k < n; ++k) above.set_free(k);
  above.objective.head(n) = -xbar_star;
  above.objective.tail(m).setOnes();
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = sets[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < s.slopes.size(); ++k) {
      Vector row = Vector::Zero(n + m);
      row.head(n) = s.slopes[k];
      row(n + i) = -1.0;
      above.add(std::move(row), Relation::LessEqual, s.costs[k]);
    }
  }

  LpOptions lo;
  lo.feasibility_tol = opts.feasibility;
  const auto a = lp_solve(below, lo);
  const auto b = lp_solve(above, lo);
  for (const auto* s : {&a, &b}) {
    if (s->status == LpStatus::ToleranceFailure) {
      throw SolverError("solve_primal LP: " + s->message);
    }
  }
  out.method = "lp";
  if (a.status == LpStatus::Unbounded || b.status == LpStatus::Unbounded) {
    out.value = -kInf;
    out.attained = false;
    return out;
  }
  const ExtReal va = a.optimal() ? a.value : kInf;
  const ExtReal vb = b.optimal() ? b.value : kInf;
  const auto& win = (va <= vb) ? a : b;
  out.value = std::min(va, vb);
  out.x = Vector(win.x.head(n));
  out.attained = true;
  return out;
}

GapReport gap_report(const FunctionFamily& fam, const Vector& xbar_star,
                     const DualityOptions& opts) {
  GapReport r;
  const auto p = solve_primal(fam, xbar_star, opts);
  const auto d = solve_dual(fam, xbar_star, opts);
  r.primal_value = p.value;
  r.dual_value = d.value;
  r.primal_attained = p.attained;
  r.primal_witness = p.x;
  r.dual_attained = d.best.has_value();
  r.dual_witness = d.best;
  r.exact = p.exact && d.exact;

  const double tol = r.exact ? opts.value : 1e-5;
  if (std::isinf(r.primal_value) && r.primal_value == r.dual_value) {
    r.gap = 0.0;
  } else {
    r.gap = r.primal_value - r.dual_value;
  }
  const double scale = std::isfinite(r.primal_value) ? std::max(1.0, std::abs(r.primal_value)) : 1.0;
  r.weak_duality_ok = std::isnan(r.gap) || r.gap >= -tol * scale;
  r.zero_gap = std::abs(r.gap) <= tol * scale;
  r.strong_duality = r.zero_gap && (r.dual_attained || is_neg_inf(r.dual_value));
  return r;
}

std::vector<Vector> subset_slope_sums(const FunctionFamily& fam, const SubsetJ& j,
                                      std::size_t max_points) {
  return cross_sums(fam, j, max_points).slopes;
}

LineSection a_line_section(const FunctionFamily& fam, const Vector& xbar_star,
                           const DualityOptions& opts) {
  require_dim(xbar_star, fam.dim(), "a_line_section");
  if (!fam.all_polyhedral()) {
    throw UnsupportedVariant("a_line_section: quadratic members have no finite generator form");
  }
  if (fam.size() > opts.cap) throw CapExceeded("a_line_section: family exceeds enumeration cap");

  LineSection out;
  GeneratorPoints all;
  for (const auto& j : all_subsets(fam.size())) {
    const auto split = min_split(fam, j, xbar_star, opts);
    out.section_inf = std::min(out.section_inf, split.value);
    auto pts = cross_sums(fam, j, 200000);
    all.slopes.insert(all.slopes.end(), pts.slopes.begin(), pts.slopes.end());
    all.costs.insert(all.costs.end(), pts.costs.begin(), pts.costs.end());
  }

  // cl co of the union is co(points) + vertical ray, already closed.
  const auto count = static_cast<Eigen::Index>(all.slopes.size());
  LinearProgram lp(count);
  for (Eigen::Index k = 0; k < count; ++k) lp.objective(k) = all.costs[static_cast<std::size_t>(k)];
  for (Eigen::Index r = 0; r < fam.dim(); ++r) {
    Vector row(count);
    for (Eigen::Index k = 0; k < count; ++k) row(k) = all.slopes[static_cast<std::size_t>(k)](r);
    lp.add(std::move(row), Relation::Equal, xbar_star(r));
  }
  lp.add(Vector::Ones(count), Relation::Equal, 1.0);
  LpOptions lo;
  lo.feasibility_tol = opts.feasibility;
  const auto sol = lp_solve(lp, lo);
  if (sol.optimal()) {
    out.clco_section_inf = sol.value;
  } else if (sol.status != LpStatus::Infeasible) {
    throw SolverError("a_line_section LP: " + to_string(sol.status));
  }

  if (std::isinf(out.section_inf) || std::isinf(out.clco_section_inf)) {
    out.closed_convex_regarding = out.section_inf == out.clco_section_inf;
  } else {
    out.closed_convex_regarding = std::abs(out.section_inf - out.clco_section_inf) <=
                                  opts.value * std::max(1.0, std::abs(out.section_inf));
  }
  return out;
}

bool ri_membership(const std::vector<Vector>& points, const Vector& x, double tol) {
  if (points.empty()) throw DomainError("ri_membership: empty point set");
  const auto count = static_cast<Eigen::Index>(points.size());
  const Eigen::Index n = x.size();
  // lambda_v = eps + nu_v with nu >= 0; maximize eps.
  LinearProgram lp(count + 1);
  lp.set_free(count);
  lp.objective(count) = -1.0;
  Vector total = Vector::Zero(n);
  for (const auto& p : points) {
    require_dim(p, n, "ri_membership");
    total += p;
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    Vector row(count + 1);
    for (Eigen::Index k = 0; k < count; ++k) row(k) = points[static_cast<std::size_t>(k)](r);
    row(count) = total(r);
    lp.add(std::move(row), Relation::Equal, x(r));
  }
  Vector ones = Vector::Ones(count + 1);
  ones(count) = static_cast<double>(count);
  lp.add(std::move(ones), Relation::Equal, 1.0);
  const auto sol = lp_solve(lp);
  if (sol.status == LpStatus::Infeasible) return false;
  if (!sol.optimal()) throw SolverError("ri_membership LP: " + to_string(sol.status));
  return sol.x(count) > tol;
}

bool ri_condition(const FunctionFamily& fam, const Vector& xbar_star,
                  const DualityOptions& opts) {
  require_dim(xbar_star, fam.dim(), "ri_condition");
  // A quadratic conjugate has full domain, so the hull is the whole space.
  if (!fam.all_polyhedral()) return true;
  if (fam.size() > opts.cap) throw CapExceeded("ri_condition: family exceeds enumeration cap");
  std::vector<Vector> pts;
  for (const auto& j : all_subsets(fam.size())) {
    auto s = subset_slope_sums(fam, j);
    pts.insert(pts.end(), s.begin(), s.end());
  }
  return ri_membership(pts, xbar_star, opts.feasibility);
}

}  // namespace rsum
