#include "robustsum/lp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rsum {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::ToleranceFailure: return "tolerance_failure";
  }
  return "unknown";
}

namespace {

// x_j = offset + sum coef * x'_col over standard-form columns
struct VarMap {
  double offset = 0.0;
  std::vector<std::pair<Eigen::Index, double>> terms;
};

class Tableau {
 public:
  Tableau(Matrix t, std::vector<Eigen::Index> basis, Eigen::Index num_art_start,
          const LpOptions& opts)
      : t_(std::move(t)), basis_(std::move(basis)), art_start_(num_art_start), opts_(opts) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  Matrix& data() { return t_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  int pivots() const { return pivots_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
    ++pivots_;
  }

  enum class Outcome { Optimal, Unbounded, IterationLimit };

  // Bland's rule: lowest-index improving column, ties in the ratio test go to
  // the lowest basic index.
  Outcome run(bool allow_artificial_entering, int max_pivots) {
    const Eigen::Index m = rows();
    const Eigen::Index rhs = cols();
    const Eigen::Index limit = allow_artificial_entering ? cols() : art_start_;
    while (true) {
      if (pivots_ >= max_pivots) return Outcome::IterationLimit;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (t_(m, j) < -opts_.cost_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Outcome::Optimal;

      Eigen::Index leave = -1;
      double best_ratio = kInf;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = t_(i, rhs) / a;
        const double slack = 1e-12 * (1.0 + std::abs(best_ratio == kInf ? ratio : best_ratio));
        if (leave < 0 || ratio < best_ratio - slack) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + slack &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return Outcome::Unbounded;
      pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
  Eigen::Index art_start_;
  const LpOptions& opts_;
  int pivots_ = 0;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const LpOptions& opts) {
  LpSolution out;
  const Eigen::Index n = lp.num_vars();
  if (lp.lower.size() != n || lp.upper.size() != n) {
    throw DimensionError("lp_solve: bound vectors do not match objective");
  }
  for (const auto& row : lp.constraints) {
    if (row.coeffs.size() != n) throw DimensionError("lp_solve: constraint row dimension");
  }

  // Standard form: every column >= 0.
  std::vector<VarMap> vars(static_cast<std::size_t>(n));
  Eigen::Index num_std = 0;
  std::vector<std::pair<Eigen::Index, double>> bound_rows;  // column <= value
  for (Eigen::Index j = 0; j < n; ++j) {
    const double l = lp.lower(j);
    const double u = lp.upper(j);
    auto& vm = vars[static_cast<std::size_t>(j)];
    if (l > u) {
      out.status = LpStatus::Infeasible;
      out.message = "empty variable bounds";
      return out;
    }
    if (std::isfinite(l)) {
      vm.offset = l;
      vm.terms.push_back({num_std, 1.0});
      if (std::isfinite(u)) bound_rows.push_back({num_std, u - l});
      ++num_std;
    } else if (std::isfinite(u)) {
      vm.offset = u;
      vm.terms.push_back({num_std++, -1.0});
    } else {
      vm.terms.push_back({num_std++, 1.0});
      vm.terms.push_back({num_std++, -1.0});
    }
  }

  const Eigen::Index m0 = static_cast<Eigen::Index>(lp.constraints.size());
  const Eigen::Index m = m0 + static_cast<Eigen::Index>(bound_rows.size());
  Matrix a_std = Matrix::Zero(m, num_std);
  Vector b_std(m);
  std::vector<Relation> rel(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m0; ++i) {
    const auto& row = lp.constraints[static_cast<std::size_t>(i)];
    double rhs = row.rhs;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = row.coeffs(j);
      if (a == 0.0) continue;
      const auto& vm = vars[static_cast<std::size_t>(j)];
      rhs -= a * vm.offset;
      for (auto [c, coef] : vm.terms) a_std(i, c) += a * coef;
    }
    b_std(i) = rhs;
    rel[static_cast<std::size_t>(i)] = row.relation;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const Eigen::Index i = m0 + static_cast<Eigen::Index>(k);
    a_std(i, bound_rows[k].first) = 1.0;
    b_std(i) = bound_rows[k].second;
    rel[static_cast<std::size_t>(i)] = Relation::LessEqual;
  }

  Vector c_std = Vector::Zero(num_std);
  double c_const = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& vm = vars[static_cast<std::size_t>(j)];
    c_const += lp.objective(j) * vm.offset;
    for (auto [c, coef] : vm.terms) c_std(c) += lp.objective(j) * coef;
  }

  // Make right-hand sides nonnegative.
  Vector row_sign = Vector::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b_std(i) < 0.0) {
      row_sign(i) = -1.0;
      a_std.row(i) *= -1.0;
      b_std(i) = -b_std(i);
      auto& r = rel[static_cast<std::size_t>(i)];
      if (r == Relation::LessEqual) r = Relation::GreaterEqual;
      else if (r == Relation::GreaterEqual) r = Relation::LessEqual;
    }
  }

  Eigen::Index num_slack = 0;
  for (auto r : rel) num_slack += (r == Relation::Equal) ? 0 : 1;
  const Eigen::Index art_start = num_std + num_slack;
  const Eigen::Index total = art_start + m;

  Matrix a_full = Matrix::Zero(m, art_start);  // structural + slack columns
  a_full.leftCols(num_std) = a_std;
  {
    Eigen::Index s = num_std;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto r = rel[static_cast<std::size_t>(i)];
      if (r == Relation::LessEqual) a_full(i, s++) = 1.0;
      else if (r == Relation::GreaterEqual) a_full(i, s++) = -1.0;
    }
  }

  Matrix t = Matrix::Zero(m + 1, total + 1);
  t.topLeftCorner(m, art_start) = a_full;
  t.block(0, art_start, m, m).setIdentity();
  t.topRightCorner(m, 1) = b_std;
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = art_start + i;

  // Phase 1 reduced costs: minimize the sum of artificials.
  for (Eigen::Index j = 0; j < art_start; ++j) t(m, j) = -a_full.col(j).sum();
  t(m, total) = -b_std.sum();

  const int max_pivots =
      opts.max_pivots > 0 ? opts.max_pivots : static_cast<int>(100 * (m + total) + 1000);
  Tableau tab(std::move(t), std::move(basis), art_start, opts);

  auto outcome = tab.run(/*allow_artificial_entering=*/true, max_pivots);
  if (outcome == Tableau::Outcome::IterationLimit) {
    out.status = LpStatus::ToleranceFailure;
    out.message = "pivot limit reached in phase 1";
    out.pivots = tab.pivots();
    return out;
  }
  const double b_scale = 1.0 + (m > 0 ? b_std.cwiseAbs().maxCoeff() : 0.0);
  const double infeas = -tab.data()(m, total);
  if (infeas > opts.feasibility_tol * b_scale) {
    out.status = LpStatus::Infeasible;
    out.pivots = tab.pivots();
    out.message = "phase 1 optimum positive";
    return out;
  }

  // Drive zero-level artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < art_start) continue;
    Eigen::Index best = -1;
    double best_mag = opts.pivot_tol;
    for (Eigen::Index j = 0; j < art_start; ++j) {
      const double mag = std::abs(tab.data()(i, j));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    if (best >= 0) tab.pivot(i, best);
  }

  // Phase 2 reduced costs.
  Vector c_full = Vector::Zero(total);
  c_full.head(num_std) = c_std;
  {
    Matrix& d = tab.data();
    for (Eigen::Index j = 0; j <= total; ++j) {
      double acc = (j < total) ? c_full(j) : 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        acc -= c_full(tab.basis()[static_cast<std::size_t>(i)]) * d(i, j);
      }
      d(m, j) = acc;
    }
  }

  outcome = tab.run(/*allow_artificial_entering=*/false, max_pivots);
  out.pivots = tab.pivots();
  if (outcome == Tableau::Outcome::IterationLimit) {
    out.status = LpStatus::ToleranceFailure;
    out.message = "pivot limit reached in phase 2";
    return out;
  }
  if (outcome == Tableau::Outcome::Unbounded) {
    out.status = LpStatus::Unbounded;
    out.value = -kInf;
    return out;
  }

  // Refine the basic solution and multipliers from the original columns.
  Matrix basis_mat(m, m);
  Vector c_basis(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index col = tab.basis()[static_cast<std::size_t>(i)];
    if (col < art_start) {
      basis_mat.col(i) = a_full.col(col);
    } else {
      basis_mat.col(i) = Vector::Unit(m, col - art_start);
    }
    c_basis(i) = c_full(col);
  }
  Vector x_full = Vector::Zero(total);
  Vector y_std = Vector::Zero(m);
  bool refined = false;
  if (m > 0) {
    Eigen::FullPivLU<Matrix> lu(basis_mat);
    if (lu.isInvertible()) {
      const Vector xb = lu.solve(b_std);
      y_std = lu.transpose().solve(c_basis);
      for (Eigen::Index i = 0; i < m; ++i) {
        x_full(tab.basis()[static_cast<std::size_t>(i)]) = std::max(0.0, xb(i));
      }
      refined = xb.allFinite() && y_std.allFinite();
    }
  }
  if (!refined) {
    x_full.setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      x_full(tab.basis()[static_cast<std::size_t>(i)]) = std::max(0.0, tab.data()(i, total));
    }
    // y_i = -(reduced cost of artificial i) with zero artificial costs
    for (Eigen::Index i = 0; i < m; ++i) y_std(i) = -tab.data()(m, art_start + i);
  }

  out.x = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& vm = vars[static_cast<std::size_t>(j)];
    double v = vm.offset;
    for (auto [c, coef] : vm.terms) v += coef * x_full(c);
    out.x(j) = v;
  }
  out.value = lp.objective.dot(out.x);
  (void)c_const;

  out.duals = Vector::Zero(m0);
  for (Eigen::Index i = 0; i < m0; ++i) out.duals(i) = row_sign(i) * y_std(i);
  out.reduced_costs = lp.objective;
  for (Eigen::Index i = 0; i < m0; ++i) {
    out.reduced_costs -= out.duals(i) * lp.constraints[static_cast<std::size_t>(i)].coeffs;
  }

  // Certify feasibility and complementary slackness in the caller's space.
  const double x_scale = 1.0 + (n > 0 ? out.x.cwiseAbs().maxCoeff() : 0.0);
  double worst = 0.0;
  double worst_cs = 0.0;
  for (Eigen::Index i = 0; i < m0; ++i) {
    const auto& row = lp.constraints[static_cast<std::size_t>(i)];
    const double lhs = row.coeffs.dot(out.x);
    const double scale =
        std::max({1.0, std::abs(row.rhs), row.coeffs.cwiseAbs().maxCoeff() * x_scale});
    double viol = 0.0;
    switch (row.relation) {
      case Relation::LessEqual: viol = std::max(0.0, lhs - row.rhs); break;
      case Relation::GreaterEqual: viol = std::max(0.0, row.rhs - lhs); break;
      case Relation::Equal: viol = std::abs(lhs - row.rhs); break;
    }
    worst = std::max(worst, viol / scale);
    worst_cs = std::max(worst_cs, std::abs(out.duals(i)) * std::abs(lhs - row.rhs) / scale);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double scale = std::max(1.0, std::abs(out.x(j)));
    if (std::isfinite(lp.lower(j))) worst = std::max(worst, (lp.lower(j) - out.x(j)) / scale);
    if (std::isfinite(lp.upper(j))) worst = std::max(worst, (out.x(j) - lp.upper(j)) / scale);
  }
  out.primal_residual = worst;
  if (worst > opts.feasibility_tol) {
    out.status = LpStatus::ToleranceFailure;
    out.message = "primal residual " + std::to_string(worst) + " exceeds tolerance";
    return out;
  }
  if (worst_cs > opts.slackness_tol) {
    out.status = LpStatus::ToleranceFailure;
    out.message = "complementary slackness residual " + std::to_string(worst_cs);
    return out;
  }
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace rsum
