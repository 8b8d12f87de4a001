#pragma once

#include "robustsum/core.hpp"

#include <string>
#include <vector>

namespace rsum {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  Vector coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// Dense linear program: minimize objective . x subject to the constraint rows
/// and lower <= x <= upper (bounds may be infinite). Variables default to x >= 0.
struct LinearProgram {
  Vector objective;
  std::vector<LinearConstraint> constraints;
  Vector lower;
  Vector upper;

  explicit LinearProgram(Eigen::Index num_vars)
      : objective(Vector::Zero(num_vars)),
        lower(Vector::Zero(num_vars)),
        upper(Vector::Constant(num_vars, kInf)) {}

  Eigen::Index num_vars() const { return objective.size(); }

  void add(Vector coeffs, Relation rel, double rhs) {
    constraints.push_back({std::move(coeffs), rel, rhs});
  }

  void set_free(Eigen::Index j) {
    lower(j) = -kInf;
    upper(j) = kInf;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, ToleranceFailure };

std::string to_string(LpStatus s);

/// Solution of lp_solve. On Optimal, `duals` holds one multiplier per
/// constraint row with the sign convention objective . x = sum_i duals_i * rhs_i
/// plus bound terms; for a minimization, <= rows carry duals <= 0 and >= rows
/// duals >= 0.
struct LpSolution {
  LpStatus status = LpStatus::ToleranceFailure;
  Vector x;
  double value = 0.0;
  Vector duals;
  Vector reduced_costs;  // objective - A^T duals, per original variable
  int pivots = 0;
  double primal_residual = 0.0;
  std::string message;

  bool optimal() const { return status == LpStatus::Optimal; }
};

struct LpOptions {
  double pivot_tol = 1e-10;
  double cost_tol = 1e-11;
  double feasibility_tol = 1e-9;
  double slackness_tol = 1e-8;
  int max_pivots = 0;  // 0 -> automatic
};

/// Two-phase dense tableau simplex with Bland's rule.
LpSolution lp_solve(const LinearProgram& lp, const LpOptions& opts = {});

}  // namespace rsum
