#pragma once

#include "robustsum/robust_sum.hpp"
#include "robustsum/subgradient.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rsum {

/// Element (J, (x*_j)_{j in J}) of the dual feasible set. `slopes[k]` belongs
/// to member `J[k]`.
struct DualCandidate {
  SubsetJ J;
  std::vector<Vector> slopes;
};

struct CandidateValue {
  bool feasible = false;
  ExtReal objective = -kInf;  // -sum f*_j(x*_j)
  double residual = 0.0;      // max-norm of sum x*_j - xbar*
};

struct DualityOptions {
  std::size_t cap = 20;      // subset enumeration limit on |I|
  double feasibility = 1e-9;
  double value = 1e-8;
  int frank_wolfe_iterations = 20000;
  SubgradientOptions subgradient;
};

CandidateValue evaluate_dual_candidate(const FunctionFamily& fam, const Vector& xbar_star,
                                       const DualCandidate& cand, double tol = 1e-9);

/// min { sum_{j in J} f*_j(y_j) : sum y_j = target }. Exact for polyhedral
/// members (LP) and for all-quadratic J (closed form); mixed J is solved by
/// Frank-Wolfe over the polyhedral weights and `exact` reports whether the
/// duality gap certificate closed.
struct SplitResult {
  ExtReal value = kInf;
  std::vector<Vector> slopes;
  bool exact = true;
};

SplitResult min_split(const FunctionFamily& fam, const SubsetJ& j, const Vector& target,
                      const DualityOptions& opts = {});

struct DualSolution {
  ExtReal value = -kInf;
  std::optional<DualCandidate> best;
  bool exact = true;
  std::size_t feasible_subsets = 0;
};

DualSolution solve_dual(const FunctionFamily& fam, const Vector& xbar_star,
                        const DualityOptions& opts = {});

struct PhiValue {
  ExtReal value = kInf;
  bool exact = true;  // false: certified upper bound only
};

/// phi(x*) = inf over splittings of x* + xbar*.
PhiValue phi_eval(const FunctionFamily& fam, const Vector& xbar_star, const Vector& x_star,
                  const DualityOptions& opts = {});

struct PrimalSolution {
  ExtReal value = kInf;
  std::optional<Vector> x;
  bool attained = false;
  bool exact = true;      // LP path
  bool converged = true;  // subgradient path
  std::string method;
};

/// inf { f(x) - <xbar*, x> }. Polyhedral families split into two LPs:
/// min over {f_0 <= 0} of f_0 - <xbar*,.>, and the unconstrained minimum of
/// sum f_i^+ - <xbar*,.>; the smaller one is the robust-sum minimum since
/// f_0 <= f <= sum f_i^+ with equality on the respective regions.
PrimalSolution solve_primal(const FunctionFamily& fam, const Vector& xbar_star,
                            const DualityOptions& opts = {});

struct GapReport {
  ExtReal primal_value = kInf;
  ExtReal dual_value = -kInf;
  ExtReal gap = kInf;
  bool primal_attained = false;
  bool dual_attained = false;
  bool weak_duality_ok = true;
  bool zero_gap = false;
  bool strong_duality = false;  // zero gap and the dual supremum is a max
  bool exact = true;
  std::optional<Vector> primal_witness;
  std::optional<DualCandidate> dual_witness;
};

GapReport gap_report(const FunctionFamily& fam, const Vector& xbar_star,
                     const DualityOptions& opts = {});

/// Sections of the qualifying set and of its closed convex hull along the
/// vertical line through xbar*.
struct LineSection {
  ExtReal section_inf = kInf;
  ExtReal clco_section_inf = kInf;
  bool closed_convex_regarding = false;
};

/// Polyhedral families only; throws UnsupportedVariant for quadratics.
LineSection a_line_section(const FunctionFamily& fam, const Vector& xbar_star,
                           const DualityOptions& opts = {});

/// x in ri co(points): some strictly positive convex combination hits x.
bool ri_membership(const std::vector<Vector>& points, const Vector& x, double tol = 1e-9);

/// xbar* in ri co( union_J sum_{j in J} dom f*_j ), the finite-dimensional
/// existence criterion for primal solutions.
bool ri_condition(const FunctionFamily& fam, const Vector& xbar_star,
                  const DualityOptions& opts = {});

/// Generator points of sum_{j in J} dom f*_j (cross sums of member slopes).
std::vector<Vector> subset_slope_sums(const FunctionFamily& fam, const SubsetJ& j,
                                      std::size_t max_points = 200000);

}  // namespace rsum
