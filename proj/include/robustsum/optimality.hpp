#pragma once

#include "robustsum/duality.hpp"
#include "robustsum/set_expr.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rsum {

struct Statement {
  bool holds = false;
  double residual = 0.0;
};

/// Verdicts of the four equivalent optimality statements for a pair
/// (x, candidate). `consistent` is true when all four agree.
struct OptimalityReport {
  bool candidate_feasible = false;
  Statement statement_i;    // x primal optimal, candidate dual optimal, zero gap
  Statement statement_ii;   // J in S_f(x), x*_j in subdiff f_j(x)
  Statement statement_iii;  // x in T_f(J) and every M_{f_j}(x*_j)
  Statement statement_iv;   // x in T_f(J) and every subdiff f*_j(x*_j)
  bool conclusion = false;
  bool consistent = false;
  std::string reason;
};

struct OptimalityOptions {
  double tol = 1e-8;
  DualityOptions duality;
};

OptimalityReport certify_pair(const FunctionFamily& fam, const Vector& xbar_star,
                              const Vector& x, const DualCandidate& cand,
                              const OptimalityOptions& opts = {});

/// Same, reusing a gap report already computed for (fam, xbar_star).
OptimalityReport certify_pair(const FunctionFamily& fam, const Vector& xbar_star,
                              const Vector& x, const DualCandidate& cand, const GapReport& gap,
                              const OptimalityOptions& opts = {});

struct PrimalSolutionSet {
  SetExpr set;
  /// All-affine families: T_f(J) as explicit halfspaces.
  std::optional<HPolyhedron> explicit_form;
  /// One-dimensional explicit form as [lower, upper] (possibly infinite).
  std::optional<std::pair<ExtReal, ExtReal>> interval;
};

/// sol(RP) = T_f(J) intersected with the M_{f_j}(x*_j). Throws
/// PreconditionError unless strong duality holds and cand is dual optimal.
PrimalSolutionSet primal_solset_from_dual(const FunctionFamily& fam, const Vector& xbar_star,
                                          const DualCandidate& cand,
                                          const OptimalityOptions& opts = {});

struct DualSolsetEntry {
  SubsetJ J;
  std::vector<Polytope> factors;  // subdiff f_j(x), j in J
  std::optional<DualCandidate> representative;
};

struct DualSolutionSet {
  std::vector<DualSolsetEntry> entries;  // J in S_f(x), shortlex order
  std::vector<DualCandidate> candidates;
  std::string witness_path;  // "iii": x verified primal optimal; "iv": only x in X
};

/// sol(RD) from a primal point x. Throws PreconditionError when the gap is
/// not zero or x cannot be certified.
DualSolutionSet dual_solset_from_primal(const FunctionFamily& fam, const Vector& xbar_star,
                                        const Vector& x, const OptimalityOptions& opts = {});

struct SubdiffOptions {
  std::size_t random_samples = 16;
  std::uint64_t seed = 0;
  DualityOptions duality;
};

struct RobustSubdifferential {
  SetExpr set;  // union over S_f(x) of Minkowski sums of member subdifferentials
  std::vector<SubsetJ> subsets;
  bool validity = false;
  std::size_t samples_checked = 0;
  std::size_t samples_failed = 0;
  std::optional<Vector> first_failure;
  std::optional<std::pair<double, double>> hull_interval;  // n = 1
};

/// Union formula for the subdifferential of the robust sum. Validity samples
/// stable strong duality over co of the formula set (the exact subdifferential
/// for finite families): generator points, cross-subset midpoints and seeded
/// random convex combinations.
RobustSubdifferential robust_subdifferential(const FunctionFamily& fam, const Vector& x,
                                             const SubdiffOptions& opts = {});

}  // namespace rsum
