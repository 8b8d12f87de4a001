#pragma once

#include "robustsum/duality.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rsum {

/// The system { f_i(x) <= 0, i in I }.
struct InequalitySystem {
  FunctionFamily constraints;
};

/// Finitely supported point of the unit simplex over family positions.
class SimplexWeights {
 public:
  SimplexWeights() = default;
  /// Validates nonnegativity and unit sum; zero entries are dropped.
  explicit SimplexWeights(std::map<std::size_t, double> weights, double tol = 1e-9);

  const std::map<std::size_t, double>& weights() const { return weights_; }
  double operator()(std::size_t i) const;
  std::vector<std::size_t> support() const;

 private:
  std::map<std::size_t, double> weights_;
};

enum class ApproxNorm { Linf, L1 };
std::string to_string(ApproxNorm n);

struct InconsistencyCheck {
  bool inconsistent = false;
  bool decided = true;  // false: |inf f_0| within solver tolerance
  bool exact = true;
  ExtReal inf_f0 = kInf;
  std::optional<Vector> witness;
};

struct Diagnosis {
  bool condition_holds = false;
  bool dual_attained = false;
  std::string statement;
};

struct ApproxReport {
  ApproxNorm norm = ApproxNorm::Linf;
  ExtReal value = kInf;
  std::optional<Vector> solution;
  bool exact = true;
  InconsistencyCheck consistency;
  std::vector<Vector> lineality_directions;
  bool face_bounded_mod_lineality = true;
  ExtReal dual_value = -kInf;
  bool dual_exact = true;
  std::optional<SimplexWeights> dual_weights;    // linf
  std::optional<DualCandidate> dual_candidate;  // l1
  bool strong_duality = false;
  std::optional<Diagnosis> diagnosis;
};

struct ApproxOptions {
  double tol = 1e-8;
  DualityOptions duality;
  int ascent_iterations = 300;  // general linf dual
};

InconsistencyCheck check_inconsistent(const InequalitySystem& sys, const ApproxOptions& opts = {});

/// Minimizes f_0 = max_i f_i.
ApproxReport linf_solve(const InequalitySystem& sys, const ApproxOptions& opts = {});

struct LinfDual {
  ExtReal value = -kInf;
  SimplexWeights weights;
  bool exact = true;  // false: lower bound from the support heuristic
};

/// max over the unit simplex of inf_x sum_i lambda_i f_i(x). Polyhedral
/// systems are solved exactly by LP; systems with quadratics search supports
/// of size at most n + 1 and report a lower bound.
LinfDual linf_dual_solve(const InequalitySystem& sys, const ApproxOptions& opts = {});

/// Minimizes sum_i f_i^+.
ApproxReport l1_solve(const InequalitySystem& sys, const ApproxOptions& opts = {});

/// Subset-splitting dual at xbar* = 0.
DualSolution l1_dual_solve(const InequalitySystem& sys, const ApproxOptions& opts = {});

/// Closedness condition behind strong duality for the chosen norm.
/// Polyhedral systems only; throws UnsupportedVariant otherwise.
Diagnosis strong_duality_report(const InequalitySystem& sys, ApproxNorm norm,
                                const ApproxOptions& opts = {});

/// L(x, lambda) = sum over supp lambda of lambda_i f_i(x).
double lagrangian_eval(const InequalitySystem& sys, const Vector& x, const SimplexWeights& lambda);

}  // namespace rsum
