#pragma once

#include "robustsum/convex_function.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rsum {

struct Member {
  std::string label;
  ConvexFunction f;
};

/// Finite indexed family (f_i)_{i in I} on R^n. Positions are 0-based;
/// labels are what users and reports see.
class FunctionFamily {
 public:
  FunctionFamily() = default;
  explicit FunctionFamily(std::vector<Member> members);
  /// Labels "1", "2", ... in order.
  static FunctionFamily from_functions(std::vector<ConvexFunction> fs);

  std::size_t size() const { return members_.size(); }
  Eigen::Index dim() const { return dim_; }
  const Member& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Member>& members() const { return members_; }
  const ConvexFunction& f(std::size_t i) const { return members_[i].f; }

  bool all_polyhedral() const;
  bool all_affine() const;
  /// Position of a label, throws DomainError if missing.
  std::size_t position(const std::string& label) const;

 private:
  std::vector<Member> members_;
  Eigen::Index dim_ = 0;
};

/// Closed-form countable family i -> f_i (i = 1, 2, ...), explored by
/// monotone truncation.
struct FamilyGenerator {
  Eigen::Index dim = 0;
  std::function<ConvexFunction(std::size_t)> make;

  FunctionFamily truncate(std::size_t n) const;
};

/// Member values f_i(x) in family order.
std::vector<double> member_values(const FunctionFamily& fam, const Vector& x);

ExtReal sup_function_eval(const FunctionFamily& fam, const Vector& x);

/// Robust sum: f_0(x) when f_0(x) <= 0, otherwise the sum of positive parts.
ExtReal robust_sum_eval(const FunctionFamily& fam, const Vector& x);

/// J realizes the supremum defining the robust sum at x.
bool in_S_f(const FunctionFamily& fam, const Vector& x, const SubsetJ& j, double tol = 1e-9);

struct CanonicalSubsets {
  std::vector<SubsetJ> sets;  // shortlex order
  /// When f_0(x) > 0: the strictly-positive index set alone (the minimal
  /// realizing subset). Empty otherwise.
  SubsetJ minimal;
  /// False when the zero-valued index set exceeded the enumeration cap and
  /// only part of the closure was listed.
  bool complete = true;
};

/// Case-formula enumeration of S_f(x), including supersets of the positive
/// set augmented with zero-valued indices.
CanonicalSubsets canonical_S_f(const FunctionFamily& fam, const Vector& x, double tol = 1e-9,
                               std::size_t zero_cap = 12);

/// Robust sum of the first n generated members; nondecreasing in n.
double truncated_lower_bound(const FamilyGenerator& gen, const Vector& x, std::size_t n);

/// One subgradient of the robust sum at x (sum over a realizing subset).
Vector robust_sum_subgradient(const FunctionFamily& fam, const Vector& x);

}  // namespace rsum
