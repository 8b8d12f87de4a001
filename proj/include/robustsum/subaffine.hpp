#pragma once

#include "robustsum/duality.hpp"
#include "robustsum/set_expr.hpp"

#include <vector>

namespace rsum {

struct SubaffineEntry {
  Polytope set;
  double t = 0.0;
};

/// Family f_i = sigma_{A_i} - t_i with polytopes A_i.
class SubaffineFamily {
 public:
  explicit SubaffineFamily(std::vector<SubaffineEntry> entries);

  std::size_t size() const { return entries_.size(); }
  Eigen::Index dim() const { return entries_.front().set.dim(); }
  const std::vector<SubaffineEntry>& entries() const { return entries_; }
  const SubaffineEntry& operator[](std::size_t i) const { return entries_[i]; }

  FunctionFamily to_family() const;

 private:
  std::vector<SubaffineEntry> entries_;
};

/// All J with xbar* in sum_{j in J} A_j, in shortlex order.
std::vector<SubsetJ> A_inverse(const SubaffineFamily& sfam, const Vector& xbar_star,
                               std::size_t cap = 20, double tol = 1e-9);

/// min { sum_{j in J} t_j : J in A_inverse(x*) }, +inf when empty. This is
/// the selection formula; it equals f*(x*) under the closedness condition and
/// bounds it from above otherwise.
ExtReal conjugate_via_selection(const SubaffineFamily& sfam, const Vector& x_star,
                                std::size_t cap = 20, double tol = 1e-9);

/// Face of A maximizing <., x>.
Polytope support_argmax(const Polytope& a, const Vector& x, double tol_active = 1e-9);

struct PropConditions {
  bool zero_in_all = false;
  bool sup_t_nonpositive = false;
  bool ri_condition = false;
  bool union_collapsed = false;  // ri tested on sum_{i in I} A_i
  double sup_t = 0.0;
  bool all_pass() const { return zero_in_all && sup_t_nonpositive && ri_condition; }
};

/// Hypotheses of the finite-dimensional min = sup theorem for subaffine
/// robust sums at xbar*.
PropConditions check_prop_conditions(const SubaffineFamily& sfam, const Vector& xbar_star,
                                     std::size_t cap = 20, double tol = 1e-9);

/// Union over S_f(x) of sum_{j in J} argmax_{A_j} <., x>.
SetExpr subaffine_subdifferential(const SubaffineFamily& sfam, const Vector& x,
                                  double tol = 1e-9);

}  // namespace rsum
