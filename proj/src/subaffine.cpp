#include "robustsum/subaffine.hpp"

#include <algorithm>

namespace rsum {

SubaffineFamily::SubaffineFamily(std::vector<SubaffineEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("subaffine family must be nonempty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].set.vertices.empty()) throw DomainError("subaffine entry has no vertices");
    if (entries_[i].set.dim() != dim()) {
      throw DimensionError("subaffine entry " + std::to_string(i + 1) + " has wrong dimension");
    }
  }
}

FunctionFamily SubaffineFamily::to_family() const {
  std::vector<ConvexFunction> fs;
  for (const auto& e : entries_) fs.push_back(ConvexFunction::subaffine(e.set, e.t));
  return FunctionFamily::from_functions(std::move(fs));
}

std::vector<SubsetJ> A_inverse(const SubaffineFamily& sfam, const Vector& xbar_star,
                               std::size_t cap, double tol) {
  require_dim(xbar_star, sfam.dim(), "A_inverse");
  if (sfam.size() > cap) throw CapExceeded("A_inverse: family exceeds enumeration cap");
  std::vector<SubsetJ> out;
  for (const auto& j : all_subsets(sfam.size())) {
    std::vector<Polytope> polys;
    for (auto i : j) polys.push_back(sfam[i].set);
    if (minkowski_contains(polys, xbar_star, tol)) out.push_back(j);
  }
  return out;
}

ExtReal conjugate_via_selection(const SubaffineFamily& sfam, const Vector& x_star,
                                std::size_t cap, double tol) {
  ExtReal best = kInf;
  for (const auto& j : A_inverse(sfam, x_star, cap, tol)) {
    double s = 0.0;
    for (auto i : j) s += sfam[i].t;
    best = std::min(best, s);
  }
  return best;
}

Polytope support_argmax(const Polytope& a, const Vector& x, double tol_active) {
  return subdiff(ConvexFunction::subaffine(a, 0.0), x, tol_active);
}

PropConditions check_prop_conditions(const SubaffineFamily& sfam, const Vector& xbar_star,
                                     std::size_t cap, double tol) {
  require_dim(xbar_star, sfam.dim(), "check_prop_conditions");
  PropConditions r;
  const Vector zero = Vector::Zero(sfam.dim());
  r.zero_in_all = std::all_of(sfam.entries().begin(), sfam.entries().end(),
                              [&](const SubaffineEntry& e) { return polytope_contains(e.set, zero, tol); });
  r.sup_t = -kInf;
  for (const auto& e : sfam.entries()) r.sup_t = std::max(r.sup_t, e.t);
  r.sup_t_nonpositive = r.sup_t <= 0.0;

  const auto fam = sfam.to_family();
  std::vector<Vector> points;
  if (r.zero_in_all) {
    // With 0 in every A_i the union over J is the full sum over I.
    r.union_collapsed = true;
    SubsetJ all(sfam.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    points = subset_slope_sums(fam, all);
  } else {
    if (sfam.size() > cap) throw CapExceeded("check_prop_conditions: family exceeds cap");
    for (const auto& j : all_subsets(sfam.size())) {
      auto s = subset_slope_sums(fam, j);
      points.insert(points.end(), s.begin(), s.end());
    }
  }
  r.ri_condition = ri_membership(points, xbar_star, tol);
  return r;
}

SetExpr subaffine_subdifferential(const SubaffineFamily& sfam, const Vector& x, double tol) {
  const auto fam = sfam.to_family();
  const ExtReal fx = robust_sum_eval(fam, x);
  const auto canon = canonical_S_f(fam, x, tol * std::max(1.0, std::abs(fx)));
  std::vector<SetExpr> parts;
  for (const auto& j : canon.sets) {
    std::vector<SetExpr> terms;
    for (auto i : j) terms.push_back(SetExpr::poly(support_argmax(sfam[i].set, x, tol)));
    parts.push_back(SetExpr::mink_sum(std::move(terms)));
  }
  return SetExpr::union_of(std::move(parts), sfam.dim());
}

}  // namespace rsum
