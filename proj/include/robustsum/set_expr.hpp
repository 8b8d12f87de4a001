#pragma once

#include "robustsum/convex_function.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace rsum {

/// Set expression over R^n with membership decided by LP composition.
/// Cheap to copy: nodes are shared and immutable.
class SetExpr {
 public:
  enum class Kind { Poly, MinkSum, Union, HalfspaceCut, Whole, Empty, Predicate };
  using Test = std::function<bool(const Vector&, double)>;

  static SetExpr poly(Polytope p);
  static SetExpr mink_sum(std::vector<SetExpr> terms);
  static SetExpr union_of(std::vector<SetExpr> parts, Eigen::Index dim);
  static SetExpr cut(SetExpr inner, HPolyhedron h);
  static SetExpr whole(Eigen::Index dim);
  static SetExpr empty(Eigen::Index dim);
  /// Opaque membership test, e.g. a solution set with no finite description.
  static SetExpr predicate(Eigen::Index dim, std::string description, Test test);

  Kind kind() const;
  Eigen::Index dim() const;
  const std::vector<SetExpr>& children() const;
  const Polytope& polytope() const;
  const HPolyhedron& halfspaces() const;
  const std::string& description() const;

  bool contains(const Vector& x, double tol = 1e-9) const;
  /// sup over the set of <d, .>; +inf for Whole, -inf for Empty.
  /// Throws UnsupportedVariant for cuts and predicates.
  ExtReal support(const Vector& d) const;
  /// Finite generator points whose hull is co(set); Poly/MinkSum/Union only.
  std::vector<Vector> generators(std::size_t max_points = 200000) const;

 private:
  struct Node;
  explicit SetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(SetExpr::Kind k);

/// LP feasibility: y = sum_j y_j with y_j in co(V_j).
bool minkowski_contains(const std::vector<Polytope>& polys, const Vector& y, double tol = 1e-9);

}  // namespace rsum
