#pragma once

#include "robustsum/core.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rsum {

/// Convex hull of a finite vertex list (V-representation, possibly redundant).
struct Polytope {
  std::vector<Vector> vertices;

  Polytope() = default;
  explicit Polytope(std::vector<Vector> v);

  Eigen::Index dim() const { return vertices.front().size(); }
  /// Vertices as the columns of a dim x count matrix.
  Matrix as_matrix() const;
};

/// {x : <normal_k, x> <= rhs_k for all k}
struct HPolyhedron {
  struct Row {
    Vector normal;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  bool contains(const Vector& x, double tol = 1e-9) const;
};

/// Support function of co(vertices) evaluated at x.
double support(const Polytope& a, const Vector& x);

/// LP membership y in co(vertices).
bool polytope_contains(const Polytope& a, const Vector& y, double tol = 1e-9);

/// A polyhedral function written as max_k <slopes[k], x> - costs[k]. Its
/// conjugate is the convex-hull function of the points (slopes[k], costs[k]).
struct PieceSet {
  std::vector<Vector> slopes;
  std::vector<double> costs;
};

struct AffinePiece {
  Vector a;
  double c = 0.0;
};

// <a, x> + c
struct Affine {
  Vector a;
  double c = 0.0;
};

// max_k <a_k, x> + c_k
struct MaxAffine {
  std::vector<AffinePiece> pieces;
};

// sigma_A(x) - t
struct SubAffine {
  Polytope set;
  double t = 0.0;
};

// 0.5 x^T Q x + <a, x> + c, Q symmetric positive definite
struct Quadratic {
  Matrix q;
  Vector a;
  double c = 0.0;
};

enum class FunctionKind { Affine, MaxAffine, SubAffine, Quadratic };

std::string to_string(FunctionKind k);

/// Proper closed convex function from the fixed catalog. Construct through
/// the factories, which validate the variant's invariants.
class ConvexFunction {
 public:
  using Variant = std::variant<Affine, MaxAffine, SubAffine, Quadratic>;

  static ConvexFunction affine(Vector a, double c);
  static ConvexFunction max_affine(std::vector<AffinePiece> pieces);
  static ConvexFunction subaffine(Polytope set, double t);
  static ConvexFunction quadratic(Matrix q, Vector a, double c);

  const Variant& variant() const { return v_; }
  FunctionKind kind() const { return static_cast<FunctionKind>(v_.index()); }
  Eigen::Index dim() const { return dim_; }
  bool is_polyhedral() const { return kind() != FunctionKind::Quadratic; }

  /// Max-of-affine representation; empty for quadratics.
  std::optional<PieceSet> pieces() const;

 private:
  ConvexFunction(Variant v, Eigen::Index dim) : v_(std::move(v)), dim_(dim) {}
  Variant v_;
  Eigen::Index dim_ = 0;
};

/// s * f for s > 0; stays inside the catalog.
ConvexFunction scaled(const ConvexFunction& f, double s);

ExtReal eval(const ConvexFunction& f, const Vector& x);
ExtReal conjugate_eval(const ConvexFunction& f, const Vector& y, double tol = 1e-9);

/// Exact subdifferential as a polytope. Active vertices/pieces are those
/// within `tol_active * max(1, |max|)` of the maximum.
Polytope subdiff(const ConvexFunction& f, const Vector& x, double tol_active = 1e-9);

/// One element of the subdifferential (an active vertex or the gradient).
Vector some_subgradient(const ConvexFunction& f, const Vector& x);

/// Fenchel-Young equality test: f(x) + f*(y) - <y, x> <= tol.
bool subdiff_contains(const ConvexFunction& f, const Vector& x, const Vector& y,
                      double tol = 1e-9);

/// x in the subdifferential of f* at y, checked through the geometry of
/// each variant (normal cones, gradient inverse) rather than Fenchel-Young.
bool conjugate_subdiff_contains(const ConvexFunction& f, const Vector& y, const Vector& x,
                                double tol = 1e-9);

/// Polar set as one halfspace <v, x> <= 1 per vertex.
HPolyhedron polar(const Polytope& a);

}  // namespace rsum
