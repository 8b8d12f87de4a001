#include "robustsum/convex_function.hpp"

#include "robustsum/lp.hpp"

#include <algorithm>
#include <cmath>

namespace rsum {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

// Indices whose value is within the relative activity tolerance of the max.
std::vector<std::size_t> active_indices(const std::vector<double>& values, double tol_active) {
  const double best = *std::max_element(values.begin(), values.end());
  const double cut = best - tol_active * std::max(1.0, std::abs(best));
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] >= cut) out.push_back(k);
  }
  return out;
}

// min sum lambda_k cost_k s.t. sum lambda_k g_k = y, lambda in the unit simplex
ExtReal hull_function(const std::vector<Vector>& points, const std::vector<double>& costs,
                      const Vector& y, double tol) {
  const auto count = static_cast<Eigen::Index>(points.size());
  const Eigen::Index n = y.size();
  LinearProgram lp(count);
  for (Eigen::Index k = 0; k < count; ++k) lp.objective(k) = costs[static_cast<std::size_t>(k)];
  for (Eigen::Index r = 0; r < n; ++r) {
    Vector row(count);
    for (Eigen::Index k = 0; k < count; ++k) row(k) = points[static_cast<std::size_t>(k)](r);
    lp.add(std::move(row), Relation::Equal, y(r));
  }
  lp.add(Vector::Ones(count), Relation::Equal, 1.0);
  LpOptions opts;
  opts.feasibility_tol = tol;
  const auto sol = lp_solve(lp, opts);
  if (sol.status == LpStatus::Infeasible) return kInf;
  if (!sol.optimal()) throw SolverError("hull LP: " + to_string(sol.status) + " " + sol.message);
  return sol.value;
}

}  // namespace

Polytope::Polytope(std::vector<Vector> v) : vertices(std::move(v)) {
  if (vertices.empty()) throw DomainError("polytope needs at least one vertex");
  const auto n = vertices.front().size();
  for (const auto& p : vertices) {
    require_dim(p, n, "polytope vertex");
    require_finite(p, "polytope vertex");
  }
}

Matrix Polytope::as_matrix() const {
  Matrix m(dim(), static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t k = 0; k < vertices.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vertices[k];
  return m;
}

bool HPolyhedron::contains(const Vector& x, double tol) const {
  return std::all_of(rows.begin(), rows.end(),
                     [&](const Row& r) { return r.normal.dot(x) <= r.rhs + tol; });
}

double support(const Polytope& a, const Vector& x) {
  require_dim(x, a.dim(), "support");
  double best = -kInf;
  for (const auto& v : a.vertices) best = std::max(best, v.dot(x));
  return best;
}

bool polytope_contains(const Polytope& a, const Vector& y, double tol) {
  require_dim(y, a.dim(), "polytope_contains");
  if (a.vertices.size() == 1) return (a.vertices.front() - y).cwiseAbs().maxCoeff() <= tol;
  std::vector<double> zeros(a.vertices.size(), 0.0);
  return std::isfinite(hull_function(a.vertices, zeros, y, tol));
}

std::string to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::Affine: return "affine";
    case FunctionKind::MaxAffine: return "max_affine";
    case FunctionKind::SubAffine: return "subaffine";
    case FunctionKind::Quadratic: return "quadratic";
  }
  return "unknown";
}

ConvexFunction ConvexFunction::affine(Vector a, double c) {
  require_finite(a, "affine slope");
  if (!std::isfinite(c)) throw DomainError("affine constant must be finite");
  const auto n = a.size();
  return ConvexFunction(Affine{std::move(a), c}, n);
}

ConvexFunction ConvexFunction::max_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw DomainError("max_affine needs at least one piece");
  const auto n = pieces.front().a.size();
  for (const auto& p : pieces) {
    require_dim(p.a, n, "max_affine piece");
    require_finite(p.a, "max_affine piece");
    if (!std::isfinite(p.c)) throw DomainError("max_affine constant must be finite");
  }
  return ConvexFunction(MaxAffine{std::move(pieces)}, n);
}

ConvexFunction ConvexFunction::subaffine(Polytope set, double t) {
  if (set.vertices.empty()) throw DomainError("subaffine set must be nonempty");
  if (!std::isfinite(t)) throw DomainError("subaffine offset must be finite");
  const auto n = set.dim();
  return ConvexFunction(SubAffine{std::move(set), t}, n);
}

ConvexFunction ConvexFunction::quadratic(Matrix q, Vector a, double c) {
  const auto n = a.size();
  if (q.rows() != n || q.cols() != n) throw DimensionError("quadratic: Q must be n x n");
  if (!q.allFinite()) throw DomainError("quadratic: non-finite Q");
  require_finite(a, "quadratic linear term");
  if (!std::isfinite(c)) throw DomainError("quadratic constant must be finite");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("quadratic: Q is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(q, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("quadratic: Q is not positive definite");
  return ConvexFunction(Quadratic{std::move(q), std::move(a), c}, n);
}

std::optional<PieceSet> ConvexFunction::pieces() const {
  return std::visit(
      Overloaded{
          [](const Affine& f) -> std::optional<PieceSet> { return PieceSet{{f.a}, {-f.c}}; },
          [](const MaxAffine& f) -> std::optional<PieceSet> {
            PieceSet ps;
            for (const auto& p : f.pieces) {
              ps.slopes.push_back(p.a);
              ps.costs.push_back(-p.c);
            }
            return ps;
          },
          [](const SubAffine& f) -> std::optional<PieceSet> {
            PieceSet ps;
            ps.slopes = f.set.vertices;
            ps.costs.assign(f.set.vertices.size(), f.t);
            return ps;
          },
          [](const Quadratic&) -> std::optional<PieceSet> { return std::nullopt; }},
      v_);
}

ConvexFunction scaled(const ConvexFunction& f, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("scaled: factor must be positive");
  return std::visit(
      Overloaded{[&](const Affine& g) { return ConvexFunction::affine(s * g.a, s * g.c); },
                 [&](const MaxAffine& g) {
                   auto pieces = g.pieces;
                   for (auto& p : pieces) {
                     p.a *= s;
                     p.c *= s;
                   }
                   return ConvexFunction::max_affine(std::move(pieces));
                 },
                 [&](const SubAffine& g) {
                   auto verts = g.set.vertices;
                   for (auto& v : verts) v *= s;
                   return ConvexFunction::subaffine(Polytope(std::move(verts)), s * g.t);
                 },
                 [&](const Quadratic& g) {
                   return ConvexFunction::quadratic(s * g.q, s * g.a, s * g.c);
                 }},
      f.variant());
}

ExtReal eval(const ConvexFunction& f, const Vector& x) {
  require_dim(x, f.dim(), "eval");
  return std::visit(
      Overloaded{[&](const Affine& g) { return g.a.dot(x) + g.c; },
                 [&](const MaxAffine& g) {
                   double best = -kInf;
                   for (const auto& p : g.pieces) best = std::max(best, p.a.dot(x) + p.c);
                   return best;
                 },
                 [&](const SubAffine& g) { return support(g.set, x) - g.t; },
                 [&](const Quadratic& g) { return 0.5 * x.dot(g.q * x) + g.a.dot(x) + g.c; }},
      f.variant());
}

ExtReal conjugate_eval(const ConvexFunction& f, const Vector& y, double tol) {
  require_dim(y, f.dim(), "conjugate_eval");
  return std::visit(
      Overloaded{[&](const Affine& g) -> ExtReal {
                   return (g.a - y).cwiseAbs().maxCoeff() <= tol ? -g.c : kInf;
                 },
                 [&](const MaxAffine& g) -> ExtReal {
                   std::vector<Vector> pts;
                   std::vector<double> costs;
                   for (const auto& p : g.pieces) {
                     pts.push_back(p.a);
                     costs.push_back(-p.c);
                   }
                   return hull_function(pts, costs, y, tol);
                 },
                 [&](const SubAffine& g) -> ExtReal {
                   return polytope_contains(g.set, y, tol) ? g.t : kInf;
                 },
                 [&](const Quadratic& g) -> ExtReal {
                   const Vector d = y - g.a;
                   return 0.5 * d.dot(g.q.llt().solve(d)) - g.c;
                 }},
      f.variant());
}

Polytope subdiff(const ConvexFunction& f, const Vector& x, double tol_active) {
  require_dim(x, f.dim(), "subdiff");
  return std::visit(
      Overloaded{[&](const Affine& g) { return Polytope({g.a}); },
                 [&](const MaxAffine& g) {
                   std::vector<double> vals;
                   for (const auto& p : g.pieces) vals.push_back(p.a.dot(x) + p.c);
                   std::vector<Vector> out;
                   for (auto k : active_indices(vals, tol_active)) out.push_back(g.pieces[k].a);
                   return Polytope(std::move(out));
                 },
                 [&](const SubAffine& g) {
                   std::vector<double> vals;
                   for (const auto& v : g.set.vertices) vals.push_back(v.dot(x));
                   std::vector<Vector> out;
                   for (auto k : active_indices(vals, tol_active)) out.push_back(g.set.vertices[k]);
                   return Polytope(std::move(out));
                 },
                 [&](const Quadratic& g) { return Polytope({Vector(g.q * x + g.a)}); }},
      f.variant());
}

Vector some_subgradient(const ConvexFunction& f, const Vector& x) {
  return subdiff(f, x, 0.0).vertices.front();
}

bool subdiff_contains(const ConvexFunction& f, const Vector& x, const Vector& y, double tol) {
  const ExtReal fx = eval(f, x);
  if (!std::isfinite(fx)) return false;
  const ExtReal fy = conjugate_eval(f, y, tol);
  if (!std::isfinite(fy)) return false;
  return fx + fy - y.dot(x) <= tol * std::max(1.0, std::abs(fx) + std::abs(fy));
}

bool conjugate_subdiff_contains(const ConvexFunction& f, const Vector& y, const Vector& x,
                                double tol) {
  require_dim(x, f.dim(), "conjugate_subdiff_contains");
  require_dim(y, f.dim(), "conjugate_subdiff_contains");
  return std::visit(
      Overloaded{[&](const Affine& g) { return (g.a - y).cwiseAbs().maxCoeff() <= tol; },
                 [&](const MaxAffine& g) {
                   // y must be a convex combination of the slopes active at x
                   std::vector<double> vals;
                   for (const auto& p : g.pieces) vals.push_back(p.a.dot(x) + p.c);
                   std::vector<Vector> act;
                   for (auto k : active_indices(vals, tol)) act.push_back(g.pieces[k].a);
                   return polytope_contains(Polytope(std::move(act)), y, tol);
                 },
                 [&](const SubAffine& g) {
                   // normal cone of A at y
                   if (!polytope_contains(g.set, y, tol)) return false;
                   const double s = support(g.set, x);
                   return y.dot(x) >= s - tol * std::max(1.0, std::abs(s));
                 },
                 [&](const Quadratic& g) {
                   const Vector r = g.q * x + g.a - y;
                   return r.cwiseAbs().maxCoeff() <= tol * std::max(1.0, y.cwiseAbs().maxCoeff());
                 }},
      f.variant());
}

HPolyhedron polar(const Polytope& a) {
  HPolyhedron h;
  for (const auto& v : a.vertices) h.rows.push_back({v, 1.0});
  return h;
}

}  // namespace rsum
