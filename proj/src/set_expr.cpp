#include "robustsum/set_expr.hpp"

#include "robustsum/lp.hpp"

#include <algorithm>

namespace rsum {

struct SetExpr::Node {
  Kind kind;
  Eigen::Index dim = 0;
  Polytope poly;
  std::vector<SetExpr> children;
  HPolyhedron cut;
  std::string description;
  Test test;
};

namespace {

bool is_constant(const SetExpr& e, SetExpr::Kind k) { return e.kind() == k; }

}  // namespace

SetExpr SetExpr::poly(Polytope p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Poly;
  n->dim = p.dim();
  n->poly = std::move(p);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::mink_sum(std::vector<SetExpr> terms) {
  if (terms.empty()) throw DomainError("mink_sum: no terms");
  auto n = std::make_shared<Node>();
  n->kind = Kind::MinkSum;
  n->dim = terms.front().dim();
  for (const auto& t : terms) {
    if (t.dim() != n->dim) throw DimensionError("mink_sum: mixed dimensions");
  }
  n->children = std::move(terms);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::union_of(std::vector<SetExpr> parts, Eigen::Index dim) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  n->dim = dim;
  for (const auto& p : parts) {
    if (p.dim() != dim) throw DimensionError("union: mixed dimensions");
  }
  n->children = std::move(parts);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::cut(SetExpr inner, HPolyhedron h) {
  for (const auto& r : h.rows) require_dim(r.normal, inner.dim(), "cut row");
  auto n = std::make_shared<Node>();
  n->kind = Kind::HalfspaceCut;
  n->dim = inner.dim();
  n->children.push_back(std::move(inner));
  n->cut = std::move(h);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::whole(Eigen::Index dim) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Whole;
  n->dim = dim;
  return SetExpr(std::move(n));
}

SetExpr SetExpr::empty(Eigen::Index dim) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Empty;
  n->dim = dim;
  return SetExpr(std::move(n));
}

SetExpr SetExpr::predicate(Eigen::Index dim, std::string description, Test test) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Predicate;
  n->dim = dim;
  n->description = std::move(description);
  n->test = std::move(test);
  return SetExpr(std::move(n));
}

SetExpr::Kind SetExpr::kind() const { return node_->kind; }
Eigen::Index SetExpr::dim() const { return node_->dim; }
const std::vector<SetExpr>& SetExpr::children() const { return node_->children; }
const Polytope& SetExpr::polytope() const { return node_->poly; }
const HPolyhedron& SetExpr::halfspaces() const { return node_->cut; }
const std::string& SetExpr::description() const { return node_->description; }

bool SetExpr::contains(const Vector& x, double tol) const {
  require_dim(x, dim(), "SetExpr::contains");
  switch (kind()) {
    case Kind::Poly: return polytope_contains(node_->poly, x, tol);
    case Kind::Whole: return true;
    case Kind::Empty: return false;
    case Kind::Predicate: return node_->test(x, tol);
    case Kind::HalfspaceCut: return node_->cut.contains(x, tol) && children().front().contains(x, tol);
    case Kind::Union:
      return std::any_of(children().begin(), children().end(),
                         [&](const SetExpr& c) { return c.contains(x, tol); });
    case Kind::MinkSum: {
      if (std::any_of(children().begin(), children().end(),
                      [](const SetExpr& c) { return is_constant(c, Kind::Empty); })) {
        return false;
      }
      if (std::any_of(children().begin(), children().end(),
                      [](const SetExpr& c) { return is_constant(c, Kind::Whole); })) {
        return true;
      }
      // Distribute over unions, then one LP per combination of polytopes.
      std::vector<std::vector<Polytope>> combos{{}};
      for (const auto& c : children()) {
        std::vector<Polytope> options;
        if (c.kind() == Kind::Poly) {
          options.push_back(c.polytope());
        } else if (c.kind() == Kind::MinkSum) {
          options.push_back(Polytope(c.generators()));
        } else if (c.kind() == Kind::Union) {
          for (const auto& part : c.children()) options.push_back(Polytope(part.generators()));
        } else {
          throw UnsupportedVariant("mink_sum membership needs polytope terms");
        }
        std::vector<std::vector<Polytope>> next;
        for (const auto& base : combos) {
          for (const auto& o : options) {
            auto b = base;
            b.push_back(o);
            next.push_back(std::move(b));
          }
        }
        combos = std::move(next);
      }
      return std::any_of(combos.begin(), combos.end(),
                         [&](const std::vector<Polytope>& ps) { return minkowski_contains(ps, x, tol); });
    }
  }
  return false;
}

ExtReal SetExpr::support(const Vector& d) const {
  require_dim(d, dim(), "SetExpr::support");
  switch (kind()) {
    case Kind::Poly: return rsum::support(node_->poly, d);
    case Kind::Whole: return d.isZero(0.0) ? 0.0 : kInf;
    case Kind::Empty: return -kInf;
    case Kind::MinkSum: {
      ExtReal s = 0.0;
      for (const auto& c : children()) s += c.support(d);
      return s;
    }
    case Kind::Union: {
      ExtReal s = -kInf;
      for (const auto& c : children()) s = std::max(s, c.support(d));
      return s;
    }
    case Kind::HalfspaceCut:
    case Kind::Predicate: break;
  }
  throw UnsupportedVariant("support of " + to_string(kind()) + " is not available");
}

std::vector<Vector> SetExpr::generators(std::size_t max_points) const {
  switch (kind()) {
    case Kind::Poly: return node_->poly.vertices;
    case Kind::Union: {
      std::vector<Vector> out;
      for (const auto& c : children()) {
        auto g = c.generators(max_points);
        out.insert(out.end(), g.begin(), g.end());
        if (out.size() > max_points) throw CapExceeded("too many generator points");
      }
      return out;
    }
    case Kind::MinkSum: {
      std::vector<Vector> acc{Vector::Zero(dim())};
      for (const auto& c : children()) {
        const auto g = c.generators(max_points);
        if (acc.size() * g.size() > max_points) throw CapExceeded("too many generator points");
        std::vector<Vector> next;
        for (const auto& a : acc) {
          for (const auto& b : g) next.push_back(a + b);
        }
        acc = std::move(next);
      }
      return acc;
    }
    case Kind::Empty: return {};
    default: break;
  }
  throw UnsupportedVariant("generators of " + to_string(kind()) + " are not available");
}

std::string to_string(SetExpr::Kind k) {
  switch (k) {
    case SetExpr::Kind::Poly: return "polytope";
    case SetExpr::Kind::MinkSum: return "minkowski_sum";
    case SetExpr::Kind::Union: return "union";
    case SetExpr::Kind::HalfspaceCut: return "halfspace_cut";
    case SetExpr::Kind::Whole: return "whole";
    case SetExpr::Kind::Empty: return "empty";
    case SetExpr::Kind::Predicate: return "predicate";
  }
  return "unknown";
}

bool minkowski_contains(const std::vector<Polytope>& polys, const Vector& y, double tol) {
  if (polys.empty()) throw DomainError("minkowski_contains: empty list");
  const Eigen::Index n = y.size();
  Eigen::Index count = 0;
  Vector fixed = Vector::Zero(n);
  std::vector<const Polytope*> free;
  for (const auto& p : polys) {
    require_dim(y, p.dim(), "minkowski_contains");
    if (p.vertices.size() == 1) {
      fixed += p.vertices.front();
    } else {
      free.push_back(&p);
      count += static_cast<Eigen::Index>(p.vertices.size());
    }
  }
  const Vector target = y - fixed;
  if (free.empty()) return target.cwiseAbs().maxCoeff() <= tol;

  LinearProgram lp(count);
  Matrix g(n, count);
  Eigen::Index col = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
  for (const auto* p : free) {
    blocks.emplace_back(col, static_cast<Eigen::Index>(p->vertices.size()));
    for (const auto& v : p->vertices) g.col(col++) = v;
  }
  for (Eigen::Index r = 0; r < n; ++r) lp.add(Vector(g.row(r).transpose()), Relation::Equal, target(r));
  for (const auto& [start, len] : blocks) {
    Vector row = Vector::Zero(count);
    row.segment(start, len).setOnes();
    lp.add(std::move(row), Relation::Equal, 1.0);
  }
  LpOptions opts;
  opts.feasibility_tol = tol;
  const auto sol = lp_solve(lp, opts);
  if (sol.status == LpStatus::ToleranceFailure) throw SolverError("minkowski LP: " + sol.message);
  return sol.optimal();
}

}  // namespace rsum
