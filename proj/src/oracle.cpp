#include "robustsum/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace rsum::oracle {

namespace {

void require_small(const FunctionFamily& fam) {
  if (fam.size() > 12) throw CapExceeded("oracle: brute force limited to 12 members");
}

double cell(const GridSpec& g, Eigen::Index k) {
  return (g.upper(k) - g.lower(k)) / (g.resolution[static_cast<std::size_t>(k)] - 1);
}

template <class Visit>
void for_each_grid_point(const GridSpec& g, Visit visit) {
  const Eigen::Index n = g.dim();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vector x(n);
  while (true) {
    for (Eigen::Index k = 0; k < n; ++k) x(k) = g.lower(k) + idx[static_cast<std::size_t>(k)] * cell(g, k);
    visit(x);
    Eigen::Index k = 0;
    for (; k < n; ++k) {
      auto& i = idx[static_cast<std::size_t>(k)];
      if (++i < g.resolution[static_cast<std::size_t>(k)]) break;
      i = 0;
    }
    if (k == n) return;
  }
}

}  // namespace

double member_value(const ConvexFunction& f, const Vector& x) {
  if (const auto* a = std::get_if<Affine>(&f.variant())) {
    double s = a->c;
    for (Eigen::Index k = 0; k < x.size(); ++k) s += a->a(k) * x(k);
    return s;
  }
  if (const auto* m = std::get_if<MaxAffine>(&f.variant())) {
    double best = -kInf;
    for (const auto& p : m->pieces) {
      double s = p.c;
      for (Eigen::Index k = 0; k < x.size(); ++k) s += p.a(k) * x(k);
      best = std::max(best, s);
    }
    return best;
  }
  if (const auto* s = std::get_if<SubAffine>(&f.variant())) {
    double best = -kInf;
    for (const auto& v : s->set.vertices) {
      double d = 0.0;
      for (Eigen::Index k = 0; k < x.size(); ++k) d += v(k) * x(k);
      best = std::max(best, d);
    }
    return best - s->t;
  }
  const auto& q = std::get<Quadratic>(f.variant());
  double s = q.c;
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    s += q.a(r) * x(r);
    for (Eigen::Index c = 0; c < x.size(); ++c) s += 0.5 * x(r) * q.q(r, c) * x(c);
  }
  return s;
}

double brute_robust_sum(const FunctionFamily& fam, const Vector& x) {
  require_small(fam);
  std::vector<double> v;
  for (const auto& m : fam.members()) v.push_back(member_value(m.f, x));
  double best = -kInf;
  for (unsigned mask = 1; mask < (1u << v.size()); ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (mask & (1u << i)) s += v[i];
    }
    best = std::max(best, s);
  }
  return best;
}

std::vector<SubsetJ> brute_S_f(const FunctionFamily& fam, const Vector& x, double tol) {
  require_small(fam);
  const double f = brute_robust_sum(fam, x);
  std::vector<double> v;
  for (const auto& m : fam.members()) v.push_back(member_value(m.f, x));
  std::vector<SubsetJ> out;
  for (unsigned mask = 1; mask < (1u << v.size()); ++mask) {
    double s = 0.0;
    SubsetJ j;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (mask & (1u << i)) {
        s += v[i];
        j.push_back(i);
      }
    }
    if (std::abs(s - f) <= tol) out.push_back(std::move(j));
  }
  std::sort(out.begin(), out.end(), [](const SubsetJ& a, const SubsetJ& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

GridSpec::GridSpec(Vector lo, Vector hi, std::vector<int> res)
    : lower(std::move(lo)), upper(std::move(hi)), resolution(std::move(res)) {
  if (lower.size() != upper.size() || static_cast<Eigen::Index>(resolution.size()) != lower.size()) {
    throw DimensionError("grid: bounds and resolution disagree in dimension");
  }
  if (lower.size() == 0 || lower.size() > 3) throw DomainError("grid: dimension must be 1..3");
  for (Eigen::Index k = 0; k < lower.size(); ++k) {
    if (!(lower(k) < upper(k))) throw DomainError("grid: lower must be below upper");
    if (resolution[static_cast<std::size_t>(k)] < 2) throw DomainError("grid: resolution must be >= 2");
  }
}

GridSpec::GridSpec(Vector lo, Vector hi, int res)
    : GridSpec(lo, hi, std::vector<int>(static_cast<std::size_t>(lo.size()), res)) {}

GridMin brute_minimize(const std::function<double(const Vector&)>& objective, const GridSpec& grid) {
  GridMin best{Vector(), kInf};
  for_each_grid_point(grid, [&](const Vector& x) {
    const double v = objective(x);
    if (v < best.value) best = {x, v};
  });
  // Ternary refinement, one coordinate at a time.
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (Eigen::Index k = 0; k < grid.dim(); ++k) {
      double lo = std::max(grid.lower(k), best.x(k) - cell(grid, k));
      double hi = std::min(grid.upper(k), best.x(k) + cell(grid, k));
      Vector y = best.x;
      for (int it = 0; it < 100; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        y(k) = m1;
        const double v1 = objective(y);
        y(k) = m2;
        const double v2 = objective(y);
        if (v1 <= v2) hi = m2;
        else lo = m1;
      }
      y(k) = 0.5 * (lo + hi);
      const double v = objective(y);
      if (v <= best.value) best = {y, v};
    }
  }
  return best;
}

std::vector<Vector> brute_argmin_set(const std::function<double(const Vector&)>& objective,
                                     const GridSpec& grid, double tol) {
  std::vector<std::pair<Vector, double>> all;
  double best = kInf;
  for_each_grid_point(grid, [&](const Vector& x) {
    const double v = objective(x);
    best = std::min(best, v);
    all.emplace_back(x, v);
  });
  std::vector<Vector> out;
  for (auto& [x, v] : all) {
    if (v <= best + tol) out.push_back(std::move(x));
  }
  return out;
}

Interval1d brute_subdiff_1d(const std::function<double(double)>& f, double x) {
  const double f0 = f(x);
  auto right = [&](double h) { return (f(x + h) - f0) / h; };
  auto left = [&](double h) { return (f0 - f(x - h)) / h; };
  // Quotients carry an O(h) bias; extrapolate with ratio 10.
  auto extrapolate = [](double coarse, double fine) { return (10.0 * fine - coarse) / 9.0; };
  Interval1d out;
  out.upper = extrapolate(right(1e-4), right(1e-5));
  out.lower = extrapolate(left(1e-4), left(1e-5));
  const double tol = 1e-5;
  out.consistent = std::abs(out.upper - right(1e-6)) <= tol * std::max(1.0, std::abs(out.upper)) &&
                   std::abs(out.lower - left(1e-6)) <= tol * std::max(1.0, std::abs(out.lower)) &&
                   out.lower <= out.upper + tol;
  return out;
}

}  // namespace rsum::oracle
