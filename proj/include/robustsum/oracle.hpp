#pragma once

// Brute-force reference computations. Nothing here calls into the solver
// paths it is meant to check.

#include "robustsum/robust_sum.hpp"

#include <functional>
#include <vector>

namespace rsum::oracle {

/// Member value straight from the variant parameters.
double member_value(const ConvexFunction& f, const Vector& x);

/// max over all nonempty J of sum_{j in J} f_j(x); |I| <= 12.
double brute_robust_sum(const FunctionFamily& fam, const Vector& x);

/// Every J with |sum_J f_j(x) - max| <= tol, shortlex order; |I| <= 12.
std::vector<SubsetJ> brute_S_f(const FunctionFamily& fam, const Vector& x, double tol = 1e-9);

struct GridSpec {
  Vector lower;
  Vector upper;
  std::vector<int> resolution;  // points per coordinate, >= 2

  GridSpec(Vector lo, Vector hi, std::vector<int> res);
  GridSpec(Vector lo, Vector hi, int res);
  Eigen::Index dim() const { return lower.size(); }
};

struct GridMin {
  Vector x;
  double value = 0.0;
};

/// Exhaustive grid argmin, then coordinate-wise ternary refinement inside the
/// neighbouring cells. n <= 3.
GridMin brute_minimize(const std::function<double(const Vector&)>& objective, const GridSpec& grid);

/// All grid points whose value is within tol of the grid minimum.
std::vector<Vector> brute_argmin_set(const std::function<double(const Vector&)>& objective,
                                     const GridSpec& grid, double tol);

struct Interval1d {
  double lower = 0.0;
  double upper = 0.0;
  bool consistent = true;  // Richardson estimates agree with the finest quotient
};

/// [left derivative, right derivative] from one-sided difference quotients
/// with h in {1e-4, 1e-5, 1e-6}.
Interval1d brute_subdiff_1d(const std::function<double(double)>& f, double x);

}  // namespace rsum::oracle
