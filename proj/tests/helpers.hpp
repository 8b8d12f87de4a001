#pragma once

#include "robustsum/duality.hpp"

#include <initializer_list>
#include <vector>

namespace th {

using rsum::ConvexFunction;
using rsum::FunctionFamily;
using rsum::Vector;

inline Vector v(std::initializer_list<double> xs) {
  Vector out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) out(k++) = x;
  return out;
}

inline Vector s(double x) { return Vector::Constant(1, x); }

// a x + c on the line
inline ConvexFunction line(double a, double c) { return ConvexFunction::affine(s(a), c); }

// sigma_[-r, r] - t on the line
inline ConvexFunction abs_minus(double t, double r = 1.0) {
  return ConvexFunction::subaffine(rsum::Polytope({s(-r), s(r)}), t);
}

inline FunctionFamily family(std::vector<ConvexFunction> fs) {
  return FunctionFamily::from_functions(std::move(fs));
}

// {x + 1, -2x + 1}
inline FunctionFamily gap_family() { return family({line(1, 1), line(-2, 1)}); }

// {|x|, |x| + 1}
inline FunctionFamily abs_family() { return family({abs_minus(0), abs_minus(-1)}); }

// {1/2 x^2}
inline FunctionFamily half_square() {
  return family({ConvexFunction::quadratic(rsum::Matrix::Identity(1, 1), s(0), 0)});
}

inline rsum::DualCandidate cand(rsum::SubsetJ j, std::vector<double> slopes) {
  rsum::DualCandidate c{std::move(j), {}};
  for (double x : slopes) c.slopes.push_back(s(x));
  return c;
}

}  // namespace th
