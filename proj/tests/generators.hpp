#pragma once

// Seeded random instances for the property suites.

#include "robustsum/robust_sum.hpp"

#include <random>
#include <vector>

namespace gen {

using rsum::ConvexFunction;
using rsum::FunctionFamily;
using rsum::Matrix;
using rsum::Vector;

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Vector int_vector(std::mt19937_64& rng, Eigen::Index n, int lo, int hi) {
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = uniform_int(rng, lo, hi);
  return v;
}

inline FunctionFamily affine_family(std::mt19937_64& rng, Eigen::Index n, std::size_t m) {
  std::vector<ConvexFunction> fs;
  for (std::size_t i = 0; i < m; ++i) {
    fs.push_back(ConvexFunction::affine(int_vector(rng, n, -5, 5), uniform_int(rng, -5, 5)));
  }
  return FunctionFamily::from_functions(std::move(fs));
}

inline ConvexFunction random_member(std::mt19937_64& rng, Eigen::Index n) {
  switch (uniform_int(rng, 0, 3)) {
    case 0: return ConvexFunction::affine(int_vector(rng, n, -5, 5), uniform_int(rng, -5, 5));
    case 1: {
      std::vector<rsum::AffinePiece> ps;
      const int k = uniform_int(rng, 2, 4);
      for (int p = 0; p < k; ++p) ps.push_back({int_vector(rng, n, -5, 5), double(uniform_int(rng, -5, 5))});
      return ConvexFunction::max_affine(std::move(ps));
    }
    case 2: {
      std::vector<Vector> vs;
      const int k = uniform_int(rng, 1, 4);
      for (int p = 0; p < k; ++p) vs.push_back(int_vector(rng, n, -3, 3));
      return ConvexFunction::subaffine(rsum::Polytope(std::move(vs)), uniform_int(rng, -5, 5));
    }
    default: {
      Matrix l(n, n);
      for (Eigen::Index r = 0; r < n; ++r) l.row(r) = int_vector(rng, n, -2, 2).transpose();
      Matrix q = l * l.transpose() + Matrix::Identity(n, n);
      return ConvexFunction::quadratic(q, int_vector(rng, n, -3, 3), uniform_int(rng, -5, 5));
    }
  }
}

inline FunctionFamily mixed_family(std::mt19937_64& rng, Eigen::Index n, std::size_t m) {
  std::vector<ConvexFunction> fs;
  for (std::size_t i = 0; i < m; ++i) fs.push_back(random_member(rng, n));
  return FunctionFamily::from_functions(std::move(fs));
}

/// Regular grid over [lo, hi]^n with `per_axis` points per coordinate.
inline std::vector<Vector> grid(Eigen::Index n, double lo, double hi, int per_axis) {
  std::vector<Vector> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  const double step = (hi - lo) / (per_axis - 1);
  while (true) {
    Vector x(n);
    for (Eigen::Index k = 0; k < n; ++k) x(k) = lo + step * idx[static_cast<std::size_t>(k)];
    out.push_back(x);
    Eigen::Index k = 0;
    for (; k < n; ++k) {
      if (++idx[static_cast<std::size_t>(k)] < per_axis) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
    if (k == n) return out;
  }
}

}  // namespace gen
