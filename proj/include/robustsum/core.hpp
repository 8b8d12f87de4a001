#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsum {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Extended reals are plain doubles: +inf / -inf carry the IEEE meaning and
// (+inf) + r == +inf. Catalog conjugates never produce -inf, so sums never
// mix opposite infinities.
using ExtReal = double;

inline constexpr ExtReal kInf = std::numeric_limits<double>::infinity();

inline bool is_pos_inf(ExtReal v) { return v == kInf; }
inline bool is_neg_inf(ExtReal v) { return v == -kInf; }

/// Absolute tolerances shared by the solvers and certificate checks.
struct Tolerances {
  double feasibility = 1e-9;  // sum constraints, polytope membership
  double value = 1e-8;        // comparison of optimal values
  double active = 1e-9;       // active-vertex detection (relative)
  double equality = 1e-9;     // S_f membership, zero classification
};

// Error taxonomy. Everything derives from Error so callers can catch once.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class UnsupportedVariant : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
  }
}

/// Nonempty subset of family positions, sorted ascending (0-based).
using SubsetJ = std::vector<std::size_t>;

/// Graded lexicographic order: by size, then lexicographically.
inline bool shortlex_less(const SubsetJ& a, const SubsetJ& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// All nonempty subsets of {0..m-1} in shortlex order.
std::vector<SubsetJ> all_subsets(std::size_t m);

}  // namespace rsum
