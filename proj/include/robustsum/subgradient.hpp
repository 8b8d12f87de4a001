#pragma once

#include "robustsum/core.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace rsum {

/// Value and one subgradient of a convex function at a point.
struct ValueAndSubgradient {
  double value = 0.0;
  Vector subgradient;
};

using SubgradientOracle = std::function<ValueAndSubgradient(const Vector&)>;

struct SubgradientOptions {
  int steps_per_epoch = 400;
  int max_epochs = 60;
  double step_scale = 1.0;  // c in the c / sqrt(k) schedule
  double tol_opt = 1e-10;   // value stagnation threshold across epochs
};

struct SubgradientResult {
  Vector x;
  double value = kInf;
  bool converged = false;
  int evaluations = 0;
  std::vector<double> best_history;  // best value after each epoch
};

/// Diminishing-step subgradient descent, x <- x - (c / sqrt(k)) g, with
/// best-iterate tracking. Each epoch restarts from the best point; c is
/// halved whenever an epoch fails to move the best point much. Converged
/// means a zero subgradient was hit or the best value stagnated (within
/// tol_opt) over three consecutive epochs.
SubgradientResult subgradient_minimize(const SubgradientOracle& oracle, const Vector& x0,
                                       const SubgradientOptions& opts = {});

}  // namespace rsum
