#include "robustsum/subgradient.hpp"

#include <algorithm>
#include <cmath>

namespace rsum {

SubgradientResult subgradient_minimize(const SubgradientOracle& oracle, const Vector& x0,
                                       const SubgradientOptions& opts) {
  SubgradientResult res;
  res.x = x0;
  auto first = oracle(x0);
  ++res.evaluations;
  res.value = first.value;
  if (first.subgradient.norm() == 0.0) {
    res.converged = true;
    res.best_history.push_back(res.value);
    return res;
  }

  double scale = opts.step_scale;
  int stagnant = 0;
  for (int epoch = 0; epoch < opts.max_epochs; ++epoch) {
    const Vector start = res.x;
    const double start_value = res.value;
    Vector x = res.x;
    double travel = 0.0;
    for (int k = 1; k <= opts.steps_per_epoch; ++k) {
      auto vs = oracle(x);
      ++res.evaluations;
      if (vs.value < res.value) {
        res.value = vs.value;
        res.x = x;
      }
      const double gnorm = vs.subgradient.norm();
      if (gnorm == 0.0) {
        res.value = std::min(res.value, vs.value);
        if (vs.value <= res.value) res.x = x;
        res.converged = true;
        res.best_history.push_back(res.value);
        return res;
      }
      const double step = scale / std::sqrt(static_cast<double>(k));
      x -= (step / std::max(1.0, gnorm)) * vs.subgradient;
      travel += step;
    }
    res.best_history.push_back(res.value);

    const double moved = (res.x - start).norm();
    const double improvement = start_value - res.value;
    if (moved < 0.25 * travel) scale *= 0.5;
    if (improvement <= opts.tol_opt * std::max(1.0, std::abs(res.value))) {
      if (++stagnant >= 3) {
        res.converged = true;
        return res;
      }
    } else {
      stagnant = 0;
    }
  }
  return res;
}

}  // namespace rsum
