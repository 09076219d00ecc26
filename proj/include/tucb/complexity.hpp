#pragma once

#include <limits>
#include <string>

#include "tucb/model_set.hpp"
#include "tucb/policies.hpp"

namespace tucb {

/// Regret-bound complexity with constants and log factors dropped:
///   UCB   sum_{i != i*} 1/Delta_i
///   UCB+  the same sum over A_*(Theta) \ {i*}
///   mUCB  sum_{i in A_+, i != i*} Delta_i / min_{theta in Theta_{+,i}} Gamma_i(theta, theta_bar)^2
/// Throws DegenerateModelError when a required gap is zero.
inline double complexity(const ModelSet& set, ModelIndex theta_bar, Policy policy) {
  set.check_model(theta_bar);
  const ArmIndex best = set.best_arm(theta_bar);
  auto inverse_gap = [&](ArmIndex i) {
    const double gap = arm_gap(set, theta_bar, i);
    if (gap <= 0.0)
      throw DegenerateModelError("zero arm gap for non-optimal arm " + std::to_string(i) +
                                 " of model " + std::to_string(theta_bar));
    return 1.0 / gap;
  };

  double total = 0.0;
  switch (policy) {
    case Policy::UCB:
      for (ArmIndex i = 0; i < set.num_arms(); ++i)
        if (i != best) total += inverse_gap(i);
      return total;
    case Policy::UCBPlus:
      for (ArmIndex i : optimal_arm_set(set, all_models(set)))
        if (i != best) total += inverse_gap(i);
      return total;
    case Policy::MUCB: {
      const ModelSubset plus = optimistic_models(set, theta_bar);
      for (ArmIndex i : optimal_arm_set(set, plus)) {
        if (i == best) continue;
        double min_gap = std::numeric_limits<double>::infinity();
        for (ModelIndex t : plus)
          if (set.best_arm(t) == i) min_gap = std::min(min_gap, model_gap(set, t, theta_bar, i));
        const double delta = arm_gap(set, theta_bar, i);
        if (min_gap <= 0.0 || delta <= 0.0)
          throw DegenerateModelError("zero model gap for arm " + std::to_string(i) +
                                     " of model " + std::to_string(theta_bar));
        total += delta / (min_gap * min_gap);
      }
      return total;
    }
    case Policy::TUCB:
      break;
  }
  throw std::invalid_argument("complexity: defined for UCB, UCB+ and mUCB only");
}

}  // namespace tucb
