#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tucb/arm_statistics.hpp"
#include "tucb/confidence.hpp"
#include "tucb/model_set.hpp"

namespace tucb {

enum class Policy { UCB, UCBPlus, MUCB, TUCB };

inline std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::UCB: return "UCB";
    case Policy::UCBPlus: return "UCB+";
    case Policy::MUCB: return "mUCB";
    case Policy::TUCB: return "tUCB";
  }
  return "?";
}

inline Policy parse_policy(std::string_view s) {
  if (s == "UCB" || s == "ucb") return Policy::UCB;
  if (s == "UCB+" || s == "ucb+" || s == "ucb_plus" || s == "UCBPlus") return Policy::UCBPlus;
  if (s == "mUCB" || s == "mucb") return Policy::MUCB;
  if (s == "tUCB" || s == "tucb") return Policy::TUCB;
  throw std::invalid_argument("unknown policy '" + std::string(s) + "'");
}

namespace detail {

template <class ArmRange>
ArmIndex ucb_argmax(const ArmStatistics& stats, const ArmRange& arms,
                    const ConfidenceParams& params) {
  ArmIndex best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (ArmIndex i : arms) {
    if (i >= stats.num_arms()) throw std::out_of_range("ucb: arm index out of range");
    if (stats.pulls(i) == 0)
      throw std::invalid_argument("ucb: arm " + std::to_string(i) + " has not been pulled");
    const double index = stats.mean(i) + confidence_radius(stats.pulls(i), params);
    if (!any || index > best_index) {
      best = i;
      best_index = index;
      any = true;
    }
  }
  return best;
}

struct AllArms {
  std::size_t k;
  struct iterator {
    std::size_t v;
    std::size_t operator*() const { return v; }
    iterator& operator++() { ++v; return *this; }
    bool operator!=(const iterator& o) const { return v != o.v; }
  };
  iterator begin() const { return {0}; }
  iterator end() const { return {k}; }
};

}  // namespace detail

/// argmax_i mu_hat_i + eps_i over all arms; ties to the lowest index.
inline ArmIndex ucb_select(const ArmStatistics& stats, const ConfidenceParams& params) {
  return detail::ucb_argmax(stats, detail::AllArms{stats.num_arms()}, params);
}

/// ucb_select restricted to `allowed` (sorted).
inline ArmIndex ucb_plus_select(const ArmStatistics& stats, const ArmSet& allowed,
                                const ConfidenceParams& params) {
  if (allowed.empty()) throw std::invalid_argument("ucb_plus_select: empty allowed set");
  return detail::ucb_argmax(stats, allowed, params);
}

struct MucbDecision {
  ModelSubset active;       // Theta_t
  ArmIndex arm = 0;
  bool initializing = false;  // some arm of A_*(Theta) still unpulled
  bool fallback = false;      // Theta_t empty, restricted UCB step taken
};

/// Models compatible with the current estimates. Unpulled arms do not
/// constrain the set.
inline ModelSubset compatible_models(const ModelSet& set, const ArmStatistics& stats,
                                     const ConfidenceParams& params) {
  ModelSubset active;
  std::vector<double> radius(set.num_arms(), std::numeric_limits<double>::infinity());
  for (ArmIndex i = 0; i < set.num_arms(); ++i)
    if (stats.pulls(i) > 0) radius[i] = confidence_radius(stats.pulls(i), params);
  for (ModelIndex t = 0; t < set.num_models(); ++t) {
    bool ok = true;
    for (ArmIndex i = 0; i < set.num_arms() && ok; ++i)
      if (stats.pulls(i) > 0 && std::abs(set.mean(t, i) - stats.mean(i)) > radius[i]) ok = false;
    if (ok) active.push_back(t);
  }
  return active;
}

/// One step of mUCB: build the active set, pick the most optimistic model and
/// pull its optimal arm. Each arm of A_*(Theta) is pulled once first.
inline MucbDecision mucb_step(const ModelSet& set, const ArmStatistics& stats,
                              const ConfidenceParams& params) {
  if (stats.num_arms() != set.num_arms())
    throw std::invalid_argument("mucb_step: statistics and model set disagree on K");
  MucbDecision d;
  const ArmSet candidates = optimal_arm_set(set, all_models(set));
  for (ArmIndex i : candidates)
    if (stats.pulls(i) == 0) {
      d.initializing = true;
      d.arm = i;
      d.active = compatible_models(set, stats, params);
      return d;
    }

  d.active = compatible_models(set, stats, params);
  if (d.active.empty()) {
    d.fallback = true;
    d.arm = ucb_plus_select(stats, candidates, params);
    return d;
  }
  ModelIndex chosen = d.active.front();
  for (ModelIndex t : d.active)
    if (set.best_value(t) > set.best_value(chosen)) chosen = t;
  d.arm = set.best_arm(chosen);
  return d;
}

}  // namespace tucb
