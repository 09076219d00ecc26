#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tucb/arm_statistics.hpp"
#include "tucb/model_set.hpp"
#include "tucb/policies.hpp"

namespace tucb {

/// Outcome of one episode.
struct RunRecord {
  std::size_t episode_index = 0;
  std::vector<std::size_t> per_arm_pulls;
  std::vector<std::vector<double>> per_arm_rewards;  // in pull order
  std::vector<ArmIndex> arm_sequence;                // I_1..I_n
  double regret = 0.0;

  std::size_t steps() const {
    return std::accumulate(per_arm_pulls.begin(), per_arm_pulls.end(), std::size_t{0});
  }
  std::size_t num_arms() const { return per_arm_pulls.size(); }
};

/// Bernoulli rewards from one independent stream per arm, so the k-th pull of
/// arm i returns the same sample whatever policy produced it.
class RewardTape {
 public:
  RewardTape(const ModelSet& set, ModelIndex theta, std::uint64_t seed) {
    set.check_model(theta);
    for (ArmIndex i = 0; i < set.num_arms(); ++i) {
      streams_.emplace_back(derive_seed(seed, i));
      means_.push_back(set.mean(theta, i));
    }
  }

  double draw(ArmIndex arm) { return streams_.at(arm).bernoulli(means_[arm]) ? 1.0 : 0.0; }

 private:
  std::vector<Rng> streams_;
  std::vector<double> means_;
};

/// Pseudo-regret sum_i T_i Delta_i(theta_bar).
inline double episode_regret(const RunRecord& record, const ModelSet& set, ModelIndex theta_bar) {
  if (record.per_arm_pulls.size() != set.num_arms())
    throw std::invalid_argument("episode_regret: record has wrong number of arms");
  if (!record.per_arm_rewards.empty()) {
    if (record.per_arm_rewards.size() != set.num_arms())
      throw std::invalid_argument("episode_regret: reward lists have wrong arity");
    for (ArmIndex i = 0; i < set.num_arms(); ++i)
      if (record.per_arm_rewards[i].size() != record.per_arm_pulls[i])
        throw std::invalid_argument("episode_regret: reward list length differs from pulls");
  }
  double total = 0.0;
  const ArmIndex best = set.best_arm(theta_bar);
  for (ArmIndex i = 0; i < set.num_arms(); ++i)
    if (i != best) total += static_cast<double>(record.per_arm_pulls[i]) * arm_gap(set, theta_bar, i);
  return total;
}

/// Runs n steps against model theta_bar. `choose(stats)` returns the arm to pull.
template <class Chooser>
RunRecord drive_episode(const ModelSet& set, ModelIndex theta_bar, std::size_t n,
                        std::uint64_t seed, Chooser&& choose) {
  RewardTape tape(set, theta_bar, seed);
  ArmStatistics stats(set.num_arms());
  RunRecord rec;
  rec.per_arm_pulls.assign(set.num_arms(), 0);
  rec.per_arm_rewards.assign(set.num_arms(), {});
  rec.arm_sequence.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const ArmIndex arm = choose(static_cast<const ArmStatistics&>(stats));
    const double reward = tape.draw(arm);
    stats.record(arm, reward);
    ++rec.per_arm_pulls[arm];
    rec.per_arm_rewards[arm].push_back(reward);
    rec.arm_sequence.push_back(arm);
  }
  rec.regret = episode_regret(rec, set, theta_bar);
  return rec;
}

/// Single-task episode for UCB, UCB+ or mUCB with explicit confidence parameters.
inline RunRecord run_episode(Policy policy, const ModelSet& set, ModelIndex theta_bar,
                             std::size_t n, std::uint64_t seed, const ConfidenceParams& params) {
  set.check_model(theta_bar);
  if (n < set.num_arms())
    throw std::invalid_argument("run_episode: n must be at least K");
  switch (policy) {
    case Policy::UCB:
      return drive_episode(set, theta_bar, n, seed, [&](const ArmStatistics& s) {
        for (ArmIndex i = 0; i < s.num_arms(); ++i)
          if (s.pulls(i) == 0) return i;
        return ucb_select(s, params);
      });
    case Policy::UCBPlus: {
      const ArmSet allowed = optimal_arm_set(set, all_models(set));
      return drive_episode(set, theta_bar, n, seed, [&](const ArmStatistics& s) {
        for (ArmIndex i : allowed)
          if (s.pulls(i) == 0) return i;
        return ucb_plus_select(s, allowed, params);
      });
    }
    case Policy::MUCB:
      return drive_episode(set, theta_bar, n, seed,
                           [&](const ArmStatistics& s) { return mucb_step(set, s, params).arm; });
    case Policy::TUCB:
      break;
  }
  throw std::invalid_argument("run_episode: tUCB is a multi-episode policy; use run_tucb");
}

/// Same, with the mUCB radius and delta = 1/n.
inline RunRecord run_episode(Policy policy, const ModelSet& set, ModelIndex theta_bar,
                             std::size_t n, std::uint64_t seed) {
  return run_episode(policy, set, theta_bar, n, seed,
                     default_confidence(n, set.num_models(), set.num_arms()));
}

}  // namespace tucb
