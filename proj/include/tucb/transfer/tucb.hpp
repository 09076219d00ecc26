#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tucb/spectral/recovery.hpp"
#include "tucb/transfer/umucb.hpp"

namespace tucb {

enum class TaskSampling { Stratified, Rho };

/// Seed streams derived from one master seed.
inline std::uint64_t task_seed(std::uint64_t master) { return derive_seed(master, 0); }
inline std::uint64_t episode_seed(std::uint64_t master, std::size_t episode) {
  return derive_seed(derive_seed(master, 1), episode);
}
inline std::uint64_t estimation_seed(std::uint64_t master, std::size_t episode) {
  return derive_seed(derive_seed(master, 2), episode);
}

/// Task sequence theta_bar^1..J: round-robin over the models, or i.i.d. from rho.
inline std::vector<ModelIndex> draw_tasks(const ModelSet& set, std::size_t J, std::uint64_t seed,
                                          TaskSampling sampling) {
  std::vector<ModelIndex> tasks(J);
  if (sampling == TaskSampling::Stratified) {
    for (std::size_t j = 0; j < J; ++j) tasks[j] = j % set.num_models();
    return tasks;
  }
  Rng rng(seed);
  for (auto& t : tasks) {
    const double u = rng.uniform();
    double acc = 0.0;
    t = set.num_models() - 1;
    for (ModelIndex k = 0; k < set.num_models(); ++k) {
      acc += set.rho()(static_cast<Eigen::Index>(k));
      if (u < acc) {
        t = k;
        break;
      }
    }
  }
  return tasks;
}

struct TransferConfig {
  std::optional<double> delta;  // defaults to 1/n
  double c_theta = 2.0;
  std::size_t estimate_every = 1;
  PowerMethodOptions rtp;
  std::uint64_t master_seed = 0;
  bool store_samples = false;
  std::size_t checkpoint_every = 0;  // 0: final checkpoint only
};

struct EpisodeSummary {
  std::size_t episode = 0;  // 1-based
  ModelIndex theta_bar = 0;
  double regret = 0.0;
  double cumulative_regret = 0.0;
  double model_error = 0.0;  // matched max row error of the estimates used
  double epsilon_j = 1.0;    // radius used in this episode
  bool estimation_failed = false;  // re-estimation after this episode failed
  std::vector<std::size_t> pulls;
};

struct Checkpoint {
  std::size_t episode = 0;  // estimates available after this many episodes
  Matrix estimated;
  ModelMatch match;
};

struct TransferReport {
  std::vector<EpisodeSummary> episodes;
  std::vector<Checkpoint> checkpoints;
  TransferState final_state;
  double cumulative_regret = 0.0;
};

/// tUCB over a fixed task sequence: umUCB with the current estimates, then
/// fold the episode's batch means into the moments and re-estimate.
inline TransferReport run_tucb(const ModelSet& set, const std::vector<ModelIndex>& tasks,
                               std::size_t n, const TransferConfig& cfg) {
  const std::size_t m = set.num_models();
  const std::size_t K = set.num_arms();
  const std::size_t J = tasks.size();
  if (J < 1) throw std::invalid_argument("run_tucb: J must be >= 1");
  if (n < 3 * K) throw std::invalid_argument("run_tucb: n must be at least 3K");
  if (cfg.estimate_every < 1) throw std::invalid_argument("run_tucb: estimate_every must be >= 1");

  ConfidenceParams params = default_confidence(n, m, K, RadiusVariant::UMUCB);
  if (cfg.delta) params.delta = *cfg.delta;
  params.validate();
  const EpsilonParams eps_params{cfg.c_theta, m, K, J, params.delta};

  TransferReport report;
  TransferState state = TransferState::uninformative(m, K);
  double cumulative = 0.0;

  for (std::size_t j = 1; j <= J; ++j) {
    const ModelIndex theta_bar = tasks[j - 1];
    RunRecord rec = umucb_episode(state, theta_bar, set, n, params, episode_seed(cfg.master_seed, j));
    rec.episode_index = j;
    cumulative += rec.regret;

    EpisodeSummary row;
    row.episode = j;
    row.theta_bar = theta_bar;
    row.regret = rec.regret;
    row.cumulative_regret = cumulative;
    row.model_error = match_models(set.means(), state.estimated_models).max_error;
    row.epsilon_j = state.radius;
    row.pulls = rec.per_arm_pulls;

    accumulate_moments(state.moments, batch_means(rec));
    state.episode_index = j;
    if (cfg.store_samples) state.sample_store.push_back(std::move(rec));

    if (j % cfg.estimate_every == 0) {
      PowerMethodOptions rtp = cfg.rtp;
      rtp.seed = estimation_seed(cfg.master_seed, j);
      try {
        SpectralModel est = estimate_models(state.moments, m, rtp);
        if (est.degenerate) throw RankDeficientError("tensor power method found no component");
        state.estimated_models = est.recovered_means;
        state.radius = epsilon_j(j, eps_params);
      } catch (const RankDeficientError&) {
        state.radius = 1.0;
        row.estimation_failed = true;
      }
    }
    const bool checkpoint = j == J || (cfg.checkpoint_every > 0 && j % cfg.checkpoint_every == 0);
    if (checkpoint)
      report.checkpoints.push_back(
          {j, state.estimated_models, match_models(set.means(), state.estimated_models)});
    report.episodes.push_back(std::move(row));
  }
  report.cumulative_regret = cumulative;
  report.final_state = std::move(state);
  return report;
}

inline TransferReport run_tucb(const ModelSet& set, std::size_t J, std::size_t n,
                               const TransferConfig& cfg) {
  return run_tucb(set, draw_tasks(set, J, task_seed(cfg.master_seed), TaskSampling::Rho), n, cfg);
}

}  // namespace tucb
