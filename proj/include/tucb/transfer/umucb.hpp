#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tucb/episode.hpp"
#include "tucb/policies.hpp"
#include "tucb/spectral/moments.hpp"

namespace tucb {

/// What tUCB carries from one episode to the next.
struct TransferState {
  Matrix estimated_models;  // Theta^j, m x K
  double radius = 1.0;      // epsilon^j
  MomentEstimates moments;
  std::size_t episode_index = 0;
  std::vector<RunRecord> sample_store;

  /// All rows 0.5 and epsilon = 1: umUCB then behaves like UCB.
  static TransferState uninformative(std::size_t m, std::size_t K) {
    TransferState s;
    s.estimated_models = Matrix::Constant(static_cast<Eigen::Index>(m),
                                          static_cast<Eigen::Index>(K), 0.5);
    s.radius = 1.0;
    s.moments = MomentEstimates(K);
    return s;
  }
};

/// A^j_*(theta): arms not provably dominated within estimated model theta.
inline ArmSet nondominated_arms(const Matrix& estimated, ModelIndex theta, double radius) {
  const auto row = estimated.row(static_cast<Eigen::Index>(theta));
  const double top = row.maxCoeff();
  ArmSet out;
  for (Eigen::Index i = 0; i < row.size(); ++i)
    if (!(row(i) + radius < top - radius)) out.push_back(static_cast<ArmIndex>(i));
  return out;
}

/// A^j_*(Theta^j): union over all estimated models.
inline ArmSet nondominated_arms(const Matrix& estimated, double radius) {
  ArmSet out;
  for (Eigen::Index t = 0; t < estimated.rows(); ++t)
    for (ArmIndex i : nondominated_arms(estimated, static_cast<ModelIndex>(t), radius))
      out.push_back(i);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct UmucbDecision {
  ModelSubset active;                // Theta^j_t
  std::optional<ModelIndex> model;   // theta^j_t
  ArmIndex arm = 0;
  bool fallback = false;
};

/// One post-initialization step of umUCB. Every arm must have been pulled.
inline UmucbDecision umucb_step(const Matrix& estimated, double radius,
                                const ArmStatistics& stats, const ConfidenceParams& params) {
  const auto K = static_cast<std::size_t>(estimated.cols());
  if (stats.num_arms() != K) throw std::invalid_argument("umucb_step: K mismatch");
  std::vector<double> eps(K), ucb(K);
  for (ArmIndex i = 0; i < K; ++i) {
    eps[i] = confidence_radius(stats.pulls(i), params);
    ucb[i] = stats.mean(i) + eps[i];
  }

  UmucbDecision d;
  // ties in B go to the larger UCB index, then the lowest model and arm
  double best_value = -std::numeric_limits<double>::infinity();
  double best_ucb = -std::numeric_limits<double>::infinity();
  ArmIndex best_arm = 0;
  for (Eigen::Index t = 0; t < estimated.rows(); ++t) {
    bool compatible = true;
    for (ArmIndex i = 0; i < K && compatible; ++i)
      if (std::abs(estimated(t, static_cast<Eigen::Index>(i)) - stats.mean(i)) > eps[i] + radius)
        compatible = false;
    if (!compatible) continue;
    d.active.push_back(static_cast<ModelIndex>(t));
    for (ArmIndex i = 0; i < K; ++i) {
      const double b = std::min(estimated(t, static_cast<Eigen::Index>(i)) + radius, ucb[i]);
      if (b > best_value || (b == best_value && ucb[i] > best_ucb)) {
        best_value = b;
        best_ucb = ucb[i];
        best_arm = i;
        d.model = static_cast<ModelIndex>(t);
      }
    }
  }
  if (d.active.empty()) {
    d.fallback = true;
    d.arm = ucb_plus_select(stats, nondominated_arms(estimated, radius), params);
    return d;
  }
  d.arm = best_arm;
  return d;
}

/// umUCB episode with explicit model estimates: three pulls per arm, then
/// umucb_step for the remaining steps.
inline RunRecord umucb_episode(const Matrix& estimated, double radius, ModelIndex theta_bar,
                               const ModelSet& set, std::size_t n,
                               const ConfidenceParams& params, std::uint64_t seed) {
  const std::size_t K = set.num_arms();
  if (static_cast<std::size_t>(estimated.cols()) != K)
    throw std::invalid_argument("umucb_episode: estimated models have wrong K");
  if (n < 3 * K) throw std::invalid_argument("umucb_episode: n must be at least 3K");
  std::size_t t = 0;
  return drive_episode(set, theta_bar, n, seed, [&](const ArmStatistics& s) {
    const std::size_t step = t++;
    if (step < 3 * K) return static_cast<ArmIndex>(step % K);
    return umucb_step(estimated, radius, s, params).arm;
  });
}

inline RunRecord umucb_episode(const TransferState& state, ModelIndex theta_bar,
                               const ModelSet& set, std::size_t n,
                               const ConfidenceParams& params, std::uint64_t seed) {
  return umucb_episode(state.estimated_models, state.radius, theta_bar, set, n, params, seed);
}

}  // namespace tucb
