#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tucb/episode.hpp"
#include "tucb/transfer/umucb.hpp"

namespace tucb {

/// Arm and model sets that govern how often umUCB pulls each arm when the
/// true model is theta_bar.
struct EpisodeSetClassification {
  std::vector<ArmSet> nondominated;     // A^j_*(theta), per estimated model
  std::vector<ArmSet> optimistic_arms;  // A^j_+(theta; theta_bar), per estimated model
  ModelSubset optimistic_models;        // Theta^j_+
  ModelSubset undiscardable;            // Theta~^j_+
  std::vector<ModelSubset> proposing;   // Theta^j_{i,+}, per arm
  ArmSet a1;                            // arms proposed only by discardable models
  ArmSet a2;                            // A^j_+(Theta~^j_+)
};

inline EpisodeSetClassification classify_sets(const Matrix& estimated, double radius,
                                              ModelIndex theta_bar, const ModelSet& set) {
  set.check_model(theta_bar);
  if (static_cast<std::size_t>(estimated.cols()) != set.num_arms())
    throw std::invalid_argument("classify_sets: K mismatch");
  const auto m = static_cast<std::size_t>(estimated.rows());
  const std::size_t K = set.num_arms();
  const double target = set.best_value(theta_bar);

  EpisodeSetClassification c;
  c.nondominated.resize(m);
  c.optimistic_arms.resize(m);
  c.proposing.resize(K);
  for (ModelIndex t = 0; t < m; ++t) {
    c.nondominated[t] = nondominated_arms(estimated, t, radius);
    for (ArmIndex i : c.nondominated[t])
      if (estimated(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) + radius >= target)
        c.optimistic_arms[t].push_back(i);
    if (c.optimistic_arms[t].empty()) continue;
    c.optimistic_models.push_back(t);
    for (ArmIndex i : c.optimistic_arms[t]) c.proposing[i].push_back(t);
    bool keeps = true;
    for (ArmIndex i : c.optimistic_arms[t])
      if (std::abs(estimated(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) -
                   set.mean(theta_bar, i)) > radius)
        keeps = false;
    if (keeps) c.undiscardable.push_back(t);
  }

  ArmSet plus_all;
  for (ModelIndex t : c.optimistic_models)
    plus_all.insert(plus_all.end(), c.optimistic_arms[t].begin(), c.optimistic_arms[t].end());
  for (ModelIndex t : c.undiscardable)
    c.a2.insert(c.a2.end(), c.optimistic_arms[t].begin(), c.optimistic_arms[t].end());
  auto normalize = [](ArmSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  };
  normalize(plus_all);
  normalize(c.a2);
  for (ArmIndex i : plus_all)
    if (!contains(c.a2, i)) c.a1.push_back(i);
  return c;
}

inline EpisodeSetClassification classify_sets(const TransferState& state, ModelIndex theta_bar,
                                              const ModelSet& set) {
  return classify_sets(state.estimated_models, state.radius, theta_bar, set);
}

enum class BoundPath { A1, A2, Excluded };

struct ArmBoundCheck {
  ArmIndex arm = 0;
  std::size_t pulls = 0;
  BoundPath path = BoundPath::Excluded;
  double bound = 0.0;   // includes the initialization pulls
  double margin = 0.0;  // bound - pulls
  bool pass = true;
};

struct PullBoundAudit {
  std::vector<ArmBoundCheck> arms;  // non-optimal arms only
  bool all_pass = true;
};

/// Checks the per-arm pull counts of one umUCB episode against the
/// high-probability bounds (three initialization pulls added):
///   A1  min{2L/Delta^2, L/(2 min Gamma_hat^2)} + 1 + 3, Gamma_hat = Gamma/2 - eps^j
///   A2  2L/Delta^2 + 1 + 3
///   otherwise exactly the 3 initialization pulls
/// with L = log(2 m K n^2 / delta).
inline PullBoundAudit audit_pull_bounds(const RunRecord& record,
                                        const EpisodeSetClassification& cls,
                                        const Matrix& estimated, double radius,
                                        const ModelSet& set, ModelIndex theta_bar,
                                        const ConfidenceParams& params) {
  constexpr double kInitPulls = 3.0;
  ConfidenceParams p = params;
  p.variant = RadiusVariant::UMUCB;
  const double L = p.log_term();
  const ArmIndex best = set.best_arm(theta_bar);

  PullBoundAudit audit;
  for (ArmIndex i = 0; i < set.num_arms(); ++i) {
    if (i == best) continue;
    ArmBoundCheck chk;
    chk.arm = i;
    chk.pulls = record.per_arm_pulls.at(i);
    const double delta = arm_gap(set, theta_bar, i);
    const double ucb_bound = delta > 0.0 ? 2.0 * L / (delta * delta) + 1.0
                                         : std::numeric_limits<double>::infinity();
    if (contains(cls.a1, i)) {
      double min_gamma_hat = std::numeric_limits<double>::infinity();
      for (ModelIndex t : cls.proposing[i]) {
        const double gamma = std::abs(estimated(static_cast<Eigen::Index>(t),
                                                static_cast<Eigen::Index>(i)) -
                                      set.mean(theta_bar, i));
        min_gamma_hat = std::min(min_gamma_hat, gamma / 2.0 - radius);
      }
      if (min_gamma_hat > 0.0) {
        chk.path = BoundPath::A1;
        chk.bound = std::min(ucb_bound, L / (2.0 * min_gamma_hat * min_gamma_hat) + 1.0);
      } else {
        chk.path = BoundPath::A2;
        chk.bound = ucb_bound;
      }
      chk.bound += kInitPulls;
    } else if (contains(cls.a2, i)) {
      chk.path = BoundPath::A2;
      chk.bound = ucb_bound + kInitPulls;
    } else {
      chk.path = BoundPath::Excluded;
      chk.bound = kInitPulls;
    }
    chk.margin = chk.bound - static_cast<double>(chk.pulls);
    chk.pass = chk.path == BoundPath::Excluded ? chk.pulls == 3
                                               : static_cast<double>(chk.pulls) <= chk.bound;
    audit.all_pass = audit.all_pass && chk.pass;
    audit.arms.push_back(chk);
  }
  return audit;
}

inline PullBoundAudit audit_pull_bounds(const RunRecord& record,
                                        const EpisodeSetClassification& cls,
                                        const TransferState& state, const ModelSet& set,
                                        ModelIndex theta_bar, const ConfidenceParams& params) {
  return audit_pull_bounds(record, cls, state.estimated_models, state.radius, set, theta_bar,
                           params);
}

}  // namespace tucb
