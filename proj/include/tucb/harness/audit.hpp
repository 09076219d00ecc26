#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "tucb/harness/config.hpp"
#include "tucb/harness/fixtures.hpp"
#include "tucb/spectral/diagnostics.hpp"
#include "tucb/spectral/recovery.hpp"
#include "tucb/transfer/classify.hpp"
#include "tucb/transfer/tucb.hpp"

namespace tucb::harness {

struct AuditCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
  }
};

namespace audit {

template <class... Parts>
std::string describe(const Parts&... parts) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << parts);
  return os.str();
}

/// population moments -> whiten -> RTP -> recover -> match.
inline AuditCheck exact_moment_pipeline(const ModelSet& set, const PowerMethodOptions& rtp) {
  AuditCheck c{"exact_moment_pipeline", false, {}};
  const SpectralModel est = estimate_models(population_moments(set), set.num_models(), rtp);
  const ModelMatch match = match_models(set.means(), est.recovered_means);
  double lambda_err = 0.0;
  // eigenvalue k goes with recovered row k, i.e. true model perm^{-1}(k)
  std::vector<std::size_t> inverse(match.permutation.size());
  for (std::size_t t = 0; t < inverse.size(); ++t) inverse[match.permutation[t]] = t;
  for (Eigen::Index k = 0; k < est.eigenvalues.size(); ++k) {
    const double rho = set.rho()(static_cast<Eigen::Index>(inverse[static_cast<std::size_t>(k)]));
    lambda_err = std::max(lambda_err, std::abs(est.eigenvalues(k) - 1.0 / std::sqrt(rho)));
  }
  c.passed = !est.degenerate && match.max_error < 1e-6 && lambda_err < 1e-6;
  c.detail = describe("max matched error ", match.max_error, ", max eigenvalue error ", lambda_err);
  return c;
}

/// W^T M2 W = I and W^T B = I on perturbed population moments of random sets.
inline AuditCheck whitening_identities(std::size_t instances, std::uint64_t seed) {
  AuditCheck c{"whitening_identities", true, {}};
  Rng rng(seed);
  double worst_white = 0.0, worst_inverse = 0.0;
  std::size_t rank_failures = 0;
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t m = 2 + rng.below(4);
    const std::size_t K = m + rng.below(5);
    const ModelSet set = random_model_set(m, K, rng.next());
    Matrix m2 = population_moments(set).m2;
    Matrix noise(m2.rows(), m2.cols());
    for (Eigen::Index a = 0; a < noise.rows(); ++a)
      for (Eigen::Index b = 0; b < noise.cols(); ++b) noise(a, b) = 1e-3 * (2.0 * rng.uniform() - 1.0);
    m2 += 0.5 * (noise + noise.transpose());
    try {
      const WhiteningMap w = whiten(m2, m);
      const auto I = Matrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      worst_white = std::max(worst_white, (w.w.transpose() * m2 * w.w - I).cwiseAbs().maxCoeff());
      worst_inverse = std::max(worst_inverse, (w.w.transpose() * w.b - I).cwiseAbs().maxCoeff());
    } catch (const RankDeficientError&) {
      ++rank_failures;
    }
  }
  c.passed = worst_white < 1e-8 && worst_inverse < 1e-10;
  c.detail = describe(instances, " instances, ", rank_failures, " rank-deficient, max |W'M2W-I| ",
                      worst_white, ", max |W'B-I| ", worst_inverse);
  return c;
}

/// mUCB never pulls an arm that is optimal for no model.
inline AuditCheck mucb_restriction(const ModelSet& set, std::size_t episodes, std::size_t n,
                                   std::uint64_t seed) {
  AuditCheck c{"mucb_arm_restriction", true, {}};
  const ArmSet allowed = optimal_arm_set(set, all_models(set));
  const ConfidenceParams params = default_confidence(n, set.num_models(), set.num_arms());
  std::size_t violations = 0;
  for (std::size_t e = 0; e < episodes; ++e) {
    const ModelIndex theta = e % set.num_models();
    const RunRecord rec = run_episode(Policy::MUCB, set, theta, n, derive_seed(seed, e), params);
    for (ArmIndex i = 0; i < set.num_arms(); ++i)
      if (!contains(allowed, i) && rec.per_arm_pulls[i] > 0) ++violations;
  }
  c.passed = violations == 0;
  c.detail = describe(episodes, " episodes of length ", n, ", ", violations, " violations");
  return c;
}

/// Gamma_{i*(theta)}(theta, theta_bar) >= Delta_{i*(theta)}(theta_bar) for theta in Theta_+.
inline AuditCheck gap_dominance(std::size_t sets, std::uint64_t seed) {
  AuditCheck c{"gap_dominance", true, {}};
  Rng rng(seed);
  std::size_t pairs = 0, violations = 0;
  for (std::size_t s = 0; s < sets; ++s) {
    const ModelSet set = random_model_set(1 + rng.below(6), 2 + rng.below(7), rng.next());
    for (ModelIndex bar = 0; bar < set.num_models(); ++bar)
      for (ModelIndex t : optimistic_models(set, bar)) {
        const ArmIndex i = set.best_arm(t);
        ++pairs;
        if (model_gap(set, t, bar, i) < arm_gap(set, bar, i)) ++violations;
      }
  }
  c.passed = violations == 0;
  c.detail = describe(sets, " random sets, ", pairs, " pairs, ", violations, " violations");
  return c;
}

/// Three batch means average to the empirical mean when T_i is a multiple of 3.
inline AuditCheck batch_mean_identity(std::size_t records, std::uint64_t seed) {
  AuditCheck c{"batch_mean_identity", true, {}};
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t r = 0; r < records; ++r) {
    RunRecord rec;
    const std::size_t K = 1 + rng.below(8);
    for (std::size_t i = 0; i < K; ++i) {
      const std::size_t T = 3 * (1 + rng.below(200));
      std::vector<double> xs(T);
      const bool bernoulli = rng.bernoulli(0.5);
      for (auto& x : xs) x = bernoulli ? (rng.bernoulli(0.4) ? 1.0 : 0.0) : rng.uniform();
      rec.per_arm_pulls.push_back(T);
      rec.per_arm_rewards.push_back(std::move(xs));
    }
    const BatchMeans bm = batch_means(rec);
    for (std::size_t i = 0; i < K; ++i) {
      const auto& xs = rec.per_arm_rewards[i];
      double sum = 0.0;
      for (double x : xs) sum += x;
      const double mean = sum / static_cast<double>(xs.size());
      const auto e = static_cast<Eigen::Index>(i);
      worst = std::max(worst, std::abs((bm.first(e) + bm.second(e) + bm.third(e)) / 3.0 - mean));
    }
  }
  c.passed = worst <= 1e-12;
  c.detail = describe(records, " records, max deviation ", worst);
  return c;
}

/// Moments from `episodes` stratified episodes with `batch` Bernoulli samples
/// per arm and batch.
inline MomentEstimates simulated_moments(const ModelSet& set, std::size_t episodes,
                                         std::size_t batch, std::uint64_t seed) {
  Rng rng(seed);
  const auto K = static_cast<Eigen::Index>(set.num_arms());
  MomentEstimates mom(set.num_arms());
  for (std::size_t e = 0; e < episodes; ++e) {
    const ModelIndex t = e % set.num_models();
    BatchMeans bm{Vector(K), Vector(K), Vector(K)};
    for (Vector* v : {&bm.first, &bm.second, &bm.third})
      for (Eigen::Index i = 0; i < K; ++i) {
        std::size_t hits = 0;
        for (std::size_t x = 0; x < batch; ++x) hits += rng.bernoulli(set.mean(t, static_cast<ArmIndex>(i)));
        (*v)(i) = static_cast<double>(hits) / static_cast<double>(batch);
      }
    accumulate_moments(mom, bm);
  }
  return mom;
}

/// Deterministic tensor-perturbation bound wherever its precondition holds.
inline AuditCheck moment_error_bound(const ModelSet& base, std::uint64_t seed) {
  AuditCheck c{"moment_error_bound", true, {}};
  Rng rng(seed);
  std::size_t instances = 0, with_condition = 0, violations = 0;
  std::vector<ModelSet> sets{base};
  for (int k = 0; k < 5; ++k) sets.push_back(random_model_set(2 + rng.below(2), 5, rng.next()));
  for (const ModelSet& set : sets) {
    try {
      check_identifiability(set);
    } catch (const std::exception&) {
      continue;
    }
    for (std::size_t episodes : {500, 5000})
      for (std::size_t batch : {10, 100}) {
        const MomentEstimates mom = simulated_moments(set, episodes, batch, rng.next());
        const MomentErrorReport r = moment_error_audit(set, mom, set.num_models(), {32, 256, rng.next()});
        ++instances;
        if (r.condition_holds) ++with_condition;
        if (!r.bound_satisfied()) ++violations;
      }
  }
  c.passed = violations == 0;
  c.detail = describe(instances, " moment instances, precondition held in ", with_condition, ", ",
                      violations, " violations");
  return c;
}

/// Estimates within `radius` of the truth, clamped to [0,1].
inline Matrix perturbed_models(const ModelSet& set, double radius, Rng& rng) {
  Matrix est = set.means();
  for (Eigen::Index t = 0; t < est.rows(); ++t)
    for (Eigen::Index i = 0; i < est.cols(); ++i)
      est(t, i) = std::clamp(est(t, i) + radius * (2.0 * rng.uniform() - 1.0), 0.0, 1.0);
  return est;
}

struct UmucbAuditResult {
  AuditCheck restriction;
  AuditCheck pull_bounds;
};

/// umUCB on perturbed models: the post-initialization arm restriction on
/// every episode and the per-arm pull bounds within a delta failure budget.
inline UmucbAuditResult umucb_audits(const ModelSet& set, std::size_t episodes, std::size_t n,
                                     double delta, std::uint64_t seed) {
  UmucbAuditResult out{{"umucb_arm_restriction", true, {}}, {"pull_bounds", true, {}}};
  ConfidenceParams params = default_confidence(n, set.num_models(), set.num_arms(),
                                               RadiusVariant::UMUCB);
  params.delta = delta;
  Rng rng(seed);
  const std::size_t K = set.num_arms();
  std::size_t restriction_violations = 0, failing_episodes = 0;
  const double radii[] = {0.0, 0.01, 0.05, 0.1};
  for (std::size_t e = 0; e < episodes; ++e) {
    const ModelIndex theta = e % set.num_models();
    const double radius = radii[(e / set.num_models()) % std::size(radii)];
    const Matrix est = perturbed_models(set, radius, rng);
    const RunRecord rec = umucb_episode(est, radius, theta, set, n, params, derive_seed(seed, e));
    const ArmSet allowed = nondominated_arms(est, radius);
    for (std::size_t t = 3 * K; t < rec.arm_sequence.size(); ++t)
      if (!contains(allowed, rec.arm_sequence[t])) ++restriction_violations;
    const auto cls = classify_sets(est, radius, theta, set);
    if (!audit_pull_bounds(rec, cls, est, radius, set, theta, params).all_pass) ++failing_episodes;
  }
  out.restriction.passed = restriction_violations == 0;
  out.restriction.detail = describe(episodes, " episodes, ", restriction_violations, " violations");
  const double rate = static_cast<double>(failing_episodes) / static_cast<double>(episodes);
  out.pull_bounds.passed = rate <= delta;
  out.pull_bounds.detail = describe(failing_episodes, " of ", episodes,
                                    " episodes exceed a bound (rate ", rate, ", budget ", delta, ")");
  return out;
}

}  // namespace audit

/// Invariant checks across the library, seeded from cfg.master_seed and run
/// on the configured model set where one is needed.
inline AuditReport audit_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelSet set = resolve_model_source(cfg.model_source);
  const std::uint64_t s = cfg.master_seed;
  PowerMethodOptions rtp;
  rtp.restarts = cfg.rtp.L;
  rtp.iterations = cfg.rtp.N;
  rtp.tolerance = cfg.rtp.tol;
  rtp.seed = derive_seed(s, 10);

  AuditReport report;
  try {
    report.checks.push_back(audit::exact_moment_pipeline(set, rtp));
  } catch (const std::exception& e) {
    report.checks.push_back({"exact_moment_pipeline", false, e.what()});
  }
  report.checks.push_back(audit::whitening_identities(100, derive_seed(s, 11)));
  report.checks.push_back(audit::mucb_restriction(set, 1000, cfg.n, derive_seed(s, 12)));
  auto um = audit::umucb_audits(set, 500, std::max(cfg.n, 3 * set.num_arms()), 0.05,
                                derive_seed(s, 13));
  report.checks.push_back(std::move(um.restriction));
  report.checks.push_back(audit::gap_dominance(10000, derive_seed(s, 14)));
  report.checks.push_back(audit::batch_mean_identity(200, derive_seed(s, 15)));
  report.checks.push_back(audit::moment_error_bound(set, derive_seed(s, 16)));
  report.checks.push_back(std::move(um.pull_bounds));
  return report;
}

}  // namespace tucb::harness
