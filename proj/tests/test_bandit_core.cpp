#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tucb/harness/fixtures.hpp"
#include "tucb/tucb.hpp"

using namespace tucb;

namespace {

ModelSet reference() { return harness::builtin_paper_models(); }

Matrix rows_to_matrix(const oracle::Rows& r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r[0].size()));
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < r[0].size(); ++b) m(a, b) = r[a][b];
  return m;
}

}  // namespace

// ---- ModelSet --------------------------------------------------------------

TEST(ModelSet, BuiltinMatchesReferenceMeans) {
  const auto set = reference();
  const auto ref = oracle::reference_means();
  ASSERT_EQ(set.num_models(), 5u);
  ASSERT_EQ(set.num_arms(), 7u);
  for (std::size_t t = 0; t < 5; ++t)
    for (std::size_t i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(set.mean(t, i), ref[t][i]);
  EXPECT_DOUBLE_EQ(set.mean(3, 3), 0.725);
  EXPECT_DOUBLE_EQ(set.mean(4, 4), 0.95);
  for (ModelIndex t = 0; t < 5; ++t) EXPECT_DOUBLE_EQ(set.rho()(t), 0.2);
}

TEST(ModelSet, RejectsInvalidInput) {
  Matrix bad(1, 2);
  bad << 0.5, 1.2;
  EXPECT_THROW(ModelSet{bad}, std::invalid_argument);
  Matrix ok(2, 2);
  ok << 0.1, 0.2, 0.3, 0.4;
  Vector rho(2);
  rho << 0.5, 0.6;
  EXPECT_THROW((ModelSet{ok, rho}), std::invalid_argument);
  rho << 1.2, -0.2;
  EXPECT_THROW((ModelSet{ok, rho}), std::invalid_argument);
  EXPECT_THROW(ModelSet{Matrix(0, 3)}, std::invalid_argument);
  const ModelSet s(ok);
  EXPECT_THROW(s.mean(2, 0), std::out_of_range);
  EXPECT_THROW(s.mean(0, 2), std::out_of_range);
}

TEST(Gaps, ArmGapExamples) {
  const auto set = reference();
  EXPECT_NEAR(arm_gap(set, 2, 0), 0.25, 1e-12);
  EXPECT_EQ(arm_gap(set, 4, 4), 0.0);
  EXPECT_NEAR(arm_gap(set, 3, 6), 0.255, 1e-12);
  EXPECT_THROW(arm_gap(set, 5, 0), std::out_of_range);
}

TEST(Gaps, ModelGapExamplesAndSymmetry) {
  const auto set = reference();
  EXPECT_NEAR(model_gap(set, 0, 1, 0), 0.15, 1e-12);
  EXPECT_EQ(model_gap(set, 0, 0, 2), 0.0);
  EXPECT_NEAR(model_gap(set, 4, 0, 4), 0.37, 1e-12);
  for (ModelIndex a = 0; a < 5; ++a)
    for (ModelIndex b = 0; b < 5; ++b)
      for (ArmIndex i = 0; i < 7; ++i) EXPECT_EQ(model_gap(set, a, b, i), model_gap(set, b, a, i));
}

TEST(Gaps, GapDominanceOnRandomSets) {
  Rng rng(42);
  for (int s = 0; s < 2000; ++s) {
    const auto set = harness::random_model_set(1 + rng.below(6), 2 + rng.below(7), rng.next());
    for (ModelIndex bar = 0; bar < set.num_models(); ++bar)
      for (ModelIndex t : optimistic_models(set, bar)) {
        const ArmIndex i = set.best_arm(t);
        ASSERT_GE(model_gap(set, t, bar, i), arm_gap(set, bar, i));
      }
  }
}

TEST(Sets, OptimalArmSet) {
  const auto set = reference();
  EXPECT_EQ(optimal_arm_set(set, all_models(set)), (ArmSet{0, 1, 2, 3, 4}));
  EXPECT_EQ(optimal_arm_set(set, {4}), (ArmSet{4}));
  EXPECT_THROW(optimal_arm_set(set, {}), std::invalid_argument);
  Matrix one(1, 3);
  one << 0.2, 0.7, 0.7;
  EXPECT_EQ(optimal_arm_set(ModelSet(one), {0}), (ArmSet{1}));
}

TEST(Sets, OptimisticModels) {
  const auto set = reference();
  EXPECT_EQ(optimistic_models(set, 4), (ModelSubset{4}));
  EXPECT_EQ(optimistic_models(set, 2), (ModelSubset{0, 1, 2, 3, 4}));
  EXPECT_EQ(optimistic_models(set, 0), (ModelSubset{0, 4}));
  for (ModelIndex t = 0; t < 5; ++t) EXPECT_TRUE(contains(optimistic_models(set, t), t));
}

// ---- confidence radius -----------------------------------------------------

TEST(Confidence, MucbRadiusExample) {
  ConfidenceParams p{0.01, 100, 5, 7, RadiusVariant::MUCB};
  EXPECT_NEAR(confidence_radius(2, p), oracle::radius_mucb(2, 5, 100, 0.01), 1e-14);
  EXPECT_NEAR(confidence_radius(2, p), 1.9638, 1e-3);
}

TEST(Confidence, UmucbRadiusExample) {
  ConfidenceParams p{0.01, 100, 5, 7, RadiusVariant::UMUCB};
  EXPECT_NEAR(confidence_radius(1, p), oracle::radius_umucb(1, 5, 7, 100, 0.01), 1e-14);
  EXPECT_NEAR(confidence_radius(1, p), 3.0053, 1e-4);
}

TEST(Confidence, ScalingAndMonotonicity) {
  for (auto variant : {RadiusVariant::MUCB, RadiusVariant::UMUCB}) {
    ConfidenceParams p{0.05, 1000, 5, 7, variant};
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t T = 1; T < 2000; ++T) {
      const double r = confidence_radius(T, p);
      EXPECT_LT(r, prev);
      prev = r;
      if (T < 500) EXPECT_NEAR(confidence_radius(4 * T, p) / r, 0.5, 1e-15);
    }
    EXPECT_LT(confidence_radius(std::size_t{1} << 50, p), 1e-6);
  }
}

TEST(Confidence, RejectsBadInput) {
  ConfidenceParams p{0.01, 100, 5, 7, RadiusVariant::MUCB};
  EXPECT_THROW(confidence_radius(0, p), std::invalid_argument);
  p.delta = 1.0;
  EXPECT_THROW(confidence_radius(1, p), std::invalid_argument);
}

TEST(Confidence, DefaultDeltaIsInverseHorizon) {
  const auto p = default_confidence(1000, 5, 7);
  EXPECT_DOUBLE_EQ(p.delta, 1e-3);
}

// ---- selection rules -------------------------------------------------------

TEST(UcbSelect, TieBreaksToLowestArm) {
  const auto s = ArmStatistics::from_counts({5, 5, 5}, {0.4, 0.4, 0.4});
  EXPECT_EQ(ucb_select(s, ConfidenceParams{0.01, 100, 1, 3}), 0u);
}

TEST(UcbSelect, DominantArm) {
  const auto s = ArmStatistics::from_counts({100, 100, 100}, {0.1, 0.9, 0.1});
  EXPECT_EQ(ucb_select(s, ConfidenceParams{0.01, 100, 1, 3}), 1u);
}

TEST(UcbSelect, FewPullsWinOverHigherMean) {
  const ConfidenceParams p{0.01, 100, 1, 2};
  const auto s = ArmStatistics::from_counts({1, 400}, {0.5, 0.6});
  ASSERT_GT(0.5 + oracle::radius_mucb(1, 1, 100, 0.01), 0.6 + oracle::radius_mucb(400, 1, 100, 0.01));
  EXPECT_EQ(ucb_select(s, p), 0u);
}

TEST(UcbSelect, RequiresEveryArmPulled) {
  const auto s = ArmStatistics::from_counts({1, 0}, {0.5, 0.0});
  EXPECT_THROW(ucb_select(s, ConfidenceParams{}), std::invalid_argument);
}

TEST(UcbPlusSelect, RestrictionAndSingleton) {
  Rng rng(3);
  const ConfidenceParams p{0.01, 1000, 5, 7};
  for (int k = 0; k < 500; ++k) {
    std::vector<std::size_t> pulls(7);
    std::vector<double> means(7);
    for (int i = 0; i < 7; ++i) {
      pulls[i] = 1 + rng.below(50);
      means[i] = rng.uniform();
    }
    const auto s = ArmStatistics::from_counts(pulls, means);
    EXPECT_EQ(ucb_plus_select(s, {0, 1, 2, 3, 4, 5, 6}, p), ucb_select(s, p));
    EXPECT_LT(ucb_plus_select(s, {0, 1, 2, 3, 4}, p), 5u);
    EXPECT_EQ(ucb_plus_select(s, {3}, p), 3u);
  }
  const auto s = ArmStatistics::from_counts({1, 1}, {0.1, 0.2});
  EXPECT_THROW(ucb_plus_select(s, {}, p), std::invalid_argument);
}

TEST(MucbStep, AllModelsCompatiblePicksLargestOptimum) {
  const auto set = reference();
  const auto s = ArmStatistics::from_counts({1, 1, 1, 1, 1, 0, 0}, {0.5, 0.5, 0.5, 0.5, 0.5, 0, 0});
  const auto d = mucb_step(set, s, default_confidence(1000, 5, 7));
  EXPECT_EQ(d.active.size(), 5u);
  EXPECT_EQ(d.arm, 4u);
  EXPECT_FALSE(d.initializing);
}

TEST(MucbStep, ExactEstimatesSelectTrueOptimum) {
  const auto set = reference();
  for (ModelIndex bar = 0; bar < 5; ++bar) {
    std::vector<double> means(7);
    for (ArmIndex i = 0; i < 7; ++i) means[i] = set.mean(bar, i);
    const auto s = ArmStatistics::from_counts(std::vector<std::size_t>(7, 1000000), means);
    const auto d = mucb_step(set, s, default_confidence(1000, 5, 7));
    EXPECT_EQ(d.active, (ModelSubset{bar}));
    EXPECT_EQ(d.arm, set.best_arm(bar));
  }
}

TEST(MucbStep, InitializesOptimalArmsFirst) {
  const auto set = reference();
  ArmStatistics s(7);
  std::vector<ArmIndex> order;
  for (int k = 0; k < 5; ++k) {
    const auto d = mucb_step(set, s, default_confidence(1000, 5, 7));
    EXPECT_TRUE(d.initializing);
    order.push_back(d.arm);
    s.record(d.arm, 0.5);
  }
  EXPECT_EQ(order, (std::vector<ArmIndex>{0, 1, 2, 3, 4}));
  EXPECT_FALSE(mucb_step(set, s, default_confidence(1000, 5, 7)).initializing);
}

TEST(MucbStep, EmptyActiveSetFallsBackToRestrictedUcb) {
  const auto set = reference();
  // means far from every model on arm 3 with a tight radius
  const auto s = ArmStatistics::from_counts(std::vector<std::size_t>(7, 100000),
                                            {0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.5});
  const auto d = mucb_step(set, s, default_confidence(1000, 5, 7));
  EXPECT_TRUE(d.active.empty());
  EXPECT_TRUE(d.fallback);
  EXPECT_LT(d.arm, 5u);
}

// ---- episodes and regret ---------------------------------------------------

TEST(RunEpisode, AccountingAndDeterminism) {
  const auto set = reference();
  for (Policy p : {Policy::UCB, Policy::UCBPlus, Policy::MUCB}) {
    const auto a = run_episode(p, set, 4, 1000, 7);
    EXPECT_EQ(a.steps(), 1000u);
    for (ArmIndex i = 0; i < 7; ++i) EXPECT_EQ(a.per_arm_rewards[i].size(), a.per_arm_pulls[i]);
    EXPECT_GE(a.regret, 0.0);
    const auto b = run_episode(p, set, 4, 1000, 7);
    EXPECT_EQ(a.arm_sequence, b.arm_sequence);
    EXPECT_EQ(a.per_arm_rewards, b.per_arm_rewards);
    EXPECT_EQ(a.regret, b.regret);
  }
}

TEST(RunEpisode, SingleArmHasNoRegret) {
  Matrix one(1, 1);
  one << 0.3;
  const auto rec = run_episode(Policy::UCB, ModelSet(one), 0, 50, 1);
  EXPECT_EQ(rec.regret, 0.0);
  EXPECT_EQ(rec.steps(), 50u);
}

TEST(RunEpisode, RejectsShortHorizonAndTransferPolicy) {
  const auto set = reference();
  EXPECT_THROW(run_episode(Policy::UCB, set, 0, 6, 1), std::invalid_argument);
  EXPECT_THROW(run_episode(Policy::TUCB, set, 0, 100, 1), std::invalid_argument);
  EXPECT_THROW(run_episode(Policy::UCB, set, 5, 100, 1), std::out_of_range);
}

TEST(RunEpisode, SharedRewardTapeAcrossPolicies) {
  const auto set = reference();
  const auto a = run_episode(Policy::UCB, set, 1, 500, 99);
  const auto b = run_episode(Policy::MUCB, set, 1, 500, 99);
  for (ArmIndex i = 0; i < 7; ++i) {
    const auto n = std::min(a.per_arm_rewards[i].size(), b.per_arm_rewards[i].size());
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(a.per_arm_rewards[i][k], b.per_arm_rewards[i][k]);
  }
}

TEST(RunEpisode, MucbArmRestrictionOnRandomSets) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto set = harness::random_model_set(2 + rng.below(4), 3 + rng.below(6), rng.next());
    const ArmSet allowed = optimal_arm_set(set, all_models(set));
    const ModelIndex bar = rng.below(set.num_models());
    const auto rec = run_episode(Policy::MUCB, set, bar, 300, rng.next());
    for (ArmIndex i = 0; i < set.num_arms(); ++i)
      if (!contains(allowed, i)) ASSERT_EQ(rec.per_arm_pulls[i], 0u);
  }
}

TEST(RunEpisode, MucbOnModelFiveRarelyLeavesOptimalArm) {
  const auto set = reference();
  int clean = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto rec = run_episode(Policy::MUCB, set, 4, 5000, seed);
    std::size_t others = 0;
    for (ArmIndex i = 0; i < 7; ++i)
      if (i != 4) others += rec.per_arm_pulls[i];
    if (others <= 4) ++clean;  // the four initialization pulls of arms 1-4
  }
  EXPECT_GE(clean, 190);
}

TEST(EpisodeRegret, WorkedExample) {
  const auto set = reference();
  RunRecord rec;
  rec.per_arm_pulls = {10, 0, 80, 10, 0, 0, 0};
  EXPECT_NEAR(episode_regret(rec, set, 2), 3.5, 1e-12);
  rec.per_arm_pulls = {0, 0, 100, 0, 0, 0, 0};
  EXPECT_EQ(episode_regret(rec, set, 2), 0.0);
}

TEST(EpisodeRegret, AdditiveOverPartitions) {
  const auto set = reference();
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    RunRecord a, b, sum;
    for (int i = 0; i < 7; ++i) {
      a.per_arm_pulls.push_back(rng.below(30));
      b.per_arm_pulls.push_back(rng.below(30));
      sum.per_arm_pulls.push_back(a.per_arm_pulls.back() + b.per_arm_pulls.back());
    }
    const ModelIndex bar = rng.below(5);
    EXPECT_NEAR(episode_regret(sum, set, bar), episode_regret(a, set, bar) + episode_regret(b, set, bar), 1e-10);
  }
}

TEST(EpisodeRegret, RejectsInconsistentRecord) {
  const auto set = reference();
  RunRecord rec;
  rec.per_arm_pulls = {1, 2};
  EXPECT_THROW(episode_regret(rec, set, 0), std::invalid_argument);
  rec.per_arm_pulls = {1, 0, 0, 0, 0, 0, 0};
  rec.per_arm_rewards.assign(7, {});
  EXPECT_THROW(episode_regret(rec, set, 0), std::invalid_argument);
}

// ---- complexity -------------------------------------------------------------

TEST(Complexity, MatchesOracleAndPublishedValues) {
  const auto set = reference();
  const auto mu = oracle::reference_means();
  const auto published = oracle::reference_complexity();
  const Policy policies[] = {Policy::UCB, Policy::UCBPlus, Policy::MUCB};
  for (ModelIndex t = 0; t < 5; ++t)
    for (int k = 0; k < 3; ++k) {
      const double v = complexity(set, t, policies[k]);
      EXPECT_NEAR(v, oracle::complexity(mu, t, k), 1e-10);
      EXPECT_NEAR(v, published[t][k], 0.02) << "model " << t << " column " << k;
    }
  EXPECT_EQ(complexity(set, 4, Policy::MUCB), 0.0);
}

TEST(Complexity, OrderingOnReferenceSet) {
  const auto set = reference();
  for (ModelIndex t = 0; t < 5; ++t) {
    EXPECT_LE(complexity(set, t, Policy::MUCB), complexity(set, t, Policy::UCBPlus));
    EXPECT_LE(complexity(set, t, Policy::UCBPlus), complexity(set, t, Policy::UCB));
  }
}

TEST(Complexity, OracleAgreementOnRandomSets) {
  Rng rng(8);
  for (int k = 0; k < 300; ++k) {
    const auto set = harness::random_model_set(1 + rng.below(5), 2 + rng.below(6), rng.next());
    const auto mu = oracle::to_rows(set.means());
    for (ModelIndex t = 0; t < set.num_models(); ++t) {
      EXPECT_NEAR(complexity(set, t, Policy::UCB), oracle::complexity(mu, t, 0), 1e-8);
      EXPECT_NEAR(complexity(set, t, Policy::UCBPlus), oracle::complexity(mu, t, 1), 1e-8);
      EXPECT_NEAR(complexity(set, t, Policy::MUCB), oracle::complexity(mu, t, 2), 1e-8);
    }
  }
}

TEST(Complexity, SingleModelIsZeroForMucb) {
  Matrix one(1, 4);
  one << 0.1, 0.5, 0.3, 0.2;
  EXPECT_EQ(complexity(ModelSet(one), 0, Policy::MUCB), 0.0);
}

TEST(Complexity, ZeroGapIsReported) {
  Matrix m(2, 3);
  m << 0.5, 0.5, 0.1,
       0.2, 0.3, 0.9;
  EXPECT_THROW(complexity(ModelSet(m), 0, Policy::UCB), DegenerateModelError);
  EXPECT_NO_THROW(complexity(ModelSet(rows_to_matrix({{0.5, 0.2}, {0.5, 0.2}})), 0, Policy::UCB));
}
