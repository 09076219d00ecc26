#pragma once

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "tucb/episode.hpp"
#include "tucb/harness/config.hpp"
#include "tucb/harness/fixtures.hpp"
#include "tucb/harness/report.hpp"
#include "tucb/spectral/diagnostics.hpp"
#include "tucb/transfer/tucb.hpp"

namespace tucb::harness {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuiteResult {
  ModelSet models;
  std::vector<ReportRow> rows;
  std::vector<ComplexityRow> complexity;
  std::vector<ModelsCheckpointRows> checkpoints;
  nlohmann::json diagnostics;
};

inline std::uint64_t replication_seed(std::uint64_t master, std::size_t replication) {
  return derive_seed(master, 0x5eedULL + replication);
}

/// Runs `work(r)` for r in [0, count) on up to `threads` workers. Results are
/// indexed by r, so the outcome does not depend on scheduling.
template <class Result, class Work>
std::vector<Result> parallel_replications(std::size_t count, std::size_t threads, Work&& work) {
  std::vector<Result> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < count; r = next++) {
      try {
        out[r] = work(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(threads, count));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace detail {

struct ReplicationOutput {
  std::vector<std::vector<ReportRow>> per_policy;
  std::vector<Checkpoint> checkpoints;
  std::optional<MomentEstimates> final_moments;
};

inline ReplicationOutput run_replication(const ModelSet& set, const ExperimentConfig& cfg,
                                         std::size_t r) {
  const std::uint64_t seed = replication_seed(cfg.master_seed, r);
  const auto tasks = draw_tasks(set, cfg.J, task_seed(seed), cfg.task_sampling);
  ConfidenceParams params;
  params.delta = cfg.effective_delta();
  params.horizon_n = cfg.n;
  params.num_models_m = set.num_models();
  params.num_arms_K = set.num_arms();
  params.variant = cfg.radius;

  ReplicationOutput out;
  for (Policy policy : cfg.policies) {
    std::vector<ReportRow> rows;
    rows.reserve(cfg.J);
    const std::string name(policy_name(policy));
    if (policy == Policy::TUCB) {
      TransferConfig tc;
      tc.delta = cfg.effective_delta();
      tc.c_theta = cfg.c_theta;
      tc.estimate_every = cfg.estimate_every;
      tc.rtp.restarts = cfg.rtp.L;
      tc.rtp.iterations = cfg.rtp.N;
      tc.rtp.tolerance = cfg.rtp.tol;
      tc.master_seed = seed;
      tc.checkpoint_every = cfg.checkpoint_every;
      TransferReport rep = run_tucb(set, tasks, cfg.n, tc);
      for (const auto& e : rep.episodes)
        rows.push_back({name, e.theta_bar + 1, e.episode, r, e.regret, e.cumulative_regret,
                        e.model_error, e.epsilon_j});
      out.checkpoints = std::move(rep.checkpoints);
      out.final_moments = std::move(rep.final_state.moments);
    } else {
      double cumulative = 0.0;
      for (std::size_t j = 1; j <= cfg.J; ++j) {
        const RunRecord rec =
            run_episode(policy, set, tasks[j - 1], cfg.n, episode_seed(seed, j), params);
        cumulative += rec.regret;
        ReportRow row;
        row.policy = name;
        row.theta_bar = tasks[j - 1] + 1;
        row.episode = j;
        row.replication = r;
        row.regret = rec.regret;
        row.cumulative_regret = cumulative;
        rows.push_back(row);
      }
    }
    out.per_policy.push_back(std::move(rows));
  }
  return out;
}

}  // namespace detail

/// Policy x replication x episode grid plus complexity table and diagnostics.
/// Deterministic given the master seed, for any thread count.
inline SuiteResult run_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  ModelSet set = resolve_model_source(cfg.model_source);
  if (cfg.n < set.num_arms()) throw ConfigError(0, "n must be at least K");
  for (Policy p : cfg.policies)
    if (p == Policy::TUCB && cfg.n < 3 * set.num_arms())
      throw ConfigError(0, "tUCB needs n >= 3K");

  auto reps = parallel_replications<detail::ReplicationOutput>(
      cfg.replications, cfg.threads,
      [&](std::size_t r) { return detail::run_replication(set, cfg, r); });

  SuiteResult result{set, {}, complexity_report(set), {}, nlohmann::json::object()};
  for (std::size_t p = 0; p < cfg.policies.size(); ++p)
    for (auto& rep : reps)
      result.rows.insert(result.rows.end(), rep.per_policy[p].begin(), rep.per_policy[p].end());
  for (std::size_t r = 0; r < reps.size(); ++r)
    for (auto& cp : reps[r].checkpoints) result.checkpoints.push_back({r, std::move(cp)});

  auto& diag = result.diagnostics;
  try {
    diag["spectrum"] = to_json(spectrum_diagnostics(set));
  } catch (const std::exception& e) {
    diag["spectrum"] = {{"error", e.what()}};
  }
  if (!reps.empty() && reps.front().final_moments) {
    try {
      diag["moment_error"] = to_json(moment_error_audit(set, *reps.front().final_moments,
                                                        set.num_models(),
                                                        {32, 256, cfg.master_seed}));
      diag["moment_error"]["episodes"] = reps.front().final_moments->episodes_seen;
    } catch (const std::exception& e) {
      diag["moment_error"] = {{"error", e.what()}};
    }
  }
  diag["config"] = {{"model_source", cfg.model_source},
                    {"J", cfg.J},
                    {"n", cfg.n},
                    {"replications", cfg.replications},
                    {"delta", cfg.effective_delta()},
                    {"c_theta", cfg.c_theta},
                    {"master_seed", cfg.master_seed}};
  return result;
}

/// Writes regret.csv, complexity.csv, models_estimated.csv and diagnostics.json.
inline void write_suite(const SuiteResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + (fs::path(dir) / name).string() + "'");
    return f;
  };
  {
    auto f = open("regret.csv");
    write_regret_csv(f, result.rows);
  }
  {
    auto f = open("complexity.csv");
    write_complexity_csv(f, result.complexity);
  }
  {
    auto f = open("models_estimated.csv");
    write_models_csv(f, result.models, result.checkpoints);
  }
  {
    auto f = open("diagnostics.json");
    f << result.diagnostics.dump(2) << '\n';
    if (!f) throw IoError("write failure in diagnostics.json");
  }
}

}  // namespace tucb::harness
