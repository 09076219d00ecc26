// tucb: command-line runner for the single-task and transfer bandit experiments.

#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tucb/harness/audit.hpp"
#include "tucb/harness/suite.hpp"
#include "tucb/tucb.hpp"

namespace {

using namespace tucb;
using namespace tucb::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitIo = 3;

/// Flags that mirror ExperimentConfig keys; applied after the config file.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key = value config file");
    app->add_option("--seed", seed, "master seed (overrides master_seed)");
    static const std::pair<const char*, std::string> keys[] = {
        {"model_source", "builtin-paper, random:<m>x<K>:<seed>, or a model file"},
        {"policies", "comma list of UCB, UCB+, mUCB, tUCB, or 'all'"},
        {"J", "episodes per replication"},
        {"n", "steps per episode"},
        {"replications", "independent replications"},
        {"delta", "confidence level (default 1/n)"},
        {"c_theta", "constant in the model-estimate radius"},
        {"estimate_every", "episodes between spectral re-estimations"},
        {"rtp_L", "power-method restarts"},
        {"rtp_N", "power-method iterations"},
        {"rtp_tol", "power-method stopping tolerance"},
        {"master_seed", "master seed"},
        {"output_dir", std::string("output directory (default $") + kOutputDirEnv + " or results)"},
        {"task_sampling", "stratified or rho"},
        {"radius", "baseline confidence radius: mucb or umucb"},
        {"threads", "worker threads for replications"},
        {"checkpoint_every", "episodes between model checkpoints (0: final only)"},
    };
    for (const auto& [key, help] : keys) {
      std::string flag = "--" + std::string(key);
      for (char& ch : flag)
        if (ch == '_') ch = '-';
      if (std::string(key) == "J" || std::string(key) == "n") flag = "-" + std::string(key);
      app->add_option_function<std::string>(
          flag, [this, k = std::string(key)](const std::string& v) { values[k] = v; }, help);
    }
  }

  ExperimentConfig resolve(ExperimentConfig base) const {
    if (!config_file.empty()) base = load_config_file(config_file, std::move(base));
    for (const auto& [k, v] : values) apply_setting(base, k, v);
    if (seed) base.master_seed = *seed;
    base.validate();
    return base;
  }
};

void print_models(const ModelSet& set) {
  for (ModelIndex t = 0; t < set.num_models(); ++t) {
    for (ArmIndex i = 0; i < set.num_arms(); ++i)
      std::cout << (i ? "," : "") << set.mean(t, i);
    std::cout << '\n';
  }
  std::cout << "rho";
  for (ModelIndex t = 0; t < set.num_models(); ++t)
    std::cout << ',' << set.rho()(static_cast<Eigen::Index>(t));
  std::cout << '\n';
}

void print_mean_regret(const SuiteResult& result) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  std::vector<std::string> order;
  for (const auto& r : result.rows) {
    auto [it, fresh] = acc.try_emplace(r.policy, 0.0, 0);
    if (fresh) order.push_back(r.policy);
    it->second.first += r.regret;
    ++it->second.second;
  }
  for (const auto& p : order)
    std::cout << p << ": mean per-episode regret "
              << acc[p].first / static_cast<double>(acc[p].second) << '\n';
}

int run_experiment(const ExperimentConfig& cfg) {
  const SuiteResult result = run_suite(cfg);
  write_suite(result, cfg.output_dir);
  print_mean_regret(result);
  std::cout << "wrote " << cfg.output_dir << '\n';
  return kExitOk;
}

int run_spectral_check(const ExperimentConfig& cfg, std::size_t episodes, std::size_t pulls) {
  const ModelSet set = resolve_model_source(cfg.model_source);
  PowerMethodOptions rtp;
  rtp.restarts = cfg.rtp.L;
  rtp.iterations = cfg.rtp.N;
  rtp.tolerance = cfg.rtp.tol;
  rtp.seed = derive_seed(cfg.master_seed, 10);
  const MomentEstimates moments =
      episodes == 0 ? population_moments(set)
                    : audit::simulated_moments(set, episodes, std::max<std::size_t>(1, pulls / 3),
                                               derive_seed(cfg.master_seed, 20));
  std::cout << (episodes == 0 ? "population moments\n"
                              : "simulated moments: " + std::to_string(episodes) + " episodes, " +
                                    std::to_string(3 * std::max<std::size_t>(1, pulls / 3)) +
                                    " pulls per arm\n");
  const SpectralModel est = estimate_models(moments, set.num_models(), rtp);
  const ModelMatch match = match_models(set.means(), est.recovered_means);
  std::cout << "tensor eigenvalues:";
  for (Eigen::Index k = 0; k < est.eigenvalues.size(); ++k) std::cout << ' ' << est.eigenvalues(k);
  std::cout << "\nrecovered means (row order of the estimate):\n" << est.recovered_means << '\n';
  std::cout << "matched max error: " << match.max_error << '\n';
  if (est.degenerate) std::cout << "warning: degenerate tensor, some components completed\n";
  nlohmann::json diag;
  diag["spectrum"] = to_json(spectrum_diagnostics(set));
  if (episodes > 0) diag["moment_error"] = to_json(moment_error_audit(set, moments, set.num_models()));
  std::cout << diag.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer bandits with spectral model estimation"};
  app.require_subcommand(1);

  ConfigFlags flags;
  auto* models = app.add_subcommand("models", "print the model set");
  auto* complexity = app.add_subcommand("complexity", "complexity table of UCB, UCB+ and mUCB");
  auto* simulate = app.add_subcommand("simulate", "single-task policies");
  auto* transfer = app.add_subcommand("transfer", "tUCB over a task sequence");
  auto* audit_cmd = app.add_subcommand("audit", "invariant checks");
  auto* spectral = app.add_subcommand("spectral-check", "spectral estimation on population or simulated moments");
  std::size_t spectral_episodes = 0, spectral_pulls = 9;
  spectral->add_option("--episodes", spectral_episodes, "simulated episodes (0: population moments)");
  spectral->add_option("--pulls", spectral_pulls, "pulls per arm per simulated episode");
  for (auto* sub : {models, complexity, simulate, transfer, audit_cmd, spectral}) flags.attach(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ExperimentConfig base;
    if (simulate->parsed()) {
      base.policies = {Policy::UCB, Policy::UCBPlus, Policy::MUCB};
      base.task_sampling = TaskSampling::Stratified;
    } else if (transfer->parsed()) {
      base.policies = {Policy::TUCB};
      base.task_sampling = TaskSampling::Rho;
    }
    const ExperimentConfig cfg = flags.resolve(base);

    if (models->parsed()) {
      print_models(resolve_model_source(cfg.model_source));
      return kExitOk;
    }
    if (complexity->parsed()) {
      write_complexity_csv(std::cout, complexity_report(resolve_model_source(cfg.model_source)));
      return kExitOk;
    }
    if (simulate->parsed() || transfer->parsed()) return run_experiment(cfg);
    if (spectral->parsed()) return run_spectral_check(cfg, spectral_episodes, spectral_pulls);
    if (audit_cmd->parsed()) {
      const AuditReport report = audit_suite(cfg);
      for (const auto& c : report.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      return report.all_passed() ? kExitOk : kExitInvariant;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DegenerateModelError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}
